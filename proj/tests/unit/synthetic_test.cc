#include "parsec/synthetic.h"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "parsec/sentiment.h"

namespace parsec {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Synthetic, DeterministicAndBalanced) {
  synthetic::Options o;
  o.instances = 51;
  const Corpus a = synthetic::generate(o);
  EXPECT_EQ(a, synthetic::generate(o));
  validate(a);
  std::size_t positive = 0;
  for (const auto& i : a.instances) positive += i.label == Label::kPositive;
  EXPECT_EQ(positive, 26u);
  o.seed = 2;
  EXPECT_NE(a, synthetic::generate(o));
}

TEST(Synthetic, SentimentWordsAreAboutTenPercent) {
  synthetic::Options o;
  o.instances = 300;
  const Corpus c = synthetic::generate(o);
  const Lexicon lex = parse_lexicon(synthetic::lexicon_text());
  std::size_t words = 0, polar = 0;
  for (const auto& inst : c.instances) {
    EXPECT_GE(inst.word_count(), o.min_words);
    for (const auto& s : inst.sentences) {
      for (const auto& w : s.words) {
        ++words;
        polar += lex.contains(w);
      }
    }
  }
  const double share = static_cast<double>(polar) / static_cast<double>(words);
  EXPECT_GT(share, 0.09);
  EXPECT_LT(share, 0.12);
}

TEST(Synthetic, BundledLexiconCoversGeneratorWords) {
  const Lexicon bundled = read_lexicon_file(PARSEC_DATA_DIR "/lexicon.tsv");
  for (const auto& w : synthetic::positive_words()) EXPECT_GT(bundled.find(w).value_or(0), 0) << w;
  for (const auto& w : synthetic::negative_words()) EXPECT_LT(bundled.find(w).value_or(0), 0) << w;
  const auto negations = read_negations_file(PARSEC_DATA_DIR "/negations.txt");
  EXPECT_TRUE(negations.contains("not"));
}

// The bundled corpora are reproducible from the generator.
struct Bundled {
  const char* file;
  const char* name;
  const char* domain;
  std::size_t instances;
  std::uint64_t seed;
};

class BundledCorpus : public ::testing::TestWithParam<Bundled> {};

TEST_P(BundledCorpus, MatchesGenerator) {
  const Bundled b = GetParam();
  synthetic::Options o;
  o.name = b.name;
  o.domain = b.domain;
  o.instances = b.instances;
  o.seed = b.seed;
  EXPECT_EQ(slurp(std::string(PARSEC_DATA_DIR "/synthetic/") + b.file),
            serialize_corpus(synthetic::generate(o)));
}

INSTANTIATE_TEST_SUITE_P(Data, BundledCorpus,
                         ::testing::Values(Bundled{"bounds.tagged", "bounds", "products", 200, 11},
                                           Bundled{"efficacy.tagged", "efficacy", "products", 400, 12},
                                           Bundled{"books.tagged", "books", "books", 300, 21},
                                           Bundled{"music.tagged", "music", "music", 300, 22},
                                           Bundled{"toys.tagged", "toys", "toys", 300, 23}));

}  // namespace
}  // namespace parsec
