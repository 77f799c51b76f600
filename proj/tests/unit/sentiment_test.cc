#include "parsec/sentiment.h"

#include <map>
#include <set>

#include <gtest/gtest.h>

#include "parsec/random.h"
#include "test_util.h"

namespace parsec {
namespace {

using testing::sentence;
using testing::split_ws;

const Lexicon& lexicon() {
  static const Lexicon lex({{"great", 2}, {"bad", -3}, {"fine", 1}});
  return lex;
}

double score(const std::string& text, const NegationList& neg = default_negations()) {
  const auto words = split_ws(text);
  return score_sentence(words, lexicon(), neg);
}

// Straight transcription of the scoring pseudocode.
double reference_score(const std::vector<std::string>& sentence,
                       const std::map<std::string, double>& dictionary,
                       const std::set<std::string>& negation_words) {
  double sentiment = 0;
  bool negation = false;
  for (const auto& word : sentence) {
    const bool in_dictionary = dictionary.count(word) > 0;
    if (in_dictionary && negation) sentiment = sentiment + (-1 * dictionary.at(word));
    if (in_dictionary && !negation) sentiment = sentiment + dictionary.at(word);
    if (negation_words.count(word)) {
      negation = !negation;
    } else {
      negation = false;
    }
  }
  return sentiment;
}

TEST(Score, WorkedCases) {
  EXPECT_EQ(score("great"), 2);
  EXPECT_EQ(score("not great"), -2);
  EXPECT_EQ(score("not not great"), 2);
  EXPECT_EQ(score("not very great"), 2);
  EXPECT_EQ(score("never bad"), 3);
  EXPECT_EQ(score("great but bad"), -1);
}

TEST(Score, WordsAreLowercased) {
  EXPECT_EQ(score("Not GREAT"), -2);
}

TEST(Score, NegationAppliesOnlyToTheNextWord) {
  // "great" directly after "not" is negated, and being a non-negation word
  // it clears the flag for "fine".
  EXPECT_EQ(score("not great fine"), -1);
}

TEST(Score, MatchesReferenceOnRandomSequences) {
  const std::vector<std::string> vocab = {"great", "bad", "fine", "not", "no", "x", "y", "never"};
  const std::map<std::string, double> dict = {{"great", 2}, {"bad", -3}, {"fine", 1}};
  const NegationList neg({"not", "no", "never"});
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::string> words(rng.below(12));
    for (auto& w : words) w = vocab[rng.below(vocab.size())];
    EXPECT_EQ(score_sentence(words, lexicon(), neg), reference_score(words, dict, neg.words()));
  }
}

TEST(Score, InstanceSumsSentencesAndResetsNegation) {
  LabeledInstance inst;
  inst.sentences = {sentence("great", "JJ"), sentence("bad", "JJ")};
  EXPECT_EQ(score_instance(inst, lexicon(), default_negations()), -1);
  // A negation at the end of one sentence does not reach the next.
  inst.sentences = {sentence("it is not", "PRP VBZ RB"), sentence("great", "JJ")};
  EXPECT_EQ(score_instance(inst, lexicon(), default_negations()), 2);
  inst.sentences = {sentence("it is great", "PRP VBZ JJ")};
  EXPECT_EQ(score_instance(inst, lexicon(), default_negations()), score("it is great"));
  inst.sentences = {TaggedSentence{}, TaggedSentence{}};
  EXPECT_EQ(score_instance(inst, lexicon(), default_negations()), 0);
}

TEST(Classify, SignOfScore) {
  EXPECT_EQ(classify(0.5), Label::kPositive);
  EXPECT_EQ(classify(-2), Label::kNegative);
  EXPECT_EQ(classify(0), Label::kNeutral);
}

TEST(Lexicon, RejectsEmptyAndZero) {
  EXPECT_THROW(Lexicon({}), std::invalid_argument);
  EXPECT_THROW(Lexicon({{"meh", 0}}), std::invalid_argument);
}

TEST(Lexicon, ParseWarnsOnZeroAndDuplicates) {
  std::vector<std::string> warnings;
  const Lexicon lex = parse_lexicon("# comment\ngood\t2\nmeh\t0\nGood\t3\n\nbad\t-1\n", &warnings);
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex.find("good"), 3.0);
  EXPECT_FALSE(lex.contains("meh"));
  EXPECT_EQ(warnings.size(), 2u);
}

TEST(Lexicon, MalformedLineThrows) {
  EXPECT_THROW(parse_lexicon("good\tvery\n"), std::exception);
  EXPECT_THROW(parse_lexicon("good\n"), std::exception);
}

TEST(Lexicon, DisjointFromNegations) {
  Lexicon lex({{"no", -1}, {"good", 2}});
  const auto dropped = make_disjoint(lex, default_negations());
  EXPECT_EQ(dropped, (std::vector<std::string>{"no"}));
  EXPECT_FALSE(lex.contains("no"));
  EXPECT_TRUE(lex.contains("good"));
}

TEST(Negations, DefaultList) {
  const auto n = default_negations();
  for (const char* w : {"not", "no", "never", "cannot", "n't", "without"}) EXPECT_TRUE(n.contains(w));
  EXPECT_EQ(n.words().size(), 6u);
}

TEST(Negations, ParseSkipsCommentsAndLowercases) {
  const auto n = parse_negations("# list\nNot\n\nnever\n");
  EXPECT_TRUE(n.contains("not"));
  EXPECT_TRUE(n.contains("never"));
  EXPECT_EQ(n.words().size(), 2u);
}

Corpus four_instances() {
  Corpus c;
  auto add = [&](const std::string& text, Label label) {
    LabeledInstance inst;
    inst.label = label;
    std::string tags;
    for (std::size_t i = 0; i < split_ws(text).size(); ++i) tags += "NN ";
    inst.sentences.push_back(sentence(text, tags));
    c.instances.push_back(inst);
  };
  add("great phone", Label::kPositive);
  add("bad phone", Label::kNegative);
  add("not great", Label::kNegative);
  add("plain phone", Label::kPositive);  // scores 0: neutral, wrong
  return c;
}

TEST(Accuracy, CountsNeutralAsWrong) {
  const BaselineAnalyzer analyzer(lexicon(), default_negations());
  EXPECT_DOUBLE_EQ(accuracy(four_instances(), analyzer), 75.0);
}

TEST(Accuracy, AllCorrectIsHundred) {
  Corpus c = four_instances();
  c.instances.pop_back();
  const BaselineAnalyzer analyzer(lexicon(), default_negations());
  EXPECT_DOUBLE_EQ(accuracy(c, analyzer), 100.0);
}

TEST(Accuracy, IdentityCompressorChangesNothing) {
  const BaselineAnalyzer analyzer(lexicon(), default_negations());
  const Compressor identity{{testing::rule("UH UH", {0})}};
  EXPECT_DOUBLE_EQ(accuracy(four_instances(), analyzer, &identity),
                   accuracy(four_instances(), analyzer));
}

TEST(Accuracy, CompressorCanFlipPredictions) {
  const BaselineAnalyzer analyzer(lexicon(), default_negations());
  // Deleting the first of two nouns removes "great" and "bad".
  const Compressor drop_first{{testing::rule("NN NN", {0})}};
  EXPECT_DOUBLE_EQ(accuracy(four_instances(), analyzer, &drop_first), 0.0);
}

TEST(Analyzer, ClassifyText) {
  const BaselineAnalyzer analyzer(lexicon(), default_negations());
  EXPECT_EQ(analyzer.classify_text("this is a great product"), Label::kPositive);
  EXPECT_EQ(analyzer.classify_text("not great"), Label::kNegative);
  EXPECT_EQ(analyzer.classify_text("nothing here"), Label::kNeutral);
  EXPECT_EQ(analyzer.name(), "baseline");
}

}  // namespace
}  // namespace parsec
