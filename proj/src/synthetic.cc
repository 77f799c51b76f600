#include "parsec/synthetic.h"

#include <map>
#include <stdexcept>
#include <string_view>

#include "parsec/random.h"

namespace parsec::synthetic {
namespace {

using Words = std::vector<std::string_view>;

struct Polar {
  std::string_view word;
  int value;
};

constexpr Polar kPositive[] = {
    {"great", 3},   {"excellent", 3}, {"wonderful", 3}, {"good", 2},
    {"amazing", 3}, {"fantastic", 3}, {"perfect", 3},   {"lovely", 2},
    {"superb", 3},  {"brilliant", 3}, {"enjoyable", 2}, {"nice", 2},
};

constexpr Polar kNegative[] = {
    {"terrible", -3}, {"awful", -3},        {"bad", -2},     {"horrible", -3},
    {"poor", -2},     {"boring", -2},       {"useless", -2}, {"broken", -2},
    {"annoying", -2}, {"disappointing", -2}, {"dreadful", -3}, {"flimsy", -2},
};

const std::map<std::string_view, Words>& vocabulary() {
  static const std::map<std::string_view, Words> kVocab = {
      {"DT", {"the", "a", "this", "that", "each"}},
      {"PRP", {"i", "it", "we", "they", "she", "he"}},
      {"PRP$", {"my", "our", "their", "his", "her"}},
      {"IN", {"for", "with", "in", "on", "after", "about", "from", "during"}},
      {"CC", {"and", "or"}},
      {"CD", {"two", "three", "four", "ten"}},
      {"MD", {"will", "would", "can", "should"}},
      {"VB", {"use", "buy", "keep", "give", "try", "order"}},
      {"VBP", {"think", "say", "feel", "guess"}},
      {"TO", {"to"}},
      {"NNP", {"amazon", "monday", "john", "christmas", "london"}},
      {"NNS", {"friends", "kids", "days", "weeks", "parts", "people"}},
      {"VBDa", {"bought", "ordered", "received", "used", "returned", "tried"}},
      {"VBDl", {"was", "seemed", "looked", "felt"}},
      {"VBZl", {"is", "seems", "looks", "feels"}},
      {"R", {"really", "very", "quite", "also", "just", "still"}},
      {"A", {"red", "new", "old", "small", "large", "black", "first", "long", "plastic", "main"}},
  };
  return kVocab;
}

Words nouns_for(std::string_view domain) {
  if (domain == "books") {
    return {"book", "novel", "story", "plot", "author", "chapter", "ending", "character", "cover", "edition"};
  }
  if (domain == "music") {
    return {"album", "song", "track", "voice", "band", "guitar", "chorus", "melody", "record", "singer"};
  }
  if (domain == "toys") {
    return {"toy", "game", "puzzle", "doll", "set", "piece", "box", "kit", "ball", "robot"};
  }
  return {"product", "camera", "battery", "charger", "cable", "case", "screen", "price", "design", "remote"};
}

// Slot keys: Penn tags and the vocabulary keys above, "NN" for the domain
// nouns, "S" for a sentiment adjective, "." and "," for punctuation.
const std::vector<std::vector<std::string_view>> kNeutralTemplates = {
    {"PRP", "VBDa", "DT", "NN", "IN", "DT", "NN", "."},
    {"IN", "DT", "NN", ",", "PRP", "VBDa", "PRP$", "NN", "."},
    {"DT", "NN", "VBDl", "IN", "DT", "A", "NN", "CC", "DT", "NN", "."},
    {"PRP", "MD", "VB", "DT", "NN", "IN", "NNP", "."},
    {"PRP", "VBDa", "CD", "NNS", "IN", "DT", "NN", "."},
    {"DT", "A", "NN", "VBZl", "IN", "DT", "NN", "."},
    {"PRP", "VBDa", "PRP", "TO", "PRP$", "NNS", "IN", "NNP", "."},
};

const std::vector<std::vector<std::string_view>> kSentimentTemplates = {
    {"DT", "NN", "VBDl", "R", "S", "."},
    {"PRP", "VBDa", "DT", "S", "NN", "IN", "DT", "NN", "."},
    {"DT", "A", "NN", "IN", "PRP$", "NN", "VBZl", "S", "."},
    {"IN", "DT", "NN", ",", "DT", "NN", "VBDl", "S", "."},
    {"PRP", "VBP", "DT", "NN", "VBZl", "R", "S", "CC", "DT", "NN", "VBZl", "A", "."},
    {"DT", "NN", "VBZl", "S", "."},
};

PosTag tag_for(std::string_view key) {
  static const std::map<std::string_view, PosTag> kSpecial = {
      {"VBDa", PosTag::kVBD}, {"VBDl", PosTag::kVBD}, {"VBZl", PosTag::kVBZ},
      {"R", PosTag::kRB},     {"A", PosTag::kJJ},     {"S", PosTag::kJJ},
  };
  if (auto it = kSpecial.find(key); it != kSpecial.end()) return it->second;
  const auto tag = parse_tag(key);
  if (!tag) throw std::logic_error("bad template slot");
  return *tag;
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

class Builder {
 public:
  Builder(const Options& options, Rng& rng)
      : options_(options), rng_(rng), nouns_(nouns_for(options.domain)) {}

  LabeledInstance instance(Label label) {
    LabeledInstance out;
    out.label = label;
    const std::size_t target = rng_.between(options_.min_words, options_.max_words);
    std::size_t words = 0;
    std::size_t sentiment = 0;
    while (words < target) {
      const bool want_sentiment =
          static_cast<double>(sentiment) < options_.sentiment_fraction * static_cast<double>(words + 7);
      const auto& tmpl = want_sentiment ? pick(kSentimentTemplates, rng_) : pick(kNeutralTemplates, rng_);
      TaggedSentence s;
      for (std::string_view slot : tmpl) {
        if (slot == "S") {
          sentiment_slot(label, s);
          ++sentiment;
        } else {
          add(s, word_for(slot), tag_for(slot));
        }
      }
      words += s.size();
      out.sentences.push_back(std::move(s));
    }
    return out;
  }

 private:
  void sentiment_slot(Label label, TaggedSentence& s) {
    bool positive = label == Label::kPositive;
    if (rng_.chance(options_.noise)) positive = !positive;
    if (rng_.chance(options_.negation)) {
      add(s, "not", PosTag::kRB);
      positive = !positive;
    }
    const auto& list = positive ? kPositive : kNegative;
    add(s, list[rng_.below(std::size(list))].word, PosTag::kJJ);
  }

  std::string_view word_for(std::string_view slot) {
    if (slot == "." || slot == ",") return slot;
    if (slot == "NN") return pick(nouns_, rng_);
    return pick(vocabulary().at(slot), rng_);
  }

  static void add(TaggedSentence& s, std::string_view word, PosTag tag) {
    s.words.emplace_back(word);
    s.tags.push_back(tag);
  }

  const Options& options_;
  Rng& rng_;
  Words nouns_;
};

}  // namespace

Corpus generate(const Options& options) {
  if (options.instances == 0) throw std::invalid_argument("synthetic corpus needs instances");
  if (options.min_words == 0 || options.min_words > options.max_words) {
    throw std::invalid_argument("synthetic corpus word bounds are invalid");
  }
  Rng rng(options.seed, {0x53594eULL});
  Builder builder(options, rng);
  Corpus corpus;
  corpus.name = options.name;
  for (std::size_t i = 0; i < options.instances; ++i) {
    corpus.instances.push_back(builder.instance(i % 2 == 0 ? Label::kPositive : Label::kNegative));
  }
  return corpus;
}

std::string lexicon_text() {
  std::string out;
  for (const auto& p : kPositive) out += std::string(p.word) + '\t' + std::to_string(p.value) + '\n';
  for (const auto& p : kNegative) out += std::string(p.word) + '\t' + std::to_string(p.value) + '\n';
  return out;
}

std::vector<std::string> positive_words() {
  std::vector<std::string> out;
  for (const auto& p : kPositive) out.emplace_back(p.word);
  return out;
}

std::vector<std::string> negative_words() {
  std::vector<std::string> out;
  for (const auto& p : kNegative) out.emplace_back(p.word);
  return out;
}

}  // namespace parsec::synthetic
