// Dictionary sentiment scoring with a polarity-swapping negation flag, and
// the analyzer interface used to measure accuracy before and after
// compression.

#ifndef PARSEC_SENTIMENT_H_
#define PARSEC_SENTIMENT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parsec/compressor.h"
#include "parsec/corpus.h"

namespace parsec {

using SentimentScore = double;

// ASCII lowercase; bytes outside ASCII are left alone.
std::string to_lower(std::string_view word);

// word -> sentiment value. Keys are stored lowercased; values are non-zero.
class Lexicon {
 public:
  // Throws std::invalid_argument if `entries` is empty or holds a zero value.
  explicit Lexicon(const std::map<std::string, double>& entries);

  // `word` must already be lowercased.
  std::optional<double> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }
  std::size_t size() const { return entries_.size(); }

  // Removes `word`; returns whether it was present. Removing the last entry
  // throws, since an empty lexicon is invalid.
  bool erase(std::string_view word);

  // Sorted by word.
  std::map<std::string, double> entries() const;

 private:
  std::unordered_map<std::string, double> entries_;
};

class NegationList {
 public:
  NegationList() = default;
  explicit NegationList(const std::vector<std::string>& words);

  bool contains(std::string_view lowercase_word) const {
    return words_.find(std::string(lowercase_word)) != words_.end();
  }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

// {not, no, never, cannot, n't, without}
NegationList default_negations();

// Lexicon file: "word<TAB>value" per line, '#' starts a comment line. Zero
// values and duplicate words are dropped (last value wins for duplicates)
// with a message appended to `warnings`.
Lexicon parse_lexicon(std::string_view text, std::vector<std::string>* warnings = nullptr);
Lexicon read_lexicon_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

// One word per line; blank lines and '#' comment lines ignored.
NegationList parse_negations(std::string_view text);
NegationList read_negations_file(const std::string& path);

// Drops lexicon entries that are also negation words. Returns the dropped
// words.
std::vector<std::string> make_disjoint(Lexicon& lexicon, const NegationList& negations);

// What the scorer needs to know about one token.
struct TokenPolarity {
  double value = 0.0;
  bool sentiment = false;
  bool negation = false;
};

TokenPolarity token_polarity(std::string_view word, const Lexicon& lexicon,
                             const NegationList& negations);

// The baseline scorer: walk the tokens keeping a negation flag that starts
// false; a sentiment word adds its value, or minus its value while the flag
// is set; a negation word then toggles the flag and any other word clears it.
SentimentScore score_polarities(std::span<const TokenPolarity> tokens);
// Same, restricted to tokens[p] for p in `positions` (in that order).
SentimentScore score_polarities(std::span<const TokenPolarity> tokens,
                                std::span<const std::uint32_t> positions);

SentimentScore score_sentence(std::span<const std::string> words, const Lexicon& lexicon,
                              const NegationList& negations);

// Sum of per-sentence scores; the negation flag resets at each sentence.
SentimentScore score_instance(const LabeledInstance& instance, const Lexicon& lexicon,
                              const NegationList& negations);

Label classify(SentimentScore score);

// Anything that turns text into a label. External engines plug in here.
class Analyzer {
 public:
  virtual ~Analyzer() = default;

  virtual std::string name() const = 0;
  virtual Label classify_text(std::string_view text) const = 0;

  // Defaults to classify_text(instance_text(instance)).
  virtual Label classify_instance(const LabeledInstance& instance) const;
};

class BaselineAnalyzer : public Analyzer {
 public:
  BaselineAnalyzer(Lexicon lexicon, NegationList negations)
      : lexicon_(std::move(lexicon)), negations_(std::move(negations)) {}

  std::string name() const override { return "baseline"; }
  // Whitespace tokenization, one sentence.
  Label classify_text(std::string_view text) const override;
  Label classify_instance(const LabeledInstance& instance) const override;

  const Lexicon& lexicon() const { return lexicon_; }
  const NegationList& negations() const { return negations_; }

 private:
  Lexicon lexicon_;
  NegationList negations_;
};

// Percentage of instances whose predicted label equals the gold label. A
// neutral prediction is always wrong. When `compressor` is given, every
// instance is compressed before classification.
double accuracy(const Corpus& corpus, const Analyzer& analyzer,
                const Compressor* compressor = nullptr);

}  // namespace parsec

#endif  // PARSEC_SENTIMENT_H_
