// Rule-based compressors over POS-tag patterns.
//
// A Rule is a tag pattern plus the pattern offsets ("decisions") whose
// matched words are deleted. A Compressor applies its rules in order; each
// rule flags every match against the sentence as it stood when that rule
// started, then deletes the flagged words in one sweep, so the next rule sees
// the compressed sentence. A window that contains a punctuation tag never
// matches, and the wildcard matches any word tag but no punctuation.

#ifndef PARSEC_COMPRESSOR_H_
#define PARSEC_COMPRESSOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parsec/corpus.h"
#include "parsec/pos_tag.h"

namespace parsec {

struct Rule {
  std::vector<PosTag> tags;
  // Sorted, unique, each < tags.size().
  std::vector<std::uint32_t> decisions;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Compressor {
  std::vector<Rule> rules;

  std::size_t size() const { return rules.size(); }

  friend bool operator==(const Compressor&, const Compressor&) = default;
};

// Configured size limits for rules and compressors.
struct RuleLimits {
  std::size_t tags_min = 1;
  std::size_t tags_max = SIZE_MAX;
  std::size_t rules_min = 1;
  std::size_t rules_max = SIZE_MAX;
};

class ModelError : public std::runtime_error {
 public:
  enum class Kind { kParseError, kInvariantViolation };

  ModelError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Empty string when the rule is valid, otherwise a description of the first
// violated invariant.
std::string rule_violation(const Rule& rule, const RuleLimits& limits = {});
std::string compressor_violation(const Compressor& compressor,
                                 const RuleLimits& limits = {});

// Throws ModelError(kInvariantViolation).
void validate(const Compressor& compressor, const RuleLimits& limits = {});

bool match_rule_at(const Rule& rule, std::span<const PosTag> tags, std::size_t start);

TaggedSentence apply_rule(const Rule& rule, const TaggedSentence& sentence);
TaggedSentence apply_compressor(const Compressor& compressor,
                                const TaggedSentence& sentence);
LabeledInstance apply_compressor(const Compressor& compressor,
                                 const LabeledInstance& instance);
Corpus apply_compressor(const Compressor& compressor, const Corpus& corpus);

// Reusable scratch buffers for compressing many sentences without
// allocating. Not thread-safe; use one per thread.
class SentenceCompressor {
 public:
  // Positions (into `tags`) of the words that survive `compressor`, in
  // increasing order. The returned span is valid until the next call.
  std::span<const std::uint32_t> survivors(const Compressor& compressor,
                                           std::span<const PosTag> tags);

 private:
  std::vector<PosTag> tags_;
  std::vector<std::uint32_t> positions_;
  std::vector<std::uint8_t> flags_;
};

// 100 * deleted words / original words over the whole corpus; 0 for a
// corpus without words.
double compression_rate(const Compressor& compressor, const Corpus& corpus);

// Model file: {"rules": [{"tags": ["JJ", "NN"], "decisions": [0]}, ...]}
// with the wildcard written as "*".
std::string serialize_model(const Compressor& compressor);
// Throws ModelError. Decisions are accepted in any order but must be unique.
Compressor deserialize_model(std::string_view text, const RuleLimits& limits = {});

Compressor read_model_file(const std::string& path, const RuleLimits& limits = {});
void write_model_file(const std::string& path, const Compressor& compressor);

// Human-readable one-line rendering, e.g. "[IN, *, VB] -> {1}".
std::string to_string(const Rule& rule);

}  // namespace parsec

#endif  // PARSEC_COMPRESSOR_H_
