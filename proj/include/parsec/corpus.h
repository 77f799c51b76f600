// Tagged-corpus data model and the vertical (one token per line) file format.
//
// A corpus file is a sequence of labeled instances (reviews):
//
//   #label positive
//   this<TAB>DT
//   is<TAB>VBZ
//   ...
//   <blank line>            sentence boundary
//   <blank line><blank line> or the next "#label" line: instance boundary
//
// Words and tags are kept as aligned parallel arrays so that deleting a word
// always deletes its tag.

#ifndef PARSEC_CORPUS_H_
#define PARSEC_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parsec/pos_tag.h"

namespace parsec {

// Gold labels are only ever kPositive or kNegative; kNeutral is produced by
// classifiers when a score is exactly zero.
enum class Label : std::uint8_t { kPositive, kNegative, kNeutral };

std::string_view label_name(Label label);

struct TaggedSentence {
  std::vector<std::string> words;
  std::vector<PosTag> tags;

  std::size_t size() const { return words.size(); }
  bool empty() const { return words.empty(); }

  friend bool operator==(const TaggedSentence&, const TaggedSentence&) = default;
};

struct LabeledInstance {
  std::vector<TaggedSentence> sentences;
  Label label = Label::kPositive;

  std::size_t word_count() const;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

struct Corpus {
  std::string name;
  std::vector<LabeledInstance> instances;

  std::size_t size() const { return instances.size(); }

  // Equality ignores the name.
  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.instances == b.instances;
  }
};

class CorpusError : public std::runtime_error {
 public:
  enum class Kind {
    kMisalignedLine,
    kUnknownTag,
    kMissingLabel,
    kEmptyInstance,
    kEmptyCorpus,
    kTooFewInstances,
    kInvalidSentence,
  };

  CorpusError(Kind kind, std::size_t line, const std::string& message);

  Kind kind() const { return kind_; }
  // 1-based line number, or 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

struct ParseOptions {
  // Compressed corpora may contain instances whose every word was deleted;
  // such instances are written as a bare header line.
  bool allow_empty_instances = false;
};

// Throws CorpusError on malformed input. The returned corpus satisfies every
// invariant checked by validate() (except instance non-emptiness when
// allowed by the options).
Corpus parse_tagged_corpus(std::istream& in, std::string name = {},
                           const ParseOptions& options = {});
Corpus parse_tagged_corpus(std::string_view text, std::string name = {},
                           const ParseOptions& options = {});
// The corpus name is the file stem.
Corpus read_corpus_file(const std::string& path, const ParseOptions& options = {});

void write_tagged_corpus(std::ostream& out, const Corpus& corpus);
std::string serialize_corpus(const Corpus& corpus);

// Checks alignment, the absence of wildcard tags, binary gold labels,
// non-empty instances and a non-empty corpus.
void validate(const Corpus& corpus);

std::size_t corpus_word_count(const Corpus& corpus);

// Stratified by label: each label's instances are shuffled with `seed` and
// the first round(train_fraction * n_label) go to train. Both halves keep the
// original relative order of instances. Requires >= 2 instances per label
// present.
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           double train_fraction,
                                           std::uint64_t seed);

// 64-bit FNV-1a of the serialized corpus, as 16 hex digits.
std::string corpus_digest(const Corpus& corpus);

// Words joined by single spaces, sentences joined by single spaces.
std::string instance_text(const LabeledInstance& instance);

}  // namespace parsec

#endif  // PARSEC_CORPUS_H_
