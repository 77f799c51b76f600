#include "parsec/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "parsec/random.h"

namespace parsec {
namespace {

constexpr std::string_view kLabelHeader = "#label";

using Kind = CorpusError::Kind;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_header(std::string_view line) {
  if (line.substr(0, kLabelHeader.size()) != kLabelHeader) return false;
  return line.size() == kLabelHeader.size() || line[kLabelHeader.size()] == ' ';
}

class Parser {
 public:
  Parser(std::string name, bool allow_empty_instances)
      : allow_empty_instances_(allow_empty_instances) {
    corpus_.name = std::move(name);
  }

  void feed(std::string_view line) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_header(line)) {
      close_instance();
      open_header(trim(line.substr(kLabelHeader.size())));
      return;
    }
    if (trim(line).empty()) {
      blank_line();
      return;
    }
    token(line);
  }

  Corpus finish() {
    close_instance();
    if (corpus_.instances.empty()) {
      throw CorpusError(Kind::kEmptyCorpus, 0, "corpus contains no instances");
    }
    return std::move(corpus_);
  }

 private:
  void open_header(std::string_view value) {
    Label label;
    if (value == "positive") {
      label = Label::kPositive;
    } else if (value == "negative") {
      label = Label::kNegative;
    } else {
      throw CorpusError(Kind::kMissingLabel, line_no_,
                        "expected '#label positive' or '#label negative', got '" +
                            std::string(value) + "'");
    }
    open_ = true;
    header_line_ = line_no_;
    current_ = LabeledInstance{};
    current_.label = label;
    blank_run_ = 0;
  }

  void blank_line() {
    close_sentence();
    if (++blank_run_ >= 2) close_instance();
  }

  void token(std::string_view line) {
    if (!open_) {
      throw CorpusError(Kind::kMissingLabel, line_no_,
                        "token before any '#label' header");
    }
    blank_run_ = 0;
    std::size_t sep = line.rfind('\t');
    if (sep == std::string_view::npos) sep = line.find_last_of(' ');
    if (sep == std::string_view::npos) {
      throw CorpusError(Kind::kMisalignedLine, line_no_,
                        "expected '<word>\\t<TAG>', got '" + std::string(line) + "'");
    }
    const std::string_view word = trim(line.substr(0, sep));
    const std::string_view tag_text = trim(line.substr(sep + 1));
    if (word.empty() || tag_text.empty()) {
      throw CorpusError(Kind::kMisalignedLine, line_no_,
                        "word or tag missing in '" + std::string(line) + "'");
    }
    const auto tag = parse_tag(tag_text);
    if (!tag) {
      throw CorpusError(Kind::kUnknownTag, line_no_,
                        "unknown tag '" + std::string(tag_text) + "'");
    }
    sentence_.words.emplace_back(word);
    sentence_.tags.push_back(*tag);
  }

  void close_sentence() {
    if (sentence_.empty()) return;
    current_.sentences.push_back(std::move(sentence_));
    sentence_ = TaggedSentence{};
  }

  void close_instance() {
    close_sentence();
    if (!open_) return;
    open_ = false;
    if (current_.word_count() == 0 && !allow_empty_instances_) {
      throw CorpusError(Kind::kEmptyInstance, header_line_, "instance has no tokens");
    }
    corpus_.instances.push_back(std::move(current_));
    current_ = LabeledInstance{};
  }

  bool allow_empty_instances_;
  Corpus corpus_;
  LabeledInstance current_;
  TaggedSentence sentence_;
  bool open_ = false;
  std::size_t line_no_ = 0;
  std::size_t header_line_ = 0;
  int blank_run_ = 0;
};

}  // namespace

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kPositive: return "positive";
    case Label::kNegative: return "negative";
    case Label::kNeutral: return "neutral";
  }
  return "neutral";
}

std::size_t LabeledInstance::word_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

CorpusError::CorpusError(Kind kind, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      kind_(kind),
      line_(line) {}

Corpus parse_tagged_corpus(std::istream& in, std::string name,
                           const ParseOptions& options) {
  Parser parser(std::move(name), options.allow_empty_instances);
  std::string line;
  while (std::getline(in, line)) parser.feed(line);
  return parser.finish();
}

Corpus parse_tagged_corpus(std::string_view text, std::string name,
                           const ParseOptions& options) {
  Parser parser(std::move(name), options.allow_empty_instances);
  while (!text.empty()) {
    const auto nl = text.find('\n');
    parser.feed(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return parser.finish();
}

Corpus read_corpus_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file '" + path + "'");
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  if (const auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) {
    name = name.substr(0, dot);
  }
  return parse_tagged_corpus(in, std::move(name), options);
}

void write_tagged_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& instance : corpus.instances) {
    out << kLabelHeader << ' ' << label_name(instance.label) << '\n';
    for (const auto& sentence : instance.sentences) {
      if (sentence.empty()) continue;
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        out << sentence.words[i] << '\t' << tag_name(sentence.tags[i]) << '\n';
      }
      out << '\n';
    }
    out << '\n';
  }
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  write_tagged_corpus(out, corpus);
  return out.str();
}

void validate(const Corpus& corpus) {
  if (corpus.instances.empty()) {
    throw CorpusError(Kind::kEmptyCorpus, 0, "corpus contains no instances");
  }
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    const auto& instance = corpus.instances[i];
    const std::string where = "instance " + std::to_string(i);
    if (instance.label == Label::kNeutral) {
      throw CorpusError(Kind::kMissingLabel, 0, where + " has a neutral gold label");
    }
    if (instance.word_count() == 0) {
      throw CorpusError(Kind::kEmptyInstance, 0, where + " has no tokens");
    }
    for (const auto& s : instance.sentences) {
      if (s.words.size() != s.tags.size()) {
        throw CorpusError(Kind::kMisalignedLine, 0, where + " has misaligned words and tags");
      }
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s.tags[j] == PosTag::kWildcard) {
          throw CorpusError(Kind::kUnknownTag, 0, where + " contains a wildcard tag");
        }
        const auto& w = s.words[j];
        if (w.empty() || w.find_first_of("\t\n\r") != std::string::npos) {
          throw CorpusError(Kind::kInvalidSentence, 0,
                            where + " contains an empty word or a word with a tab or newline");
        }
      }
    }
  }
}

std::size_t corpus_word_count(const Corpus& corpus) {
  std::size_t n = 0;
  for (const auto& instance : corpus.instances) n += instance.word_count();
  return n;
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           double train_fraction,
                                           std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    const Label label = corpus.instances[i].label;
    if (label == Label::kNeutral) {
      throw CorpusError(Kind::kMissingLabel, 0, "neutral gold label in corpus");
    }
    by_label[label == Label::kPositive ? 0 : 1].push_back(i);
  }
  std::vector<bool> in_train(corpus.instances.size(), false);
  for (std::size_t l = 0; l < 2; ++l) {
    auto& ids = by_label[l];
    if (ids.size() < 2) {
      throw CorpusError(Kind::kTooFewInstances, 0,
                        "need at least 2 " + std::string(label_name(l == 0 ? Label::kPositive : Label::kNegative)) +
                            " instances to split, found " + std::to_string(ids.size()));
    }
    Rng rng(seed, {0x5eedULL, l});
    rng.shuffle(ids);
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(ids.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, ids.size() - 1);
    for (std::size_t k = 0; k < n_train; ++k) in_train[ids[k]] = true;
  }
  Corpus train{corpus.name, {}};
  Corpus test{corpus.name, {}};
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    (in_train[i] ? train : test).instances.push_back(corpus.instances[i]);
  }
  return {std::move(train), std::move(test)};
}

std::string corpus_digest(const Corpus& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_corpus(corpus)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string instance_text(const LabeledInstance& instance) {
  std::string text;
  for (const auto& s : instance.sentences) {
    for (const auto& w : s.words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
  }
  return text;
}

}  // namespace parsec
