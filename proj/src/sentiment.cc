#include "parsec/sentiment.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace parsec {
namespace {

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot open ") + what + " file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    fn(++line_no, trim(text.substr(0, nl)));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

inline void accumulate(const TokenPolarity& t, double& score, bool& negated) {
  if (t.sentiment && negated) score += -1.0 * t.value;
  if (t.sentiment && !negated) score += t.value;
  if (t.negation) {
    negated = !negated;
  } else {
    negated = false;
  }
}

}  // namespace

std::string to_lower(std::string_view word) {
  std::string out(word);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Lexicon::Lexicon(const std::map<std::string, double>& entries) {
  if (entries.empty()) throw std::invalid_argument("lexicon is empty");
  for (const auto& [word, value] : entries) {
    if (value == 0.0) {
      throw std::invalid_argument("lexicon entry '" + word + "' has value 0");
    }
    entries_[to_lower(word)] = value;
  }
}

std::optional<double> Lexicon::find(std::string_view word) const {
  const auto it = entries_.find(std::string(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool Lexicon::erase(std::string_view word) {
  const auto it = entries_.find(std::string(word));
  if (it == entries_.end()) return false;
  if (entries_.size() == 1) throw std::invalid_argument("cannot remove the last lexicon entry");
  entries_.erase(it);
  return true;
}

std::map<std::string, double> Lexicon::entries() const {
  return {entries_.begin(), entries_.end()};
}

NegationList::NegationList(const std::vector<std::string>& words) {
  for (const auto& w : words) words_.insert(to_lower(w));
}

NegationList default_negations() {
  return NegationList({"not", "no", "never", "cannot", "n't", "without"});
}

Lexicon parse_lexicon(std::string_view text, std::vector<std::string>* warnings) {
  std::map<std::string, double> entries;
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto sep = line.rfind('\t');
    if (sep == std::string_view::npos) sep = line.find_last_of(' ');
    if (sep == std::string_view::npos) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected '<word>\\t<value>'");
    }
    const std::string word = to_lower(trim(line.substr(0, sep)));
    const std::string value_text(trim(line.substr(sep + 1)));
    char* end = nullptr;
    const double value = std::strtod(value_text.c_str(), &end);
    if (word.empty() || value_text.empty() || end != value_text.c_str() + value_text.size()) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": cannot parse '" + std::string(line) + "'");
    }
    if (value == 0.0) {
      warn("lexicon line " + std::to_string(line_no) + ": dropping zero-valued entry '" + word + "'");
      return;
    }
    if (entries.count(word) != 0) {
      warn("lexicon line " + std::to_string(line_no) + ": duplicate entry '" + word + "', keeping the last value");
    }
    entries[word] = value;
  });
  return Lexicon(entries);
}

Lexicon read_lexicon_file(const std::string& path, std::vector<std::string>* warnings) {
  return parse_lexicon(read_file(path, "lexicon"), warnings);
}

NegationList parse_negations(std::string_view text) {
  std::vector<std::string> words;
  for_each_line(text, [&](std::size_t, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    words.emplace_back(line);
  });
  return NegationList(words);
}

NegationList read_negations_file(const std::string& path) {
  return parse_negations(read_file(path, "negation"));
}

std::vector<std::string> make_disjoint(Lexicon& lexicon, const NegationList& negations) {
  std::vector<std::string> dropped;
  for (const auto& w : negations.words()) {
    if (lexicon.erase(w)) dropped.push_back(w);
  }
  return dropped;
}

TokenPolarity token_polarity(std::string_view word, const Lexicon& lexicon,
                             const NegationList& negations) {
  const std::string lower = to_lower(word);
  TokenPolarity t;
  if (const auto v = lexicon.find(lower)) {
    t.value = *v;
    t.sentiment = true;
  }
  t.negation = negations.contains(lower);
  return t;
}

SentimentScore score_polarities(std::span<const TokenPolarity> tokens) {
  double score = 0.0;
  bool negated = false;
  for (const auto& t : tokens) accumulate(t, score, negated);
  return score;
}

SentimentScore score_polarities(std::span<const TokenPolarity> tokens,
                                std::span<const std::uint32_t> positions) {
  double score = 0.0;
  bool negated = false;
  for (std::uint32_t p : positions) accumulate(tokens[p], score, negated);
  return score;
}

SentimentScore score_sentence(std::span<const std::string> words, const Lexicon& lexicon,
                              const NegationList& negations) {
  double score = 0.0;
  bool negated = false;
  for (const auto& w : words) accumulate(token_polarity(w, lexicon, negations), score, negated);
  return score;
}

SentimentScore score_instance(const LabeledInstance& instance, const Lexicon& lexicon,
                              const NegationList& negations) {
  double score = 0.0;
  for (const auto& s : instance.sentences) score += score_sentence(s.words, lexicon, negations);
  return score;
}

Label classify(SentimentScore score) {
  if (score > 0) return Label::kPositive;
  if (score < 0) return Label::kNegative;
  return Label::kNeutral;
}

Label Analyzer::classify_instance(const LabeledInstance& instance) const {
  return classify_text(instance_text(instance));
}

Label BaselineAnalyzer::classify_text(std::string_view text) const {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return classify(score_sentence(words, lexicon_, negations_));
}

Label BaselineAnalyzer::classify_instance(const LabeledInstance& instance) const {
  return classify(score_instance(instance, lexicon_, negations_));
}

double accuracy(const Corpus& corpus, const Analyzer& analyzer, const Compressor* compressor) {
  if (corpus.instances.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& instance : corpus.instances) {
    const Label predicted = compressor
                                ? analyzer.classify_instance(apply_compressor(*compressor, instance))
                                : analyzer.classify_instance(instance);
    if (predicted != Label::kNeutral && predicted == instance.label) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(corpus.instances.size());
}

}  // namespace parsec
