#include "parsec/compressor.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace parsec {
namespace {

using json = nlohmann::json;

// Flags every match of `rule` in `tags`, then removes the flagged entries
// from both `tags` and `positions`. Returns the number of deleted entries.
std::size_t flag_and_sweep(const Rule& rule, std::vector<PosTag>& tags,
                           std::vector<std::uint32_t>& positions,
                           std::vector<std::uint8_t>& flags) {
  const std::size_t n = tags.size();
  const std::size_t len = rule.tags.size();
  if (len == 0 || len > n) return 0;
  flags.assign(n, 0);
  bool any = false;
  const std::span<const PosTag> view(tags);
  for (std::size_t i = 0; i + len <= n; ++i) {
    if (!match_rule_at(rule, view, i)) continue;
    for (std::uint32_t d : rule.decisions) flags[i + d] = 1;
    any = true;
  }
  if (!any) return 0;
  std::size_t out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (flags[i]) continue;
    tags[out] = tags[i];
    positions[out] = positions[i];
    ++out;
  }
  tags.resize(out);
  positions.resize(out);
  return n - out;
}

TaggedSentence select_words(const TaggedSentence& sentence,
                            std::span<const std::uint32_t> keep) {
  TaggedSentence out;
  out.words.reserve(keep.size());
  out.tags.reserve(keep.size());
  for (std::uint32_t p : keep) {
    out.words.push_back(sentence.words[p]);
    out.tags.push_back(sentence.tags[p]);
  }
  return out;
}

}  // namespace

std::string rule_violation(const Rule& rule, const RuleLimits& limits) {
  const std::size_t n = rule.tags.size();
  if (n == 0) return "rule has no tags";
  if (n < limits.tags_min || n > limits.tags_max) {
    return "rule has " + std::to_string(n) + " tags, outside [" +
           std::to_string(limits.tags_min) + ", " + std::to_string(limits.tags_max) + "]";
  }
  if (rule.tags.front() == PosTag::kWildcard || rule.tags.back() == PosTag::kWildcard) {
    return "rule pattern starts or ends with a wildcard";
  }
  for (PosTag t : rule.tags) {
    if (is_punctuation(t)) {
      return "rule pattern contains punctuation tag '" + std::string(tag_name(t)) + "'";
    }
  }
  if (rule.decisions.empty()) return "rule has no decisions";
  for (std::size_t k = 0; k < rule.decisions.size(); ++k) {
    if (rule.decisions[k] >= n) {
      return "decision index " + std::to_string(rule.decisions[k]) +
             " out of range for a pattern of length " + std::to_string(n);
    }
    if (k > 0 && rule.decisions[k] <= rule.decisions[k - 1]) {
      return "decisions are not sorted and unique";
    }
  }
  return {};
}

std::string compressor_violation(const Compressor& compressor, const RuleLimits& limits) {
  const std::size_t n = compressor.rules.size();
  if (n == 0) return "compressor has no rules";
  if (n < limits.rules_min || n > limits.rules_max) {
    return "compressor has " + std::to_string(n) + " rules, outside [" +
           std::to_string(limits.rules_min) + ", " + std::to_string(limits.rules_max) + "]";
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (auto v = rule_violation(compressor.rules[i], limits); !v.empty()) {
      return "rule " + std::to_string(i) + ": " + v;
    }
  }
  return {};
}

void validate(const Compressor& compressor, const RuleLimits& limits) {
  if (auto v = compressor_violation(compressor, limits); !v.empty()) {
    throw ModelError(ModelError::Kind::kInvariantViolation, v);
  }
}

bool match_rule_at(const Rule& rule, std::span<const PosTag> tags, std::size_t start) {
  const std::size_t len = rule.tags.size();
  if (start >= tags.size() || len > tags.size() - start) return false;
  for (std::size_t j = 0; j < len; ++j) {
    const PosTag t = tags[start + j];
    if (is_punctuation(t)) return false;
    if (rule.tags[j] != PosTag::kWildcard && rule.tags[j] != t) return false;
  }
  return true;
}

std::span<const std::uint32_t> SentenceCompressor::survivors(
    const Compressor& compressor, std::span<const PosTag> tags) {
  tags_.assign(tags.begin(), tags.end());
  positions_.resize(tags.size());
  std::iota(positions_.begin(), positions_.end(), 0u);
  for (const Rule& rule : compressor.rules) {
    if (tags_.empty()) break;
    flag_and_sweep(rule, tags_, positions_, flags_);
  }
  return positions_;
}

TaggedSentence apply_rule(const Rule& rule, const TaggedSentence& sentence) {
  std::vector<PosTag> tags = sentence.tags;
  std::vector<std::uint32_t> positions(tags.size());
  std::iota(positions.begin(), positions.end(), 0u);
  std::vector<std::uint8_t> flags;
  flag_and_sweep(rule, tags, positions, flags);
  return select_words(sentence, positions);
}

TaggedSentence apply_compressor(const Compressor& compressor,
                                const TaggedSentence& sentence) {
  SentenceCompressor sc;
  return select_words(sentence, sc.survivors(compressor, sentence.tags));
}

LabeledInstance apply_compressor(const Compressor& compressor,
                                 const LabeledInstance& instance) {
  SentenceCompressor sc;
  LabeledInstance out;
  out.label = instance.label;
  out.sentences.reserve(instance.sentences.size());
  for (const auto& s : instance.sentences) {
    out.sentences.push_back(select_words(s, sc.survivors(compressor, s.tags)));
  }
  return out;
}

Corpus apply_compressor(const Compressor& compressor, const Corpus& corpus) {
  Corpus out{corpus.name, {}};
  out.instances.reserve(corpus.instances.size());
  for (const auto& instance : corpus.instances) {
    out.instances.push_back(apply_compressor(compressor, instance));
  }
  return out;
}

double compression_rate(const Compressor& compressor, const Corpus& corpus) {
  SentenceCompressor sc;
  std::size_t total = 0;
  std::size_t kept = 0;
  for (const auto& instance : corpus.instances) {
    for (const auto& s : instance.sentences) {
      total += s.size();
      kept += sc.survivors(compressor, s.tags).size();
    }
  }
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(total - kept) / static_cast<double>(total);
}

std::string serialize_model(const Compressor& compressor) {
  json rules = json::array();
  for (const Rule& rule : compressor.rules) {
    json tags = json::array();
    for (PosTag t : rule.tags) tags.push_back(std::string(tag_name(t)));
    rules.push_back({{"tags", std::move(tags)}, {"decisions", rule.decisions}});
  }
  json doc = {{"rules", std::move(rules)}};
  return doc.dump(2) + "\n";
}

Compressor deserialize_model(std::string_view text, const RuleLimits& limits) {
  using Kind = ModelError::Kind;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(Kind::kParseError, std::string("model is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
    throw ModelError(Kind::kParseError, "model must be an object with a 'rules' array");
  }
  Compressor compressor;
  for (const auto& jr : doc["rules"]) {
    if (!jr.is_object() || !jr.contains("tags") || !jr.contains("decisions") ||
        !jr["tags"].is_array() || !jr["decisions"].is_array()) {
      throw ModelError(Kind::kParseError, "each rule needs 'tags' and 'decisions' arrays");
    }
    Rule rule;
    for (const auto& jt : jr["tags"]) {
      if (!jt.is_string()) throw ModelError(Kind::kParseError, "tags must be strings");
      const auto tag = parse_tag(jt.get<std::string>(), /*allow_wildcard=*/true);
      if (!tag) {
        throw ModelError(Kind::kParseError, "unknown tag '" + jt.get<std::string>() + "' in model");
      }
      rule.tags.push_back(*tag);
    }
    for (const auto& jd : jr["decisions"]) {
      if (!jd.is_number_integer()) {
        throw ModelError(Kind::kParseError, "decisions must be integers");
      }
      const auto d = jd.get<std::int64_t>();
      if (d < 0 || d > UINT32_MAX) {
        throw ModelError(Kind::kInvariantViolation,
                         "decision index " + std::to_string(d) + " out of range");
      }
      rule.decisions.push_back(static_cast<std::uint32_t>(d));
    }
    std::sort(rule.decisions.begin(), rule.decisions.end());
    compressor.rules.push_back(std::move(rule));
  }
  validate(compressor, limits);
  return compressor;
}

Compressor read_model_file(const std::string& path, const RuleLimits& limits) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str(), limits);
}

void write_model_file(const std::string& path, const Compressor& compressor) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  out << serialize_model(compressor);
  if (!out) throw std::runtime_error("failed writing model file '" + path + "'");
}

std::string to_string(const Rule& rule) {
  std::string s = "[";
  for (std::size_t i = 0; i < rule.tags.size(); ++i) {
    if (i > 0) s += ", ";
    s += tag_name(rule.tags[i]);
  }
  s += "] -> {";
  for (std::size_t i = 0; i < rule.decisions.size(); ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(rule.decisions[i]);
  }
  return s + "}";
}

}  // namespace parsec
