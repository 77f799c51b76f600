#include "parsec/pos_tag.h"

namespace parsec {
namespace {

constexpr std::array<std::string_view, kNumTagValues> kNames = {
    "CC",  "CD",  "DT",   "EX",  "FW",  "IN",   "JJ",  "JJR", "JJS",
    "LS",  "MD",  "NN",   "NNS", "NNP", "NNPS", "PDT", "POS", "PRP",
    "PRP$", "RB", "RBR",  "RBS", "RP",  "SYM",  "TO",  "UH",  "VB",
    "VBD", "VBG", "VBN",  "VBP", "VBZ", "WDT",  "WP",  "WP$", "WRB",
    "#",   "$",   ".",    ",",   ":",   "(",    ")",   "\"",  "`",
    "``",  "'",   "''",   "*",
};

constexpr std::array<PosTag, kNumTagValues> make_all_values() {
  std::array<PosTag, kNumTagValues> values{};
  for (std::size_t i = 0; i < kNumTagValues; ++i) values[i] = tag_from_index(i);
  return values;
}

constexpr std::array<PosTag, kNumTagValues> kAllValues = make_all_values();

}  // namespace

std::string_view tag_name(PosTag t) { return kNames[tag_index(t)]; }

std::optional<PosTag> parse_tag(std::string_view text, bool allow_wildcard) {
  if (text == "-LRB-") return PosTag::kLeftParen;
  if (text == "-RRB-") return PosTag::kRightParen;
  for (std::size_t i = 0; i < kNumTags; ++i) {
    if (kNames[i] == text) return tag_from_index(i);
  }
  if (allow_wildcard && text == "*") return PosTag::kWildcard;
  return std::nullopt;
}

const std::array<PosTag, kNumTagValues>& all_tag_values() { return kAllValues; }

}  // namespace parsec
