// Penn Treebank part-of-speech tag set plus the rule-pattern wildcard.

#ifndef PARSEC_POS_TAG_H_
#define PARSEC_POS_TAG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace parsec {

// The 36 Penn Treebank word tags, followed by the 12 symbol tags, followed by
// the wildcard. The order is part of the contract: word tags occupy
// [0, kNumWordTags), symbol tags [kNumWordTags, kNumTags).
enum class PosTag : std::uint8_t {
  kCC, kCD, kDT, kEX, kFW, kIN, kJJ, kJJR, kJJS, kLS, kMD, kNN,
  kNNS, kNNP, kNNPS, kPDT, kPOS, kPRP, kPRPS, kRB, kRBR, kRBS, kRP, kSYM,
  kTO, kUH, kVB, kVBD, kVBG, kVBN, kVBP, kVBZ, kWDT, kWP, kWPS, kWRB,
  // Symbol tags.
  kPound,        // #
  kDollar,       // $
  kPeriod,       // .
  kComma,        // ,
  kColon,        // :
  kLeftParen,    // (
  kRightParen,   // )
  kStraightQuote,   // "
  kLeftSingleQuote,   // `
  kLeftDoubleQuote,   // ``
  kRightSingleQuote,  // '
  kRightDoubleQuote,  // ''
  kWildcard,
};

inline constexpr std::size_t kNumWordTags = 36;
inline constexpr std::size_t kNumSymbolTags = 12;
inline constexpr std::size_t kNumTags = kNumWordTags + kNumSymbolTags;
// Including the wildcard.
inline constexpr std::size_t kNumTagValues = kNumTags + 1;

constexpr std::size_t tag_index(PosTag t) { return static_cast<std::size_t>(t); }

constexpr PosTag tag_from_index(std::size_t i) { return static_cast<PosTag>(i); }

constexpr bool is_punctuation(PosTag t) {
  return tag_index(t) >= kNumWordTags && tag_index(t) < kNumTags;
}

constexpr bool is_word_tag(PosTag t) { return tag_index(t) < kNumWordTags; }

// Penn mnemonic, or "*" for the wildcard.
std::string_view tag_name(PosTag t);

// Parses a Penn mnemonic. "-LRB-" and "-RRB-" are accepted as aliases for
// "(" and ")". The wildcard is only accepted when allow_wildcard is set.
std::optional<PosTag> parse_tag(std::string_view text, bool allow_wildcard = false);

// All 49 values in enum order.
const std::array<PosTag, kNumTagValues>& all_tag_values();

}  // namespace parsec

#endif  // PARSEC_POS_TAG_H_
