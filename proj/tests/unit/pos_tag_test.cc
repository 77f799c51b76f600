#include "parsec/pos_tag.h"

#include <set>
#include <string>

#include <gtest/gtest.h>

namespace parsec {
namespace {

TEST(PosTag, HasFortyNineDistinctValues) {
  const auto& all = all_tag_values();
  std::set<PosTag> distinct(all.begin(), all.end());
  EXPECT_EQ(distinct.size(), 49u);
  std::set<std::string_view> names;
  for (PosTag t : all) names.insert(tag_name(t));
  EXPECT_EQ(names.size(), 49u);
}

TEST(PosTag, PunctuationIsExactlyTheSymbolTags) {
  const std::set<std::string> symbols = {"#", "$", ".", ",", ":", "(", ")", "\"", "`", "``", "'", "''"};
  std::size_t count = 0;
  for (PosTag t : all_tag_values()) {
    const bool expected = symbols.count(std::string(tag_name(t))) == 1;
    EXPECT_EQ(is_punctuation(t), expected) << tag_name(t);
    count += is_punctuation(t);
  }
  EXPECT_EQ(count, 12u);
  EXPECT_FALSE(is_punctuation(PosTag::kWildcard));
  EXPECT_FALSE(is_word_tag(PosTag::kWildcard));
}

TEST(PosTag, NamesRoundTrip) {
  for (PosTag t : all_tag_values()) {
    EXPECT_EQ(parse_tag(tag_name(t), /*allow_wildcard=*/true), t);
  }
  EXPECT_EQ(parse_tag("PRP$"), PosTag::kPRPS);
  EXPECT_EQ(parse_tag("WP$"), PosTag::kWPS);
}

TEST(PosTag, WildcardOnlyWhenAllowed) {
  EXPECT_FALSE(parse_tag("*").has_value());
  EXPECT_EQ(parse_tag("*", true), PosTag::kWildcard);
}

TEST(PosTag, BracketAliases) {
  EXPECT_EQ(parse_tag("-LRB-"), PosTag::kLeftParen);
  EXPECT_EQ(parse_tag("-RRB-"), PosTag::kRightParen);
}

TEST(PosTag, RejectsUnknownAndLowercase) {
  EXPECT_FALSE(parse_tag("QQ").has_value());
  EXPECT_FALSE(parse_tag("nn").has_value());
  EXPECT_FALSE(parse_tag("").has_value());
}

}  // namespace
}  // namespace parsec
