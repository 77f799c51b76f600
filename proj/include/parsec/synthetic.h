// Synthetic labeled review corpora for tests and desk-scale experiments.
//
// Reviews are built from sentence templates. Sentiment-bearing words are
// adjectives (JJ) drawn from a fixed polar vocabulary, sometimes preceded by
// the negation "not" with the adjective polarity flipped; they make up about
// `sentiment_fraction` of all tokens. Everything else is neutral filler, so
// a compressor that only deletes filler (determiners, prepositions, ...) can
// reach 20% compression without changing any baseline prediction.

#ifndef PARSEC_SYNTHETIC_H_
#define PARSEC_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "parsec/corpus.h"

namespace parsec::synthetic {

struct Options {
  std::string name = "synthetic";
  // Balanced: instances / 2 per label (the odd one out is positive).
  std::size_t instances = 200;
  double sentiment_fraction = 0.10;
  // Probability that a sentiment slot takes the opposite polarity.
  double noise = 0.15;
  // Probability that a sentiment slot is written as "not <opposite>".
  double negation = 0.2;
  std::size_t min_words = 25;
  std::size_t max_words = 45;
  // Selects the noun vocabulary: "books", "music", "toys" or anything else
  // for a generic product vocabulary.
  std::string domain = "products";
  std::uint64_t seed = 1;
};

Corpus generate(const Options& options);

// The polar adjectives the generator uses, as "word<TAB>value" lexicon text.
std::string lexicon_text();

std::vector<std::string> positive_words();
std::vector<std::string> negative_words();

}  // namespace parsec::synthetic

#endif  // PARSEC_SYNTHETIC_H_
