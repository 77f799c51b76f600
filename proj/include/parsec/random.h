// Seeded random streams.
//
// Every stochastic step draws from a stream whose seed is derived from the
// master seed plus a tuple of counters (generation, slot, purpose). Results
// therefore do not depend on the order in which streams are consumed, and
// the helpers below avoid the implementation-defined std distributions so
// runs reproduce across standard libraries.

#ifndef PARSEC_RANDOM_H_
#define PARSEC_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace parsec {

std::uint64_t splitmix64(std::uint64_t x);

// Mixes a master seed with a sequence of stream identifiers.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
      : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be > 0.
  std::size_t below(std::size_t n);

  // Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + below(hi - lo + 1);
  }

  // Uniform in [0, 1) with 53 bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool chance(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace parsec

#endif  // PARSEC_RANDOM_H_
