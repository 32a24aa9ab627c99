#ifndef TWEETSENT_RNG_HPP
#define TWEETSENT_RNG_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace tweetsent {

// Deterministic 64-bit generator used for every random choice in the
// toolkit (corpus shuffling, weight init, epoch shuffles). The exact
// algorithm is part of the file-format contract so that splits and
// checkpoints can be reproduced from another language; see
// docs/reproducibility.md for the bit-level description.
//
// State update: xorshift64* (Vigna 2016), seeded through one round of
// splitmix64 so that small consecutive seeds give unrelated streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9e3779b97f4a7c15ull;
  }

  std::uint64_t next_u64() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
  }

  // Uniform in [0, n). Plain modulo: the tiny bias is irrelevant here and
  // keeping the mapping trivial makes it easy to re-implement exactly.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double next_double(double lo, double hi) {
    return lo + next_double() * (hi - lo);
  }

  // Fisher-Yates, descending index, j = next_below(i + 1).
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i + 1));
      std::swap(v[i], v[j]);
    }
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace tweetsent

#endif  // TWEETSENT_RNG_HPP
