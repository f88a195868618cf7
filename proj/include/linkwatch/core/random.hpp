#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace linkwatch {

// Seeded random stream. Distribution mapping is done here rather than with
// <random> distributions so sequences are identical across standard
// libraries. Child streams are derived from (seed, name, index) and never
// from the parent's state, so worker order cannot affect results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng child(std::string_view name, std::uint64_t index = 0) const;

  std::uint64_t next_u64() { return engine_(); }
  // [0, 1)
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // [0, n), n > 0; unbiased.
  std::uint64_t below(std::uint64_t n);
  // [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(v.size()))];
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_name(std::string_view name);

}  // namespace linkwatch
