// Deterministic random streams.
//
// All stochastic decisions draw from substreams derived from the master seed
// with mix(), keyed by a stream tag plus context indices (generation, offspring
// index, cycle, ...). Parallel loops give each item its own substream, so runs
// are reproducible for any thread count. The primitive generators are written
// out here instead of using <random> distributions so that sequences are fixed
// by this code alone.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace emopt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fold an arbitrary tag list into one 64-bit seed.
inline std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = 0x8f1bbcdcbfa53e0bULL;
  for (std::uint64_t p : parts) s = splitmix64(s ^ p);
  return s;
}

// Stream tags; combined with context indices via mix().
namespace streams {
enum : std::uint64_t {
  kLhs = 1,
  kDoe = 2,
  kVariation = 3,
  kRepair = 4,
  kFitSplit = 5,
  kKmeans = 6,
  kRoulette = 7,
  kSurrogateGen = 8,
  kSurrogateRepair = 9,
  kKrigingStart = 10,
  kStall = 11,
  kInit = 12,
};
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  bool coin() { return (eng_() & 1ULL) != 0; }

  double normal() {
    // Marsaglia polar method
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_int(i)]);
    }
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace emopt
