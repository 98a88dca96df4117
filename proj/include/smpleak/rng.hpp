#ifndef SMPLEAK_RNG_HPP
#define SMPLEAK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace smpleak {

// Seeded generator with fully specified derived draws, so identical seeds
// give identical sequences across platforms and standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n >= 1 (Lemire multiply-shift)
  std::uint64_t below(std::uint64_t n) {
    const auto hi = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    return hi;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  // integer uniform in [lo, hi] inclusive
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // strictly positive Dirichlet(1,...,1)-style vector via exponential draws
  std::vector<double> simplex_point(std::size_t n) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (auto& x : v) {
      double u = uniform();
      x = -std::log1p(-u) + 1e-12;
      sum += x;
    }
    for (auto& x : v) x /= sum;
    return v;
  }

  // index drawn from an explicit probability vector
  std::size_t sample(std::span<const double> probs) {
    double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;
  }

  // derive an independent child stream (for parallel or per-item use)
  Rng fork() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ull); }

private:
  std::mt19937_64 engine_;
};

}  // namespace smpleak

#endif
