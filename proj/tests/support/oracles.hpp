#ifndef SMPLEAK_TESTS_ORACLES_HPP
#define SMPLEAK_TESTS_ORACLES_HPP

#include <functional>
#include <vector>

#include "smpleak/rng.hpp"

namespace smpleak::testing {

// Greedy maximization of a concave function on the probability simplex by
// pairwise mass moves with a shrinking step schedule. Deterministic given
// the Rng. Returns the best value seen; never overshoots the true maximum
// since every step is an exact evaluation.
inline double simplex_ascend(const std::function<double(const std::vector<double>&)>& f,
                             std::size_t dim, Rng& rng, int extra_starts = 2) {
  double best_val = -1e300;
  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
  for (int s = 0; s < extra_starts; ++s) starts.push_back(rng.simplex_point(dim));

  for (auto& p : starts) {
    double cur = f(p);
    for (double step : {0.08, 0.04, 0.02, 0.01, 0.004, 0.001}) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t i = 0; i < dim; ++i) {
          if (p[i] <= 0.0) continue;
          const double move = std::min(step, p[i]);
          for (std::size_t j = 0; j < dim; ++j) {
            if (i == j) continue;
            std::vector<double> cand = p;
            cand[i] -= move;
            cand[j] += move;
            const double v = f(cand);
            if (v > cur + 1e-13) {
              cur = v;
              p = std::move(cand);
              improved = true;
              break;
            }
          }
          if (improved) break;
        }
      }
    }
    best_val = std::max(best_val, cur);
  }
  return best_val;
}

// All compositions of `units` grid steps into `dim` nonnegative parts,
// i.e. the step-(1/units) grid on the simplex.
inline void enumerate_simplex_grid(std::size_t dim, int units,
                                   const std::function<void(const std::vector<double>&)>& visit) {
  std::vector<int> counts(dim, 0);
  std::vector<double> point(dim, 0.0);
  const double unit = 1.0 / static_cast<double>(units);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == dim) {
      counts[pos] = left;
      for (std::size_t i = 0; i < dim; ++i) point[i] = counts[i] * unit;
      visit(point);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, units);
}

}  // namespace smpleak::testing

#endif
