#include "smpleak/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smpleak/errors.hpp"

namespace smpleak {

namespace {
const double kLog2E = std::log2(std::exp(1.0));
}

double g1(double x) {
  if (!(x >= 0.0)) throw ValidationError("g1 requires x >= 0");
  return 2.0 * std::log2(x + 1.0) + 10.0;
}

double g2(double x, double y, double z) {
  if (!(z > 0.0)) throw ValidationError("g2 requires z > 0");
  if (!(x >= 0.0) || !(y >= 0.0)) throw ValidationError("g2 requires x, y >= 0");
  return 2.0 * std::log2(2.0 * (x + y) / (z * z * kLog2E) + 1.0) + 2.0;
}

double g3(double x) {
  if (!(x >= 0.0 && x <= 0.5)) throw ValidationError("g3 requires x in [0, 1/2]");
  return 2.0 * (0.5 - x) * (0.5 - x) * kLog2E;
}

void BoundParams::validate() const {
  if (n < 1) throw ValidationError("input length must be positive");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw ValidationError("epsilon must be in [0, 1/2)");
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) throw ValidationError("delta1, delta2 must be positive");
  if (!(epsilon + delta1 + delta2 < 0.5)) {
    throw ValidationError("feasibility requires epsilon + delta1 + delta2 < 1/2");
  }
}

double cc_priv_lower_eq_raw(double n, double epsilon) {
  if (!(n > 0.0)) throw ValidationError("input length must be positive");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw ValidationError("epsilon must be in [0, 1/2)");
  const double g = g3(epsilon);
  return 2.0 * std::sqrt(g) * std::sqrt(n) - g - 6.0;
}

double cc_priv_lower_eq(double n, double epsilon) {
  return std::max(0.0, cc_priv_lower_eq_raw(n, epsilon));
}

double babai_kimmel_reference(double n) { return 0.1 * std::sqrt(n); }

CcBounds eq_cc_bounds(double n) {
  return CcBounds{[n](double eps) { return cc_priv_lower_eq_raw(n, eps); },
                  [n](double) { return 2.0 * n; }};
}

double il_lower_from_ccpriv_raw(const CcBounds& cc, double n_a, double n_b, double epsilon,
                                double delta1, double delta2) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) throw ValidationError("delta1, delta2 must be positive");
  if (!(epsilon + delta1 + delta2 < 0.5)) {
    throw ValidationError("feasibility requires epsilon + delta1 + delta2 < 1/2");
  }
  const double cc_lb = cc.lower(epsilon + delta1 + delta2);
  const double cc_ub = cc.upper(epsilon);
  return delta1 * (cc_lb - g2(n_a, n_b, delta2) - 4.0) - 2.0 * g1(cc_ub);
}

double il_lower_from_ccpriv(const CcBounds& cc, double n_a, double n_b, double epsilon,
                            double delta1, double delta2) {
  return std::max(0.0, il_lower_from_ccpriv_raw(cc, n_a, n_b, epsilon, delta1, delta2));
}

double il_lower_eq_raw(double n, double epsilon, double delta1, double delta2) {
  return il_lower_from_ccpriv_raw(eq_cc_bounds(n), n, n, epsilon, delta1, delta2);
}

double il_lower_eq(double n, double epsilon, double delta1, double delta2) {
  return std::max(0.0, il_lower_eq_raw(n, epsilon, delta1, delta2));
}

double il_lower_eq(const BoundParams& params) {
  params.validate();
  return il_lower_eq(static_cast<double>(params.n), params.epsilon, params.delta1,
                     params.delta2);
}

OptimizedBound il_lower_eq_opt(double n, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw ValidationError("epsilon must be in [0, 1/2)");
  const double budget = 0.5 - epsilon;  // delta1 + delta2 < budget

  OptimizedBound best;
  best.raw = -std::numeric_limits<double>::infinity();
  auto consider = [&](double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0) || !(d1 + d2 < budget)) return;
    const double raw = il_lower_eq_raw(n, epsilon, d1, d2);
    if (raw > best.raw) {
      best.raw = raw;
      best.delta1 = d1;
      best.delta2 = d2;
    }
  };

  const int grid = 200;
  for (int i = 1; i < grid; ++i) {
    for (int j = 1; j < grid - i; ++j) {
      consider(budget * i / grid, budget * j / grid);
    }
  }
  if (!(best.raw > -std::numeric_limits<double>::infinity())) {
    // degenerate budget; probe the midpoint scaled down
    consider(budget / 3.0, budget / 3.0);
  }

  // coordinate refinement with shrinking steps
  for (double step = budget / grid; step > 1e-6; step /= 2.0) {
    bool improved = true;
    while (improved) {
      improved = false;
      const double d1 = best.delta1, d2 = best.delta2;
      const double raw0 = best.raw;
      consider(d1 + step, d2);
      consider(d1 - step, d2);
      consider(d1, d2 + step);
      consider(d1, d2 - step);
      if (best.raw > raw0) improved = true;
    }
  }

  best.value = std::max(0.0, best.raw);
  return best;
}

double qil_upper(const QuantumModel& model, double n) {
  if (!(model.mu >= 0.0)) throw ValidationError("mean photon number must be nonnegative");
  if (!(n >= 2.0)) throw ValidationError("qil_upper needs n >= 2");
  if (model.custom_curve) return model.custom_curve(n);
  return model.scale * model.mu * std::log2(n);
}

CrossoverResult crossover(const QuantumModel& model, double epsilon, std::uint64_t n_min,
                          std::uint64_t n_max) {
  if (n_min < 2 || n_min > n_max) throw ValidationError("invalid crossover range");
  auto wins = [&](std::uint64_t n) {
    const double nn = static_cast<double>(n);
    return qil_upper(model, nn) < il_lower_eq_opt(nn, epsilon).value;
  };

  // log-spaced scan for the first winning point
  const int scan_steps = 96;
  const double lo = std::log2(static_cast<double>(n_min));
  const double hi = std::log2(static_cast<double>(n_max));
  std::uint64_t prev = n_min;
  std::uint64_t first_win = 0;
  if (wins(n_min)) {
    first_win = n_min;
  } else {
    for (int s = 1; s <= scan_steps; ++s) {
      const double e = lo + (hi - lo) * s / scan_steps;
      std::uint64_t n = static_cast<std::uint64_t>(std::llround(std::exp2(e)));
      n = std::clamp<std::uint64_t>(n, n_min, n_max);
      if (n <= prev) continue;
      if (wins(n)) {
        // bisect (prev loses, n wins) for the smallest winner in between
        std::uint64_t bad = prev, good = n;
        while (good - bad > 1) {
          const std::uint64_t mid = bad + (good - bad) / 2;
          if (wins(mid)) good = mid; else bad = mid;
        }
        first_win = good;
        break;
      }
      prev = n;
    }
  }

  CrossoverResult r;
  if (first_win == 0) return r;
  r.found = true;
  r.n = first_win;
  r.qil_at = qil_upper(model, static_cast<double>(first_win));
  r.il_at = il_lower_eq_opt(static_cast<double>(first_win), epsilon).value;
  return r;
}

std::vector<BoundCurveRow> bound_curve(const QuantumModel& model, double epsilon,
                                       std::uint64_t n_min, std::uint64_t n_max, int steps) {
  if (steps < 1) throw ValidationError("sweep needs at least one step");
  if (n_min < 2 || n_min > n_max) throw ValidationError("invalid sweep range");
  std::vector<BoundCurveRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  const double lo = std::log2(static_cast<double>(n_min));
  const double hi = std::log2(static_cast<double>(n_max));
  std::uint64_t last_n = 0;
  for (int s = 0; s < steps; ++s) {
    const double e = steps == 1 ? lo : lo + (hi - lo) * s / (steps - 1);
    std::uint64_t n = static_cast<std::uint64_t>(std::llround(std::exp2(e)));
    n = std::clamp<std::uint64_t>(n, n_min, n_max);
    if (n == last_n) continue;  // dedupe after rounding
    last_n = n;
    const double nn = static_cast<double>(n);
    const OptimizedBound opt = il_lower_eq_opt(nn, epsilon);
    BoundCurveRow row;
    row.n = n;
    row.cc_lower_raw = cc_priv_lower_eq_raw(nn, epsilon);
    row.cc_lower = std::max(0.0, row.cc_lower_raw);
    row.il_lower = opt.value;
    row.il_lower_raw = opt.raw;
    row.delta1_opt = opt.delta1;
    row.delta2_opt = opt.delta2;
    row.qil_upper = qil_upper(model, nn);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace smpleak
