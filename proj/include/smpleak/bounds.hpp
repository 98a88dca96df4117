#ifndef SMPLEAK_BOUNDS_HPP
#define SMPLEAK_BOUNDS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace smpleak {

// The three auxiliary functions of the finite-size bounds (logs base 2).
double g1(double x);                       // 2 log2(x + 1) + 10,  x >= 0
double g2(double x, double y, double z);   // 2 log2(2(x + y) / (z^2 log2 e) + 1) + 2,  z > 0
double g3(double x);                       // 2 (1/2 - x)^2 log2 e,  x in [0, 1/2]

// Parameter bundle of the finite-size leakage bound. Feasibility requires
// epsilon + delta1 + delta2 < 1/2 with both deltas positive.
struct BoundParams {
  std::uint64_t n = 0;
  double epsilon = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;

  void validate() const;
};

// Worst-case private-coin communication lower bound for equality on n bits:
// 2 sqrt(g3(eps)) sqrt(n) - g3(eps) - 6. The value version clamps below at 0
// (a negative lower bound is vacuous); the raw version does not.
double cc_priv_lower_eq_raw(double n, double epsilon);
double cc_priv_lower_eq(double n, double epsilon);

// 0.1 sqrt(n): the previously known slope, for comparison curves.
double babai_kimmel_reference(double n);

// Communication bounds a leakage bound is assembled from: a lower bound on
// the private-coin cost at a raised error, and an upper bound at the base
// error (for equality: the trivial 2n).
struct CcBounds {
  std::function<double(double)> lower;  // epsilon -> lower bound on CC_priv
  std::function<double(double)> upper;  // epsilon -> upper bound on CC_priv
};

CcBounds eq_cc_bounds(double n);

// Leakage lower bound assembled from communication bounds:
//   delta1 (lower(eps + d1 + d2) - g2(nA, nB, d2) - 4) - 2 g1(upper(eps)).
// Requires eps >= 0, d1 > 0, d2 > 0 and eps + d1 + d2 < 1/2.
double il_lower_from_ccpriv_raw(const CcBounds& cc, double n_a, double n_b, double epsilon,
                                double delta1, double delta2);
double il_lower_from_ccpriv(const CcBounds& cc, double n_a, double n_b, double epsilon,
                            double delta1, double delta2);

// The assembled equality bound at explicit (delta1, delta2).
double il_lower_eq_raw(double n, double epsilon, double delta1, double delta2);
double il_lower_eq(double n, double epsilon, double delta1, double delta2);
double il_lower_eq(const BoundParams& params);

struct OptimizedBound {
  double value = 0.0;   // clamped at 0
  double raw = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

// Maximizes il_lower_eq over the open triangle delta1, delta2 > 0,
// eps + delta1 + delta2 < 1/2: a 200 x 200 grid followed by coordinate
// refinement down to 1e-6 steps. Deterministic.
OptimizedBound il_lower_eq_opt(double n, double epsilon);

// Quantum fingerprinting leakage model. The default upper-bound curve is
// scale * mu * log2(n); the remaining experimental parameters are carried
// for reporting and for external curve computations.
struct QuantumModel {
  double mu = 100.0;          // total mean photon number
  double visibility = 0.98;
  double dark_rate_hz = 0.11;
  double transmissivity = 0.3;
  double scale = 1.0;

  // optional replacement curve (e.g. an externally computed table)
  std::function<double(double)> custom_curve;
};

double qil_upper(const QuantumModel& model, double n);

struct CrossoverResult {
  bool found = false;
  std::uint64_t n = 0;
  double qil_at = 0.0;
  double il_at = 0.0;
};

// Smallest n in [n_min, n_max] with qil_upper(n) < il_lower_eq_opt(n, eps):
// a log-spaced scan to bracket the first sign change, then integer bisection.
CrossoverResult crossover(const QuantumModel& model, double epsilon, std::uint64_t n_min,
                          std::uint64_t n_max);

struct BoundCurveRow {
  std::uint64_t n = 0;
  double cc_lower = 0.0;
  double il_lower = 0.0;
  double delta1_opt = 0.0;
  double delta2_opt = 0.0;
  double qil_upper = 0.0;
  double il_lower_raw = 0.0;  // unclamped, kept for JSON output
  double cc_lower_raw = 0.0;
};

// Log-spaced sweep of all curves over [n_min, n_max].
std::vector<BoundCurveRow> bound_curve(const QuantumModel& model, double epsilon,
                                       std::uint64_t n_min, std::uint64_t n_max, int steps);

}  // namespace smpleak

#endif
