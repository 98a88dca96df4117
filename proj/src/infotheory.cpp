#include "smpleak/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "smpleak/errors.hpp"

namespace smpleak {

double entropy(const Dist& d) {
  return entropy_bits(d.probs());
}

Channel::Channel(Alphabet input, Alphabet output, std::vector<double> rows_flat)
    : input_(std::move(input)), output_(std::move(output)), rows_(std::move(rows_flat)) {
  if (rows_.size() != input_.size() * output_.size()) {
    throw ValidationError("channel table size does not match |input| x |output|");
  }
  for (std::size_t x = 0; x < input_.size(); ++x) {
    check_probability_vector(row(x), "Channel row");
  }
}

Channel Channel::from_rows(Alphabet input, const std::vector<Dist>& rows) {
  if (rows.empty()) throw ValidationError("channel needs at least one row");
  if (rows.size() != input.size()) throw ValidationError("one channel row per input symbol required");
  const Alphabet& out = rows.front().alphabet();
  std::vector<double> flat;
  flat.reserve(rows.size() * out.size());
  for (const auto& r : rows) {
    if (!(r.alphabet() == out)) throw ValidationError("channel rows must share an output alphabet");
    flat.insert(flat.end(), r.probs().begin(), r.probs().end());
  }
  return Channel(std::move(input), out, std::move(flat));
}

Dist Channel::row_dist(std::size_t x) const {
  auto r = row(x);
  return Dist(output_, std::vector<double>(r.begin(), r.end()));
}

std::vector<double> Channel::output_marginal(std::span<const double> prior) const {
  std::vector<double> q(output_.size(), 0.0);
  for (std::size_t x = 0; x < input_.size(); ++x) {
    const double px = prior[x];
    if (px == 0.0) continue;
    auto r = row(x);
    for (std::size_t m = 0; m < output_.size(); ++m) q[m] += px * r[m];
  }
  return q;
}

double Channel::mutual_information(std::span<const double> prior) const {
  const auto q = output_marginal(prior);
  double info = 0.0;
  for (std::size_t x = 0; x < input_.size(); ++x) {
    const double px = prior[x];
    if (px == 0.0) continue;
    auto r = row(x);
    double d = 0.0;  // D(W_x || q)
    for (std::size_t m = 0; m < output_.size(); ++m) {
      if (r[m] > 0.0) d += r[m] * std::log2(r[m] / q[m]);
    }
    info += px * d;
  }
  return std::max(0.0, info);
}

namespace {

// Capacity depends only on the set of distinct rows; merging exact
// duplicates removes the flat directions they would otherwise introduce in
// the fixed-point iteration. Duplicates arise structurally in channels built
// from deterministic protocol maps.
CapacityResult capacity_distinct(const Channel& ch, double tol, int max_iter);

}  // namespace

CapacityResult capacity(const Channel& ch, double tol, int max_iter) {
  const std::size_t nx = ch.input().size();
  const std::size_t nm = ch.output().size();
  std::vector<std::size_t> owner(nx);  // representative row index
  std::vector<std::size_t> reps;
  for (std::size_t x = 0; x < nx; ++x) {
    owner[x] = x;
    for (std::size_t r : reps) {
      if (std::equal(ch.row(x).begin(), ch.row(x).end(), ch.row(r).begin())) {
        owner[x] = r;
        break;
      }
    }
    if (owner[x] == x) reps.push_back(x);
  }
  if (reps.size() == nx) return capacity_distinct(ch, tol, max_iter);

  std::vector<double> rows;
  rows.reserve(reps.size() * nm);
  for (std::size_t r : reps) rows.insert(rows.end(), ch.row(r).begin(), ch.row(r).end());
  const CapacityResult reduced = capacity_distinct(
      Channel(Alphabet::indexed("x", reps.size()), ch.output(), std::move(rows)), tol, max_iter);

  // split each representative's weight evenly across its duplicates
  std::vector<double> counts(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x) counts[owner[x]] += 1.0;
  std::vector<double> prior(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    const auto rep_pos =
        static_cast<std::size_t>(std::find(reps.begin(), reps.end(), owner[x]) - reps.begin());
    prior[x] = reduced.optimal_prior[rep_pos] / counts[owner[x]];
  }
  return CapacityResult{reduced.capacity, Dist(ch.input(), std::move(prior)),
                        reduced.lower_gap, reduced.iterations};
}

namespace {

CapacityResult capacity_distinct(const Channel& ch, double tol, int max_iter) {
  if (!(tol > 0.0)) throw ValidationError("capacity tolerance must be positive");
  if (max_iter < 1) throw ValidationError("capacity max_iter must be at least 1");

  const std::size_t nx = ch.input().size();
  const std::size_t nm = ch.output().size();
  std::vector<double> prior(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> d(nx, 0.0);

  // Overrelaxed multiplicative update p <- p 2^(gamma D). gamma = 1 is the
  // plain iteration; larger exponents take the same direction with a bigger
  // step, which closes the bracket on near-degenerate channels where the
  // plain rate stalls. A step is only accepted when it does not lose mutual
  // information, so the certified bracket below remains valid.
  auto stepped = [&](double gamma) {
    double dmax = *std::max_element(d.begin(), d.end());
    std::vector<double> next(nx);
    double norm = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      next[x] = prior[x] * std::exp2(gamma * (d[x] - dmax));
      norm += next[x];
    }
    for (auto& p : next) p /= norm;
    return next;
  };

  // max_x D(W_x || q): a valid upper bound on capacity for ANY output
  // distribution q, not only the one induced by the current prior
  auto dual_max = [&](const std::vector<double>& q) {
    double hi = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      auto r = ch.row(x);
      double dx = 0.0;
      for (std::size_t m = 0; m < nm; ++m) {
        if (r[m] > 0.0) dx += r[m] * std::log2(r[m] / q[m]);
      }
      hi = std::max(hi, dx);
    }
    return hi;
  };

  auto bracket = [&](const std::vector<double>& pr, std::vector<double>* d_out) {
    const auto q = ch.output_marginal(pr);
    double lo = 0.0, hi = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      auto r = ch.row(x);
      double dx = 0.0;
      for (std::size_t m = 0; m < nm; ++m) {
        if (r[m] > 0.0) dx += r[m] * std::log2(r[m] / q[m]);
      }
      if (d_out) (*d_out)[x] = dx;
      lo += pr[x] * dx;
      hi = std::max(hi, dx);
    }
    return std::pair<double, double>(std::max(0.0, lo), hi);
  };

  double gamma = 1.0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  // best dual bound seen so far; a Cesaro average of the induced output
  // distributions damps the oscillation the iteration can develop around
  // the optimum (restarted each power-of-two iteration)
  double upper_best = std::numeric_limits<double>::infinity();
  std::vector<double> q_sum(nm, 0.0), q_avg(nm, 0.0);
  int q_count = 0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::tie(lower, upper) = bracket(prior, &d);
    upper_best = std::min(upper_best, upper);
    {
      const auto q_now = ch.output_marginal(prior);
      if ((iter & (iter - 1)) == 0) {
        std::fill(q_sum.begin(), q_sum.end(), 0.0);
        q_count = 0;
      }
      for (std::size_t m = 0; m < nm; ++m) q_sum[m] += q_now[m];
      ++q_count;
      double norm = 0.0;
      for (double v : q_sum) norm += v;
      for (std::size_t m = 0; m < nm; ++m) q_avg[m] = q_sum[m] / norm;
      upper_best = std::min(upper_best, dual_max(q_avg));
    }
    upper = std::min(upper, upper_best);
    if (upper - lower <= tol) {
      return CapacityResult{lower, Dist(ch.input(), prior), upper - lower, iter};
    }

    // Face snap: a boundary-supported optimum makes the plain iteration
    // approach only like 1/t. Flooring near-zero entries closes the bracket
    // in one move when the support guess is right; the candidate is taken
    // only if it actually halves the bracket, and floored entries stay
    // revivable by the overrelaxed steps if the guess was wrong.
    {
      const double pmax = *std::max_element(prior.begin(), prior.end());
      bool snapped = false;
      for (double rel : {1e-2, 1e-3}) {
        bool any = false;
        std::vector<double> cand(nx);
        double norm = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
          cand[x] = prior[x] < rel * pmax ? 1e-300 : prior[x];
          any = any || cand[x] != prior[x];
          norm += cand[x];
        }
        if (!any) continue;
        for (auto& v : cand) v /= norm;
        const auto [lo, hi] = bracket(cand, nullptr);
        if (hi - lo < 0.5 * (upper - lower) && lo >= lower - 1e-12) {
          prior = std::move(cand);
          snapped = true;
          break;
        }
      }
      if (snapped) continue;
    }

    // Candidate steps at three exponents; the plain gamma = 1 update is the
    // textbook iteration and never loses mutual information, so taking the
    // best of the three keeps the ascent monotone while still allowing the
    // exponent to grow through flat stretches (ties prefer the larger step).
    struct Cand {
      std::vector<double> prior;
      double info;
      double next_gamma;
    };
    Cand cands[3] = {{stepped(2.0 * gamma), 0.0, std::min(2.0 * gamma, 1e12)},
                     {stepped(gamma), 0.0, gamma},
                     {stepped(1.0), 0.0, 1.0}};
    int best = 2;
    for (int c = 0; c < 3; ++c) cands[c].info = ch.mutual_information(cands[c].prior);
    for (int c = 1; c >= 0; --c) {
      if (cands[c].info >= cands[best].info) best = c;
    }
    prior = std::move(cands[best].prior);
    gamma = cands[best].next_gamma;
  }
  throw ConvergenceError("Blahut-Arimoto bracket did not close within max_iter", lower, upper,
                         max_iter);
}

}  // namespace

}  // namespace smpleak
