#include "smpleak/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "smpleak/bounds.hpp"
#include "smpleak/errors.hpp"

namespace smpleak {

// ---------------------------------------------------------------------------
// Channel simulation
// ---------------------------------------------------------------------------

int simulator_index_length(std::uint64_t index) { return elias_gamma_length(index); }

int simulator_escape_length(std::uint64_t rejection_cap, std::size_t output_size) {
  return elias_gamma_length(rejection_cap + 1) + ceil_log2(output_size);
}

ChannelSimulator::ChannelSimulator(Channel target, std::vector<double> proposal,
                                   std::uint64_t rejection_cap)
    : target_(std::move(target)), proposal_(std::move(proposal)), cap_(rejection_cap) {
  if (cap_ < 1) throw ValidationError("simulator rejection cap must be at least 1");
  if (proposal_.size() != target_.output().size()) {
    throw ValidationError("proposal size does not match the channel output alphabet");
  }
  check_probability_vector(proposal_, "simulator proposal");
  accept_.resize(target_.input().size());
  for (std::size_t x = 0; x < target_.input().size(); ++x) {
    double c = 1.0;
    auto row = target_.row(x);
    for (std::size_t v = 0; v < proposal_.size(); ++v) {
      if (row[v] == 0.0) continue;
      if (proposal_[v] <= 0.0) {
        throw ValidationError("proposal must cover the support of every channel row");
      }
      c = std::max(c, row[v] / proposal_[v]);
    }
    accept_[x] = 1.0 / c;
  }
}

double ChannelSimulator::accept_threshold(std::size_t x, std::size_t v) const {
  const double pv = target_.prob(x, v);
  if (pv == 0.0) return 0.0;
  return std::min(1.0, pv * accept_[x] / proposal_[v]);
}

Dist ChannelSimulator::output_dist(std::size_t x) const {
  // Per trial, the acceptance mass of symbol v is Q(v) * P_x(v)/(c_x Q(v)) =
  // a_x P_x(v); over the cap_ trials this sums to (1 - r) P_x(v) with
  // r = (1 - a_x)^cap_, and the escape branch contributes r P_x(v) since the
  // residual of von Neumann rejection stays proportional to the target.
  const double a = accept_[x];
  const double r = std::pow(1.0 - a, static_cast<double>(cap_));
  const double total = (1.0 - r) + r;
  auto row = target_.row(x);
  std::vector<double> out(row.size());
  for (std::size_t v = 0; v < row.size(); ++v) out[v] = row[v] * total;
  return Dist(target_.output(), std::move(out));
}

double ChannelSimulator::tv_distance(std::size_t x) const {
  const Dist out = output_dist(x);
  auto row = target_.row(x);
  double tv = 0.0;
  for (std::size_t v = 0; v < row.size(); ++v) tv += std::abs(out[v] - row[v]);
  return 0.5 * tv;
}

double ChannelSimulator::expected_length(std::size_t x) const {
  const double a = accept_[x];
  const double miss = 1.0 - a;
  double e = 0.0;
  // group indices by Elias-gamma length class [2^j, 2^(j+1))
  for (std::uint64_t lo = 1; lo <= cap_; lo <<= 1) {
    const std::uint64_t hi = std::min(cap_, (lo << 1) - 1);
    const double mass = std::pow(miss, static_cast<double>(lo - 1)) -
                        std::pow(miss, static_cast<double>(hi));
    e += mass * simulator_index_length(lo);
    if (hi == cap_) break;
  }
  e += std::pow(miss, static_cast<double>(cap_)) *
       simulator_escape_length(cap_, target_.output().size());
  return e;
}

double ChannelSimulator::max_expected_length() const {
  double worst = 0.0;
  for (std::size_t x = 0; x < target_.input().size(); ++x) {
    worst = std::max(worst, expected_length(x));
  }
  return worst;
}

int ChannelSimulator::max_length() const {
  return simulator_escape_length(cap_, target_.output().size());
}

namespace {

// Proposal: capacity-achieving output distribution floor-mixed with uniform;
// the mix weight is picked from a small grid by measured worst-input length.
ChannelSimulator tuned_simulator(const Channel& ch, std::uint64_t cap, double capacity_tol,
                                 double* capacity_out) {
  const CapacityResult cap_res = capacity(ch, capacity_tol);
  if (capacity_out) *capacity_out = cap_res.capacity;
  const std::vector<double> qstar = ch.output_marginal(cap_res.optimal_prior.probs());
  const std::size_t nv = ch.output().size();

  std::optional<ChannelSimulator> best;
  double best_len = 0.0;
  for (double alpha : {0.0, 1.0 / 1024, 1.0 / 64, 1.0 / 16, 1.0 / 4}) {
    std::vector<double> q(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      q[v] = (1.0 - alpha) * qstar[v] + alpha / static_cast<double>(nv);
    }
    if (alpha == 0.0) {
      bool covered = true;
      for (std::size_t x = 0; x < ch.input().size() && covered; ++x) {
        for (std::size_t v = 0; v < nv; ++v) {
          if (ch.prob(x, v) > 0.0 && q[v] < 1e-9) {
            covered = false;
            break;
          }
        }
      }
      if (!covered) continue;
    }
    ChannelSimulator sim(ch, std::move(q), cap);
    const double len = sim.max_expected_length();
    if (!best || len < best_len) {
      best_len = len;
      best.emplace(std::move(sim));
    }
  }
  return *best;  // the mixed candidates always construct
}

}  // namespace

std::pair<ChannelSimulator, SimulatorReport> hjmr_compress(const Channel& ch,
                                                           const SimulatorOptions& opt) {
  double cap_bits = 0.0;
  ChannelSimulator sim = tuned_simulator(ch, opt.rejection_cap, opt.capacity_tol, &cap_bits);
  SimulatorReport rep;
  rep.capacity = cap_bits;
  rep.bound = cap_bits + g1(cap_bits);
  for (std::size_t x = 0; x < ch.input().size(); ++x) {
    rep.expected_length_per_input.push_back(sim.expected_length(x));
    rep.tv_distance_per_input.push_back(sim.tv_distance(x));
  }
  return {std::move(sim), std::move(rep)};
}

namespace {

// Partition of [0,1) by a threshold set; probabilities with an arbitrary
// real threshold become finite coin registers: a draw below the threshold is
// exactly the union of the intervals left of it.
struct IntervalCoin {
  std::vector<double> breaks;  // right endpoints, strictly increasing, last == 1
  std::vector<double> masses;  // interval lengths

  static IntervalCoin from_thresholds(std::set<double> thresholds) {
    thresholds.erase(0.0);
    thresholds.insert(1.0);
    IntervalCoin c;
    double prev = 0.0;
    for (double t : thresholds) {
      if (!(t > 0.0 && t <= 1.0)) throw ValidationError("coin threshold out of range");
      c.breaks.push_back(t);
      c.masses.push_back(t - prev);
      prev = t;
    }
    return c;
  }

  // number of intervals fully below the threshold
  std::size_t rank(double threshold) const {
    std::size_t k = 0;
    while (k < breaks.size() && breaks[k] <= threshold) ++k;
    return k;
  }
};

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

Alphabet power_alphabet(const Alphabet& base, int k) {
  Alphabet out = base;
  for (int i = 1; i < k; ++i) out = Alphabet::product(out, base);
  return out;
}

std::vector<double> power_probs(std::span<const double> base, int k) {
  std::vector<double> out(base.begin(), base.end());
  for (int i = 1; i < k; ++i) {
    std::vector<double> next;
    next.reserve(out.size() * base.size());
    for (double a : out) {
      for (double b : base) next.push_back(a * b);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

MaterializedSide materialize_side(const ChannelSimulator& sim) {
  const Channel& ch = sim.target();
  const std::size_t nx = ch.input().size();
  const std::size_t nv = ch.output().size();
  if (sim.rejection_cap() > 8) {
    throw ValidationError("materialization needs a small rejection cap");
  }
  const int k = static_cast<int>(sim.rejection_cap());
  const std::uint64_t stream_states = ipow(nv, k);
  if (stream_states > 65536) {
    throw ValidationError("proposal stream register too large to materialize");
  }

  // acceptance coins: one interval register per trial
  std::set<double> acc_thresholds;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t v = 0; v < nv; ++v) {
      const double t = sim.accept_threshold(x, v);
      if (t > 0.0) acc_thresholds.insert(t);
    }
  }
  const IntervalCoin acc_coin = IntervalCoin::from_thresholds(std::move(acc_thresholds));
  // acceptance rank per (x, v): intervals below the threshold
  std::vector<std::size_t> acc_rank(nx * nv);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t v = 0; v < nv; ++v) {
      acc_rank[x * nv + v] = acc_coin.rank(sim.accept_threshold(x, v));
    }
  }

  // fallback sampler: interval register over the cumulative row boundaries
  std::set<double> fb_thresholds;
  std::vector<double> cum(nx * nv);
  for (std::size_t x = 0; x < nx; ++x) {
    double c = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      c += ch.prob(x, v);
      cum[x * nv + v] = std::min(c, 1.0);
      if (c > 0.0 && c < 1.0) fb_thresholds.insert(c);
    }
  }
  const IntervalCoin fb_coin = IntervalCoin::from_thresholds(std::move(fb_thresholds));
  // fallback symbol per (x, interval): the row band containing the interval
  std::vector<std::uint32_t> fb_symbol(nx * fb_coin.breaks.size());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t f = 0; f < fb_coin.breaks.size(); ++f) {
      const double right = fb_coin.breaks[f];
      std::uint32_t v = 0;
      while (v + 1 < nv && cum[x * nv + v] < right) ++v;
      fb_symbol[x * fb_coin.breaks.size() + f] = v;
    }
  }

  const std::size_t nw = acc_coin.breaks.size();
  const std::uint64_t coin_states = ipow(nw, k) * fb_coin.breaks.size();
  if (coin_states > 2'000'000) {
    throw ValidationError("acceptance coin register too large to materialize");
  }
  if (nx * coin_states * stream_states > 16'000'000) {
    throw ValidationError("sender map too large to materialize");
  }

  MaterializedSide side{
      Dist(power_alphabet(ch.output(), k), power_probs(sim.proposal(), k)),
      Dist(Alphabet::product(power_alphabet(Alphabet::indexed("w", nw), k),
                             Alphabet::indexed("f", fb_coin.breaks.size())),
           [&] {
             auto w = power_probs(acc_coin.masses, k);
             std::vector<double> out;
             out.reserve(w.size() * fb_coin.masses.size());
             for (double a : w) {
               for (double b : fb_coin.masses) out.push_back(a * b);
             }
             return out;
           }()),
      [&] {
        std::vector<std::string> labels;
        for (int i = 1; i <= k; ++i) labels.push_back("i" + std::to_string(i));
        for (std::size_t v = 0; v < nv; ++v) labels.push_back("e|" + ch.output().label(v));
        return Alphabet(std::move(labels));
      }(),
      LengthFunction::uniform(1),
      {},
      {}};

  std::vector<int> lengths;
  for (int i = 1; i <= k; ++i) lengths.push_back(simulator_index_length(i));
  for (std::size_t v = 0; v < nv; ++v) {
    lengths.push_back(simulator_escape_length(sim.rejection_cap(), nv));
  }
  side.lengths = LengthFunction(std::move(lengths));

  const std::size_t n_msg = static_cast<std::size_t>(k) + nv;
  const std::size_t nf = fb_coin.breaks.size();

  // sender map: first accepted trial's index, else the escape word of the
  // fallback draw
  side.map.resize(nx * coin_states * stream_states);
  std::vector<std::size_t> wdig(k), vdig(k);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::uint64_t coin = 0; coin < coin_states; ++coin) {
      std::uint64_t wpart = coin / nf;
      const std::size_t f = coin % nf;
      for (int i = k - 1; i >= 0; --i) {
        wdig[i] = wpart % nw;
        wpart /= nw;
      }
      for (std::uint64_t stream = 0; stream < stream_states; ++stream) {
        std::uint64_t spart = stream;
        for (int i = k - 1; i >= 0; --i) {
          vdig[i] = spart % nv;
          spart /= nv;
        }
        std::uint32_t msg = 0;
        bool accepted = false;
        for (int i = 0; i < k; ++i) {
          if (wdig[i] < acc_rank[x * nv + vdig[i]]) {
            msg = static_cast<std::uint32_t>(i);
            accepted = true;
            break;
          }
        }
        if (!accepted) {
          msg = static_cast<std::uint32_t>(k + fb_symbol[x * nf + f]);
        }
        side.map[(x * coin_states + coin) * stream_states + stream] = msg;
      }
    }
  }

  // referee decode: transmitted index reads the stream, escape words carry
  // the symbol directly
  side.decode.resize(n_msg * stream_states);
  for (std::size_t msg = 0; msg < n_msg; ++msg) {
    for (std::uint64_t stream = 0; stream < stream_states; ++stream) {
      std::uint32_t v;
      if (msg < static_cast<std::size_t>(k)) {
        std::uint64_t spart = stream;
        for (std::size_t i = k - 1; i > msg; --i) spart /= nv;
        v = static_cast<std::uint32_t>(spart % nv);
      } else {
        v = static_cast<std::uint32_t>(msg - k);
      }
      side.decode[msg * stream_states + stream] = v;
    }
  }
  return side;
}

SmpProtocol materialize_simulator(const ChannelSimulator& sim) {
  MaterializedSide side = materialize_side(sim);
  const Alphabet& v_alpha = sim.target().output();
  const Dist one = Dist::uniform(Alphabet({"-"}));

  SmpProtocol::Parts parts{Model::kAverage,
                           sim.target().input(),
                           Alphabet({"-"}),
                           v_alpha,
                           side.msg,
                           Alphabet({"m"}),
                           side.coins,
                           one,
                           one,
                           side.stream,
                           one,
                           side.map,
                           {0},
                           {},
                           side.lengths,
                           LengthFunction::uniform(1),
                           kDefaultCellCap};
  const std::size_t n_msg = side.msg.size();
  const std::size_t stream_states = side.stream.size();
  parts.referee_map.resize(n_msg * 1 * 1 * stream_states * 1);
  for (std::size_t m = 0; m < n_msg; ++m) {
    for (std::size_t s = 0; s < stream_states; ++s) {
      parts.referee_map[m * stream_states + s] = side.decode[m * stream_states + s];
    }
  }
  return SmpProtocol(std::move(parts));
}

// ---------------------------------------------------------------------------
// ic_to_ccav
// ---------------------------------------------------------------------------

std::pair<SmpProtocol, CompressReport> ic_to_ccav(const SmpProtocol& p,
                                                  const CompressOptions& opt) {
  if (p.model() == Model::kAverage) {
    throw ValidationError("ic_to_ccav expects a shared-randomness (or private) protocol");
  }

  const LeakageReport ic_rep = ic_worst(p, opt.capacity_tol);
  const Channel ch_a = alice_view(p).to_channel();
  const Channel ch_b = bob_view(p).to_channel();

  CompressReport rep;
  rep.ic = ic_rep.ic;
  rep.bound = rep.ic + 2.0 * g1(rep.ic);

  // Longest proposal stream whose dense realization stays enumerable: the
  // referee table and the per-side sender tables all have to fit.
  const int start_cap = opt.materialize_cap > 0 ? opt.materialize_cap : 4;
  std::optional<MaterializedSide> side_a_opt, side_b_opt;
  int cap = 0;
  for (int k = start_cap; k >= 1 && !side_a_opt; --k) {
    try {
      const ChannelSimulator sim_a =
          tuned_simulator(ch_a, static_cast<std::uint64_t>(k), opt.capacity_tol, nullptr);
      const ChannelSimulator sim_b =
          tuned_simulator(ch_b, static_cast<std::uint64_t>(k), opt.capacity_tol, nullptr);
      MaterializedSide a = materialize_side(sim_a);
      MaterializedSide b = materialize_side(sim_b);
      const std::uint64_t referee_cells = std::uint64_t{a.msg.size()} * b.msg.size() *
                                          p.rc().size() * a.stream.size() * b.stream.size();
      const std::uint64_t table_a =
          std::uint64_t{p.x().size()} * a.coins.size() * a.stream.size();
      const std::uint64_t table_b =
          std::uint64_t{p.y().size()} * b.coins.size() * b.stream.size();
      if (referee_cells > opt.table_budget || table_a > opt.table_budget ||
          table_b > opt.table_budget) {
        continue;
      }
      side_a_opt = std::move(a);
      side_b_opt = std::move(b);
      cap = k;
    } catch (const ValidationError&) {
      if (k == 1) throw;
    }
  }
  if (!side_a_opt) throw ValidationError("protocol too large to compress at desk scale");
  MaterializedSide& side_a = *side_a_opt;
  MaterializedSide& side_b = *side_b_opt;
  rep.stream_cap_a = cap;
  rep.stream_cap_b = cap;

  const std::size_t nma_orig = p.ma().size();
  const std::size_t nmb_orig = p.mb().size();
  const std::size_t n_msg_a = side_a.msg.size(), n_msg_b = side_b.msg.size();
  const std::size_t sa = side_a.stream.size(), sb = side_b.stream.size();

  SmpProtocol::Parts parts{Model::kAverage,
                           p.x(),
                           p.y(),
                           p.z(),
                           side_a.msg,
                           side_b.msg,
                           side_a.coins,
                           side_b.coins,
                           p.rc(),
                           side_a.stream,
                           side_b.stream,
                           std::move(side_a.map),
                           std::move(side_b.map),
                           {},
                           side_a.lengths,
                           side_b.lengths,
                           p.cell_cap()};
  parts.referee_map.resize(n_msg_a * n_msg_b * p.rc().size() * sa * sb);
  for (std::size_t ma = 0; ma < n_msg_a; ++ma) {
    for (std::size_t mb = 0; mb < n_msg_b; ++mb) {
      for (std::size_t rc = 0; rc < p.rc().size(); ++rc) {
        for (std::size_t ra = 0; ra < sa; ++ra) {
          const std::uint32_t va = side_a.decode[ma * sa + ra];
          const std::size_t rac_orig = va / nma_orig;
          const std::size_t ma_orig = va % nma_orig;
          for (std::size_t rb = 0; rb < sb; ++rb) {
            const std::uint32_t vb = side_b.decode[mb * sb + rb];
            const std::size_t rbc_orig = vb / nmb_orig;
            const std::size_t mb_orig = vb % nmb_orig;
            parts.referee_map[(((ma * n_msg_b + mb) * p.rc().size() + rc) * sa + ra) * sb + rb] =
                p.referee(ma_orig, mb_orig, rc, rac_orig, rbc_orig);
          }
        }
      }
    }
  }

  SmpProtocol compressed(std::move(parts));

  const Evaluator ev_in(p);
  const Evaluator ev_out(compressed);
  rep.max_tv = 0.0;
  for (std::size_t ix = 0; ix < p.x().size(); ++ix) {
    for (std::size_t iy = 0; iy < p.y().size(); ++iy) {
      const Dist a = ev_in.output_dist(ix, iy);
      const Dist b = ev_out.output_dist(ix, iy);
      double tv = 0.0;
      for (std::size_t z = 0; z < a.size(); ++z) tv += std::abs(a[z] - b[z]);
      rep.max_tv = std::max(rep.max_tv, 0.5 * tv);
    }
  }
  rep.cc_av = ev_out.costs().cc_av;
  rep.exact = rep.max_tv <= opt.exactness_tol;
  rep.bound_holds = rep.cc_av <= rep.bound + 1e-9;
  return {std::move(compressed), rep};
}

// ---------------------------------------------------------------------------
// markov_truncate
// ---------------------------------------------------------------------------

std::pair<SmpProtocol, TruncateReport> markov_truncate(const SmpProtocol& p, double delta) {
  if (p.model() != Model::kAverage) {
    throw ValidationError("markov_truncate expects an average-length protocol");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must be in (0, 1)");
  if (p.z().size() != 2) {
    throw ValidationError("markov_truncate needs a Boolean output alphabet");
  }

  const SideView va = alice_view(p);
  const SideView vb = bob_view(p);
  const Evaluator ev(p);
  const CostReport cost_in = ev.costs();

  TruncateReport rep;
  rep.delta = delta;
  rep.cc_av_in = cost_in.cc_av;
  for (std::size_t ix = 0; ix < p.x().size(); ++ix) {
    rep.threshold_a.push_back(va.expected_length(ix) / delta);
  }
  for (std::size_t iy = 0; iy < p.y().size(); ++iy) {
    rep.threshold_b.push_back(vb.expected_length(iy) / delta);
  }

  struct SidePlan {
    std::vector<std::int64_t> remap;  // original msg -> new msg, -1 = never kept
    std::size_t n_new = 0;
    std::int64_t abort_index = -1;     // new index of the abort flag, if present
    std::vector<char> keep;            // [input][msg]
  };

  auto plan_side = [](const SideView& view, const std::vector<double>& thresholds) {
    SidePlan plan;
    const std::size_t n_in = view.input.size(), n_msg = view.message.size();
    plan.keep.assign(n_in * n_msg, 0);
    std::vector<char> kept_any(n_msg, 0);
    bool truncated = false;
    for (std::size_t i = 0; i < n_in; ++i) {
      for (std::size_t r = 0; r < view.shared_prior.size(); ++r) {
        for (std::size_t m = 0; m < n_msg; ++m) {
          if (view.prob(i, r, m) == 0.0) continue;
          if ((*view.lengths)[m] <= thresholds[i]) {
            plan.keep[i * n_msg + m] = 1;
            kept_any[m] = 1;
          } else {
            truncated = true;
          }
        }
      }
    }
    plan.remap.assign(n_msg, -1);
    for (std::size_t m = 0; m < n_msg; ++m) {
      if (kept_any[m]) plan.remap[m] = static_cast<std::int64_t>(plan.n_new++);
    }
    if (truncated) plan.abort_index = static_cast<std::int64_t>(plan.n_new++);
    return plan;
  };

  const SidePlan plan_a = plan_side(va, rep.threshold_a);
  const SidePlan plan_b = plan_side(vb, rep.threshold_b);
  rep.any_truncation = plan_a.abort_index >= 0 || plan_b.abort_index >= 0;

  auto side_alphabet = [](const Alphabet& orig, const SidePlan& plan, const char* abort_label) {
    std::vector<std::string> labels;
    for (std::size_t m = 0; m < orig.size(); ++m) {
      if (plan.remap[m] >= 0) labels.push_back(orig.label(m));
    }
    if (plan.abort_index >= 0) labels.push_back(abort_label);
    return Alphabet(std::move(labels));
  };

  SmpProtocol::Parts parts{Model::kShared,
                           p.x(),
                           p.y(),
                           p.z(),
                           side_alphabet(p.ma(), plan_a, "~abort"),
                           side_alphabet(p.mb(), plan_b, "~abort"),
                           p.ra(),
                           p.rb(),
                           p.rc(),
                           p.rac(),
                           p.rbc(),
                           {},
                           {},
                           {},
                           LengthFunction::uniform(1),
                           LengthFunction::uniform(1),
                           p.cell_cap()};
  parts.len_a = LengthFunction::uniform(parts.ma.size());
  parts.len_b = LengthFunction::uniform(parts.mb.size());

  // abort handling needs a fresh referee coin
  const bool need_coin = rep.any_truncation;
  if (need_coin) {
    parts.rc = Dist(Alphabet::product(p.rc().alphabet(), Alphabet({"c0", "c1"})), [&] {
      std::vector<double> probs;
      probs.reserve(p.rc().size() * 2);
      for (std::size_t i = 0; i < p.rc().size(); ++i) {
        probs.push_back(p.rc()[i] * 0.5);
        probs.push_back(p.rc()[i] * 0.5);
      }
      return probs;
    }());
  }

  const std::size_t nra = p.ra().size(), nrac = p.rac().size();
  parts.alice_map.resize(p.x().size() * nra * nrac);
  for (std::size_t ix = 0; ix < p.x().size(); ++ix) {
    for (std::size_t ra = 0; ra < nra; ++ra) {
      for (std::size_t rac = 0; rac < nrac; ++rac) {
        const std::uint32_t m = p.alice(ix, ra, rac);
        const bool keep = plan_a.keep[ix * p.ma().size() + m] != 0;
        parts.alice_map[(ix * nra + ra) * nrac + rac] = static_cast<std::uint32_t>(
            keep ? plan_a.remap[m] : plan_a.abort_index);
      }
    }
  }
  const std::size_t nrb = p.rb().size(), nrbc = p.rbc().size();
  parts.bob_map.resize(p.y().size() * nrb * nrbc);
  for (std::size_t iy = 0; iy < p.y().size(); ++iy) {
    for (std::size_t rb = 0; rb < nrb; ++rb) {
      for (std::size_t rbc = 0; rbc < nrbc; ++rbc) {
        const std::uint32_t m = p.bob(iy, rb, rbc);
        const bool keep = plan_b.keep[iy * p.mb().size() + m] != 0;
        parts.bob_map[(iy * nrb + rb) * nrbc + rbc] = static_cast<std::uint32_t>(
            keep ? plan_b.remap[m] : plan_b.abort_index);
      }
    }
  }

  // original message index per new message index (aborts map to -1)
  auto back_map = [](const SidePlan& plan, std::size_t n_orig) {
    std::vector<std::int64_t> back(plan.n_new + (plan.abort_index >= 0 ? 0 : 0), -1);
    back.assign(static_cast<std::size_t>(plan.abort_index >= 0 ? plan.n_new : plan.n_new), -1);
    for (std::size_t m = 0; m < n_orig; ++m) {
      if (plan.remap[m] >= 0) back[static_cast<std::size_t>(plan.remap[m])] =
          static_cast<std::int64_t>(m);
    }
    return back;
  };
  const auto back_a = back_map(plan_a, p.ma().size());
  const auto back_b = back_map(plan_b, p.mb().size());

  const std::size_t nma_new = parts.ma.size(), nmb_new = parts.mb.size();
  const std::size_t nrc_new = parts.rc.size();
  parts.referee_map.resize(nma_new * nmb_new * nrc_new * nrac * nrbc);
  for (std::size_t ma = 0; ma < nma_new; ++ma) {
    for (std::size_t mb = 0; mb < nmb_new; ++mb) {
      const bool abort = (plan_a.abort_index >= 0 &&
                          ma == static_cast<std::size_t>(plan_a.abort_index)) ||
                         (plan_b.abort_index >= 0 &&
                          mb == static_cast<std::size_t>(plan_b.abort_index));
      for (std::size_t rc = 0; rc < nrc_new; ++rc) {
        const std::size_t rc_orig = need_coin ? rc / 2 : rc;
        const std::size_t coin = need_coin ? rc % 2 : 0;
        for (std::size_t rac = 0; rac < nrac; ++rac) {
          for (std::size_t rbc = 0; rbc < nrbc; ++rbc) {
            std::uint32_t z;
            if (abort) {
              z = static_cast<std::uint32_t>(coin);
            } else {
              z = p.referee(static_cast<std::size_t>(back_a[ma]),
                            static_cast<std::size_t>(back_b[mb]), rc_orig, rac, rbc);
            }
            parts.referee_map[(((ma * nmb_new + mb) * nrc_new + rc) * nrac + rac) * nrbc + rbc] =
                z;
          }
        }
      }
    }
  }

  SmpProtocol truncated(std::move(parts));

  // abort probability, for the report
  for (std::size_t ix = 0; ix < p.x().size(); ++ix) {
    double abort_a = 0.0;
    for (std::size_t rac = 0; rac < nrac; ++rac) {
      for (std::size_t m = 0; m < p.ma().size(); ++m) {
        if (!plan_a.keep[ix * p.ma().size() + m]) {
          abort_a += p.rac()[rac] * va.prob(ix, rac, m);
        }
      }
    }
    for (std::size_t iy = 0; iy < p.y().size(); ++iy) {
      double abort_b = 0.0;
      for (std::size_t rbc = 0; rbc < nrbc; ++rbc) {
        for (std::size_t m = 0; m < p.mb().size(); ++m) {
          if (!plan_b.keep[iy * p.mb().size() + m]) {
            abort_b += p.rbc()[rbc] * vb.prob(iy, rbc, m);
          }
        }
      }
      rep.max_abort_prob = std::max(rep.max_abort_prob, 1.0 - (1.0 - abort_a) * (1.0 - abort_b));
    }
  }

  const CostReport cost_out = costs(truncated);
  rep.cc_sh_out = cost_out.cc_sh;
  rep.cc_sh_bound = cost_in.cc_av / delta + 4.0;
  rep.bound_holds = rep.cc_sh_out <= rep.cc_sh_bound + 1e-9;
  return {std::move(truncated), rep};
}

// ---------------------------------------------------------------------------
// newman_derandomize
// ---------------------------------------------------------------------------

namespace {
const double kLog2E = std::log2(std::exp(1.0));
}

std::uint64_t newman_sample_count(std::size_t x_size, std::size_t y_size, double delta) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  const double n_a = std::log2(static_cast<double>(x_size));
  const double n_b = std::log2(static_cast<double>(y_size));
  const double half = delta / 2.0;
  const double t = std::ceil((n_a + n_b) / (2.0 * half * half * kLog2E));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(t));
}

std::pair<SmpProtocol, DerandomizationReport> newman_derandomize(const SmpProtocol& p,
                                                                 const FunctionTable& f,
                                                                 double delta,
                                                                 std::uint64_t seed,
                                                                 const NewmanOptions& opt) {
  if (p.model() != Model::kShared) {
    throw ValidationError("newman_derandomize expects a shared-randomness protocol");
  }
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  check_function(p, f);

  const Evaluator ev(p);
  const double eps = ev.worst_error(f);
  if (!(eps + delta < 0.5)) {
    throw ValidationError("epsilon + delta must stay below 1/2");
  }
  const std::uint64_t t = opt.t_override ? *opt.t_override
                                         : newman_sample_count(p.x().size(), p.y().size(), delta);
  if (opt.restarts < 1) throw ValidationError("at least one search attempt is required");

  // exact error with both shared registers pinned
  const std::size_t nx = p.x().size(), ny = p.y().size();
  const std::size_t nrac = p.rac().size(), nrbc = p.rbc().size();
  std::vector<double> err(nx * ny * nrac * nrbc, 0.0);
  const SideView& va = ev.alice();
  const SideView& vb = ev.bob();
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::uint32_t want = f.value(ix, iy);
      for (std::size_t rac = 0; rac < nrac; ++rac) {
        for (std::size_t rbc = 0; rbc < nrbc; ++rbc) {
          double e = 0.0;
          for (std::size_t ma = 0; ma < p.ma().size(); ++ma) {
            const double pa = va.prob(ix, rac, ma);
            if (pa == 0.0) continue;
            for (std::size_t mb = 0; mb < p.mb().size(); ++mb) {
              const double pb = vb.prob(iy, rbc, mb);
              if (pb == 0.0) continue;
              double bad = 0.0;
              for (std::size_t rc = 0; rc < p.rc().size(); ++rc) {
                if (p.referee(ma, mb, rc, rac, rbc) != want) bad += p.rc()[rc];
              }
              e += pa * pb * bad;
            }
          }
          err[((ix * ny + iy) * nrac + rac) * nrbc + rbc] = e;
        }
      }
    }
  }

  Rng rng(seed);
  const auto rac_probs = p.rac().probs();
  const auto rbc_probs = p.rbc().probs();
  std::vector<std::size_t> cand_a(t), cand_b(t);
  int attempts = 0;
  bool found = false;
  double verified_worst = 0.0;
  const double target = eps + delta;
  while (attempts < opt.restarts && !found) {
    ++attempts;
    for (auto& c : cand_a) c = rng.sample(rac_probs);
    for (auto& c : cand_b) c = rng.sample(rbc_probs);
    double worst = 0.0;
    for (std::size_t ix = 0; ix < nx && worst <= target + 1e-12; ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        double sum = 0.0;
        const double* base = &err[(ix * ny + iy) * nrac * nrbc];
        for (std::size_t i = 0; i < t; ++i) {
          const double* row = base + cand_a[i] * nrbc;
          for (std::size_t j = 0; j < t; ++j) sum += row[cand_b[j]];
        }
        worst = std::max(worst, sum / (static_cast<double>(t) * static_cast<double>(t)));
      }
    }
    if (worst <= target + 1e-12) {
      found = true;
      verified_worst = worst;
    }
  }
  if (!found) {
    throw SearchError("no verified Newman candidate set within the restart budget", attempts);
  }

  // package: each party picks its index privately and prefixes it
  const Alphabet idx_a = Alphabet::indexed("i", t);
  const Alphabet idx_b = Alphabet::indexed("j", t);
  const Dist one = Dist::uniform(Alphabet({"-"}));
  SmpProtocol::Parts parts{Model::kPrivate,
                           p.x(),
                           p.y(),
                           p.z(),
                           Alphabet::product(idx_a, p.ma()),
                           Alphabet::product(idx_b, p.mb()),
                           Dist(Alphabet::product(p.ra().alphabet(), idx_a), [&] {
                             std::vector<double> probs;
                             probs.reserve(p.ra().size() * t);
                             for (std::size_t a = 0; a < p.ra().size(); ++a) {
                               for (std::uint64_t i = 0; i < t; ++i) {
                                 probs.push_back(p.ra()[a] / static_cast<double>(t));
                               }
                             }
                             return probs;
                           }()),
                           Dist(Alphabet::product(p.rb().alphabet(), idx_b), [&] {
                             std::vector<double> probs;
                             probs.reserve(p.rb().size() * t);
                             for (std::size_t b = 0; b < p.rb().size(); ++b) {
                               for (std::uint64_t j = 0; j < t; ++j) {
                                 probs.push_back(p.rb()[b] / static_cast<double>(t));
                               }
                             }
                             return probs;
                           }()),
                           p.rc(),
                           one,
                           one,
                           {},
                           {},
                           {},
                           LengthFunction::uniform(t * p.ma().size()),
                           LengthFunction::uniform(t * p.mb().size()),
                           p.cell_cap()};

  const std::size_t nma = p.ma().size(), nmb = p.mb().size();
  parts.alice_map.resize(nx * p.ra().size() * t);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t ra = 0; ra < p.ra().size(); ++ra) {
      for (std::uint64_t i = 0; i < t; ++i) {
        parts.alice_map[(ix * p.ra().size() + ra) * t + i] =
            static_cast<std::uint32_t>(i * nma + p.alice(ix, ra, cand_a[i]));
      }
    }
  }
  parts.bob_map.resize(ny * p.rb().size() * t);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t rb = 0; rb < p.rb().size(); ++rb) {
      for (std::uint64_t j = 0; j < t; ++j) {
        parts.bob_map[(iy * p.rb().size() + rb) * t + j] =
            static_cast<std::uint32_t>(j * nmb + p.bob(iy, rb, cand_b[j]));
      }
    }
  }
  const std::size_t nma_new = t * nma, nmb_new = t * nmb;
  parts.referee_map.resize(nma_new * nmb_new * p.rc().size());
  for (std::size_t ma = 0; ma < nma_new; ++ma) {
    const std::size_t i = ma / nma, ma_orig = ma % nma;
    for (std::size_t mb = 0; mb < nmb_new; ++mb) {
      const std::size_t j = mb / nmb, mb_orig = mb % nmb;
      for (std::size_t rc = 0; rc < p.rc().size(); ++rc) {
        parts.referee_map[(ma * nmb_new + mb) * p.rc().size() + rc] =
            p.referee(ma_orig, mb_orig, rc, cand_a[i], cand_b[j]);
      }
    }
  }

  SmpProtocol out(std::move(parts));
  DerandomizationReport rep;
  rep.t = t;
  rep.achieved_error = verified_worst;
  rep.target_error = target;
  rep.restarts_used = attempts - 1;
  return {std::move(out), rep};
}

// ---------------------------------------------------------------------------
// bk_derandomize_alice
// ---------------------------------------------------------------------------

std::uint64_t bk_sample_count(std::size_t mb_size, double delta) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  const double c_b = std::log2(static_cast<double>(mb_size));
  const double t = std::ceil((c_b + 2.0) / (2.0 * delta * delta * kLog2E));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(t));
}

BkProtocol::BkProtocol(SmpProtocol base, std::uint64_t t, std::vector<std::uint32_t> tuples)
    : base_(std::move(base)), t_(t), tuples_(std::move(tuples)) {
  if (base_.model() != Model::kPrivate) {
    throw ValidationError("BkProtocol needs a private-coin base protocol");
  }
  if (base_.z().size() != 2) throw ValidationError("BkProtocol needs a Boolean output");
  if (t_ < 1) throw ValidationError("BkProtocol needs t >= 1");
  if (tuples_.size() != base_.x().size() * t_) {
    throw ValidationError("tuple table size must be |X| * t");
  }
  for (auto m : tuples_) {
    if (m >= base_.ma().size()) throw ValidationError("tuple entry out of range");
  }
  q_.resize(base_.ma().size() * base_.mb().size());
  for (std::size_t ma = 0; ma < base_.ma().size(); ++ma) {
    for (std::size_t mb = 0; mb < base_.mb().size(); ++mb) {
      double q = 0.0;
      for (std::size_t rc = 0; rc < base_.rc().size(); ++rc) {
        if (base_.referee(ma, mb, rc, 0, 0) == 1) q += base_.rc()[rc];
      }
      q_[ma * base_.mb().size() + mb] = q;
    }
  }
}

std::span<const std::uint32_t> BkProtocol::tuple(std::size_t ix) const {
  return std::span<const std::uint32_t>(tuples_).subspan(ix * t_, t_);
}

double BkProtocol::q_value(std::size_t ima, std::size_t imb) const {
  return q_[ima * base_.mb().size() + imb];
}

double BkProtocol::qbar(std::size_t ix, std::size_t imb) const {
  double s = 0.0;
  for (auto m : tuple(ix)) s += q_value(m, imb);
  return s / static_cast<double>(t_);
}

Dist BkProtocol::output_dist(std::size_t ix, std::size_t iy) const {
  double p1 = 0.0;
  for (std::size_t rb = 0; rb < base_.rb().size(); ++rb) {
    p1 += base_.rb()[rb] * qbar(ix, base_.bob(iy, rb, 0));
  }
  return Dist(base_.z(), {1.0 - p1, p1});
}

double BkProtocol::worst_error(const FunctionTable& f) const {
  check_function(base_, f);
  double worst = 0.0;
  for (std::size_t ix = 0; ix < base_.x().size(); ++ix) {
    for (std::size_t iy = 0; iy < base_.y().size(); ++iy) {
      const Dist out = output_dist(ix, iy);
      worst = std::max(worst, 1.0 - out[f.value(ix, iy)]);
    }
  }
  return worst;
}

int BkProtocol::alice_message_bits() const {
  return static_cast<int>(std::ceil(static_cast<double>(t_) *
                                    std::log2(static_cast<double>(base_.ma().size()))));
}

int BkProtocol::cc_priv() const {
  return alice_message_bits() + ceil_log2(base_.mb().size());
}

std::pair<BkProtocol, DerandomizationReport> bk_derandomize_alice(const SmpProtocol& p,
                                                                  const FunctionTable& f,
                                                                  double delta,
                                                                  std::uint64_t seed,
                                                                  const BkOptions& opt) {
  if (p.model() != Model::kPrivate) {
    throw ValidationError("bk_derandomize_alice expects a private-coin protocol");
  }
  if (p.z().size() != 2) throw ValidationError("bk_derandomize_alice needs a Boolean output");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  check_function(p, f);
  if (opt.restarts < 1) throw ValidationError("at least one search attempt is required");

  const double eps = worst_error(p, f);
  if (!(eps + delta < 0.5)) {
    throw ValidationError("epsilon + delta must stay below 1/2");
  }
  const std::uint64_t t = opt.t_override ? *opt.t_override : bk_sample_count(p.mb().size(), delta);

  // base referee acceptance and its true mean under Alice's coins
  const std::size_t nma = p.ma().size(), nmb = p.mb().size(), nx = p.x().size();
  std::vector<double> q(nma * nmb, 0.0);
  for (std::size_t ma = 0; ma < nma; ++ma) {
    for (std::size_t mb = 0; mb < nmb; ++mb) {
      for (std::size_t rc = 0; rc < p.rc().size(); ++rc) {
        if (p.referee(ma, mb, rc, 0, 0) == 1) q[ma * nmb + mb] += p.rc()[rc];
      }
    }
  }
  std::vector<double> truth(nx * nmb, 0.0);  // P(x, m_B)
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t ra = 0; ra < p.ra().size(); ++ra) {
      const std::uint32_t ma = p.alice(ix, ra, 0);
      for (std::size_t mb = 0; mb < nmb; ++mb) {
        truth[ix * nmb + mb] += p.ra()[ra] * q[ma * nmb + mb];
      }
    }
  }

  Rng rng(seed);
  const auto ra_probs = p.ra().probs();
  std::vector<std::uint32_t> tuples(nx * t);
  int extra_restarts = 0;
  for (std::size_t ix = 0; ix < nx; ++ix) {
    bool ok = false;
    for (int attempt = 0; attempt < opt.restarts && !ok; ++attempt) {
      if (attempt > 0) ++extra_restarts;
      for (std::uint64_t i = 0; i < t; ++i) {
        tuples[ix * t + i] = p.alice(ix, rng.sample(ra_probs), 0);
      }
      ok = true;
      for (std::size_t mb = 0; mb < nmb && ok; ++mb) {
        double qbar = 0.0;
        for (std::uint64_t i = 0; i < t; ++i) qbar += q[tuples[ix * t + i] * nmb + mb];
        qbar /= static_cast<double>(t);
        if (!(std::abs(qbar - truth[ix * nmb + mb]) < delta)) ok = false;
      }
    }
    if (!ok) {
      throw SearchError("no verified Babai-Kimmel tuple for input " + p.x().label(ix) +
                            " within the restart budget",
                        extra_restarts + 1);
    }
  }

  BkProtocol out(p, t, std::move(tuples));
  DerandomizationReport rep;
  rep.t = t;
  rep.achieved_error = out.worst_error(f);
  rep.target_error = eps + delta;
  rep.restarts_used = extra_restarts;
  return {std::move(out), rep};
}

}  // namespace smpleak
