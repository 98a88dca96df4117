#include "smpleak/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "smpleak/errors.hpp"

namespace smpleak {

const char* model_name(Model m) {
  switch (m) {
    case Model::kPrivate: return "private";
    case Model::kShared: return "shared";
    case Model::kAverage: return "average";
  }
  return "?";
}

Model model_from_name(const std::string& name) {
  if (name == "private") return Model::kPrivate;
  if (name == "shared") return Model::kShared;
  if (name == "average") return Model::kAverage;
  throw ValidationError("unknown model tag: " + name);
}

namespace {

void check_map(const std::vector<std::uint32_t>& map, std::size_t want_size,
               std::size_t range, const char* what) {
  if (map.size() != want_size) {
    throw ValidationError(std::string(what) + ": map has " + std::to_string(map.size()) +
                          " entries, expected " + std::to_string(want_size));
  }
  for (auto v : map) {
    if (v >= range) throw ValidationError(std::string(what) + ": map entry out of range");
  }
}

}  // namespace

SmpProtocol::SmpProtocol(Parts parts) : parts_(std::move(parts)) {
  const auto& p = parts_;
  check_map(p.alice_map, p.x.size() * p.ra.size() * p.rac.size(), p.ma.size(), "alice_map");
  check_map(p.bob_map, p.y.size() * p.rb.size() * p.rbc.size(), p.mb.size(), "bob_map");
  check_map(p.referee_map,
            p.ma.size() * p.mb.size() * p.rc.size() * p.rac.size() * p.rbc.size(), p.z.size(),
            "referee_map");
  if (p.len_a.size() != p.ma.size() || p.len_b.size() != p.mb.size()) {
    throw ValidationError("length function size does not match message alphabet");
  }
  if (p.model == Model::kPrivate && (p.rac.size() != 1 || p.rbc.size() != 1)) {
    throw ValidationError("private model requires degenerate shared-randomness registers");
  }
  if (p.model != Model::kAverage &&
      (!p.len_a.is_uniform(p.ma.size()) || !p.len_b.is_uniform(p.mb.size()))) {
    throw ValidationError("non-average models use the uniform length functions");
  }
  if (p.cell_cap == 0) throw ValidationError("cell cap must be positive");
}

std::uint64_t SmpProtocol::randomness_cells() const {
  return std::uint64_t{parts_.ra.size()} * parts_.rb.size() * parts_.rc.size() *
         parts_.rac.size() * parts_.rbc.size();
}

void FunctionTable::validate() const {
  if (table.size() != x.size() * y.size()) {
    throw ValidationError("function table size does not match |X| x |Y|");
  }
  for (auto v : table) {
    if (v >= z.size()) throw ValidationError("function table value out of range");
  }
}

FunctionTable make_equality(int bits) {
  if (bits < 1 || bits > 12) {
    throw ValidationError("equality input width must be between 1 and 12 bits");
  }
  FunctionTable f{Alphabet::bitstrings(bits), Alphabet::bitstrings(bits),
                  Alphabet({"0", "1"}),
                  {}};
  const std::size_t n = f.x.size();
  f.table.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) f.table[i * n + i] = 1;
  return f;
}

InputPrior InputPrior::uniform(std::size_t nx, std::size_t ny) {
  return InputPrior{std::vector<double>(nx * ny, 1.0 / static_cast<double>(nx * ny))};
}

InputPrior InputPrior::point_mass(std::size_t nx, std::size_t ny, std::size_t ix,
                                  std::size_t iy) {
  InputPrior mu{std::vector<double>(nx * ny, 0.0)};
  mu.p[ix * ny + iy] = 1.0;
  return mu;
}

InputPrior InputPrior::product(std::span<const double> px, std::span<const double> py) {
  InputPrior mu;
  mu.p.reserve(px.size() * py.size());
  for (double a : px) {
    for (double b : py) mu.p.push_back(a * b);
  }
  return mu;
}

void InputPrior::validate(const SmpProtocol& p_ref) const {
  if (p.size() != p_ref.x().size() * p_ref.y().size()) {
    throw ValidationError("input prior size does not match |X| x |Y|");
  }
  check_probability_vector(p, "InputPrior");
}

Channel SideView::to_channel() const {
  const std::size_t nr = shared_prior.size();
  const std::size_t nm = message.size();
  std::vector<double> rows(input.size() * nr * nm);
  for (std::size_t ix = 0; ix < input.size(); ++ix) {
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t m = 0; m < nm; ++m) {
        rows[(ix * nr + r) * nm + m] = shared_prior[r] * prob(ix, r, m);
      }
    }
  }
  return Channel(input, Alphabet::product(shared, message), std::move(rows));
}

std::vector<double> SideView::msg_marginal(std::size_t ix) const {
  std::vector<double> out(message.size(), 0.0);
  for (std::size_t r = 0; r < shared_prior.size(); ++r) {
    for (std::size_t m = 0; m < message.size(); ++m) out[m] += shared_prior[r] * prob(ix, r, m);
  }
  return out;
}

double SideView::expected_length(std::size_t ix) const {
  return lengths->expected_length(msg_marginal(ix));
}

namespace {

SideView make_view(const Alphabet& input, const Dist& priv, const Dist& shared,
                   const Alphabet& message, const LengthFunction& lengths, bool is_alice,
                   const SmpProtocol& p) {
  SideView v{input, shared.alphabet(), message,
             std::vector<double>(shared.probs().begin(), shared.probs().end()),
             std::vector<double>(input.size() * shared.size() * message.size(), 0.0), &lengths};
  for (std::size_t ix = 0; ix < input.size(); ++ix) {
    for (std::size_t r = 0; r < shared.size(); ++r) {
      for (std::size_t a = 0; a < priv.size(); ++a) {
        const std::uint32_t m = is_alice ? p.alice(ix, a, r) : p.bob(ix, a, r);
        v.msg_given[(ix * shared.size() + r) * message.size() + m] += priv[a];
      }
    }
  }
  return v;
}

}  // namespace

SideView alice_view(const SmpProtocol& p) {
  return make_view(p.x(), p.ra(), p.rac(), p.ma(), p.len_a(), true, p);
}

SideView bob_view(const SmpProtocol& p) {
  return make_view(p.y(), p.rb(), p.rbc(), p.mb(), p.len_b(), false, p);
}

namespace {

// The evaluation is factored per side, so the guard covers the tables it
// actually enumerates rather than the nominal register product.
const SmpProtocol& check_evaluation_cap(const SmpProtocol& p) {
  const std::uint64_t side_a = std::uint64_t{p.x().size()} * p.ra().size() * p.rac().size();
  const std::uint64_t side_b = std::uint64_t{p.y().size()} * p.rb().size() * p.rbc().size();
  const std::uint64_t sum_cells = std::uint64_t{p.rac().size()} * p.rbc().size() *
                                  p.rc().size() * p.ma().size() * p.mb().size();
  const std::uint64_t needed = std::max({side_a, side_b, sum_cells});
  if (needed > p.cell_cap()) {
    throw CapExceededError("protocol enumeration exceeds the cell cap", needed, p.cell_cap());
  }
  return p;
}

}  // namespace

Evaluator::Evaluator(const SmpProtocol& p)
    : p_(&check_evaluation_cap(p)), alice_(alice_view(p)), bob_(bob_view(p)) {}

Dist Evaluator::output_dist(std::size_t ix, std::size_t iy) const {
  const auto& p = *p_;
  if (ix >= p.x().size() || iy >= p.y().size()) throw ValidationError("input index out of range");
  std::vector<double> out(p.z().size(), 0.0);
  const std::size_t nma = p.ma().size(), nmb = p.mb().size();
  for (std::size_t rac = 0; rac < p.rac().size(); ++rac) {
    for (std::size_t rbc = 0; rbc < p.rbc().size(); ++rbc) {
      const double w = p.rac()[rac] * p.rbc()[rbc];
      if (w == 0.0) continue;
      for (std::size_t ma = 0; ma < nma; ++ma) {
        const double pa = alice_.prob(ix, rac, ma);
        if (pa == 0.0) continue;
        for (std::size_t mb = 0; mb < nmb; ++mb) {
          const double pb = bob_.prob(iy, rbc, mb);
          if (pb == 0.0) continue;
          const double mass = w * pa * pb;
          for (std::size_t rc = 0; rc < p.rc().size(); ++rc) {
            out[p.referee(ma, mb, rc, rac, rbc)] += mass * p.rc()[rc];
          }
        }
      }
    }
  }
  return Dist(p.z(), std::move(out));
}

double Evaluator::error_prob(const FunctionTable& f, std::size_t ix, std::size_t iy) const {
  const Dist out = output_dist(ix, iy);
  return 1.0 - out[f.value(ix, iy)];
}

double Evaluator::worst_error(const FunctionTable& f) const {
  check_function(*p_, f);
  double worst = 0.0;
  for (std::size_t ix = 0; ix < p_->x().size(); ++ix) {
    for (std::size_t iy = 0; iy < p_->y().size(); ++iy) {
      worst = std::max(worst, error_prob(f, ix, iy));
    }
  }
  return worst;
}

CostReport Evaluator::costs() const {
  const auto& p = *p_;
  CostReport r;
  r.cc_priv = ceil_log2(p.ma().size()) + ceil_log2(p.mb().size());
  r.cc_sh = r.cc_priv;
  const std::size_t nx = p.x().size(), ny = p.y().size();
  std::vector<double> ca(nx), cb(ny);
  for (std::size_t ix = 0; ix < nx; ++ix) ca[ix] = alice_.expected_length(ix);
  for (std::size_t iy = 0; iy < ny; ++iy) cb[iy] = bob_.expected_length(iy);
  r.cc_av_per_input.resize(nx * ny);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) r.cc_av_per_input[ix * ny + iy] = ca[ix] + cb[iy];
  }
  r.cc_av = *std::max_element(r.cc_av_per_input.begin(), r.cc_av_per_input.end());
  return r;
}

CostReport Evaluator::costs(const FunctionTable& f) const {
  check_function(*p_, f);
  CostReport r = costs();
  const std::size_t nx = p_->x().size(), ny = p_->y().size();
  r.per_input_error.resize(nx * ny);
  r.worst_err = 0.0;
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double e = error_prob(f, ix, iy);
      r.per_input_error[ix * ny + iy] = e;
      r.worst_err = std::max(r.worst_err, e);
    }
  }
  return r;
}

Dist output_dist(const SmpProtocol& p, std::size_t ix, std::size_t iy) {
  return Evaluator(p).output_dist(ix, iy);
}

double error_prob(const SmpProtocol& p, const FunctionTable& f, std::size_t ix, std::size_t iy) {
  return Evaluator(p).error_prob(f, ix, iy);
}

double worst_error(const SmpProtocol& p, const FunctionTable& f) {
  return Evaluator(p).worst_error(f);
}

CostReport costs(const SmpProtocol& p) { return Evaluator(p).costs(); }

CostReport costs(const SmpProtocol& p, const FunctionTable& f) { return Evaluator(p).costs(f); }

JointDist referee_joint(const SmpProtocol& p, const InputPrior& mu, bool include_rc) {
  mu.validate(p);
  const std::size_t nx = p.x().size(), ny = p.y().size();
  const std::size_t nma = p.ma().size(), nmb = p.mb().size();
  const std::size_t nrac = p.rac().size(), nrbc = p.rbc().size();
  const std::uint64_t cells = std::uint64_t{nx} * ny * nma * nmb * nrac * nrbc *
                              (include_rc ? p.rc().size() : 1);
  if (cells > p.cell_cap()) {
    throw CapExceededError("joint table exceeds the cell cap", cells, p.cell_cap());
  }

  const SideView av = alice_view(p), bv = bob_view(p);
  std::vector<RegisterSpec> regs{{reg::kX, p.x()},     {reg::kY, p.y()},
                                 {reg::kMA, p.ma()},   {reg::kMB, p.mb()},
                                 {reg::kRAC, p.rac().alphabet()}, {reg::kRBC, p.rbc().alphabet()}};
  if (include_rc) regs.push_back({reg::kRC, p.rc().alphabet()});
  JointDist j = JointDist::zeros(std::move(regs));

  std::vector<std::size_t> c(include_rc ? 7 : 6);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double pm = mu.prob(ix, iy, ny);
      if (pm == 0.0) continue;
      for (std::size_t rac = 0; rac < nrac; ++rac) {
        for (std::size_t rbc = 0; rbc < nrbc; ++rbc) {
          const double base = pm * p.rac()[rac] * p.rbc()[rbc];
          if (base == 0.0) continue;
          for (std::size_t ma = 0; ma < nma; ++ma) {
            const double pa = av.prob(ix, rac, ma);
            if (pa == 0.0) continue;
            for (std::size_t mb = 0; mb < nmb; ++mb) {
              const double pb = bv.prob(iy, rbc, mb);
              if (pb == 0.0) continue;
              c[0] = ix; c[1] = iy; c[2] = ma; c[3] = mb; c[4] = rac; c[5] = rbc;
              const double mass = base * pa * pb;
              if (!include_rc) {
                j.add(c, mass);
              } else {
                for (std::size_t rc = 0; rc < p.rc().size(); ++rc) {
                  c[6] = rc;
                  j.add(c, mass * p.rc()[rc]);
                }
              }
            }
          }
        }
      }
    }
  }
  j.validate("referee_joint");
  return j;
}

JointDist full_joint(const SmpProtocol& p, const InputPrior& mu) {
  mu.validate(p);
  const std::uint64_t cells = std::uint64_t{p.x().size()} * p.y().size() *
                              p.randomness_cells() * p.ma().size() * p.mb().size() *
                              p.z().size();
  if (cells > p.cell_cap()) {
    throw CapExceededError("full joint exceeds the cell cap", cells, p.cell_cap());
  }
  JointDist j = JointDist::zeros({{reg::kX, p.x()},
                                  {reg::kY, p.y()},
                                  {reg::kRA, p.ra().alphabet()},
                                  {reg::kRB, p.rb().alphabet()},
                                  {reg::kRC, p.rc().alphabet()},
                                  {reg::kRAC, p.rac().alphabet()},
                                  {reg::kRBC, p.rbc().alphabet()},
                                  {reg::kMA, p.ma()},
                                  {reg::kMB, p.mb()},
                                  {reg::kZ, p.z()}});
  std::vector<std::size_t> c(10);
  const std::size_t ny = p.y().size();
  for (std::size_t ix = 0; ix < p.x().size(); ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double pm = mu.prob(ix, iy, ny);
      if (pm == 0.0) continue;
      for (std::size_t ra = 0; ra < p.ra().size(); ++ra) {
        for (std::size_t rb = 0; rb < p.rb().size(); ++rb) {
          for (std::size_t rc = 0; rc < p.rc().size(); ++rc) {
            for (std::size_t rac = 0; rac < p.rac().size(); ++rac) {
              for (std::size_t rbc = 0; rbc < p.rbc().size(); ++rbc) {
                const double mass = pm * p.ra()[ra] * p.rb()[rb] * p.rc()[rc] * p.rac()[rac] *
                                    p.rbc()[rbc];
                if (mass == 0.0) continue;
                const std::uint32_t ma = p.alice(ix, ra, rac);
                const std::uint32_t mb = p.bob(iy, rb, rbc);
                const std::uint32_t z = p.referee(ma, mb, rc, rac, rbc);
                c[0] = ix; c[1] = iy; c[2] = ra; c[3] = rb; c[4] = rc;
                c[5] = rac; c[6] = rbc; c[7] = ma; c[8] = mb; c[9] = z;
                j.add(c, mass);
              }
            }
          }
        }
      }
    }
  }
  j.validate("full_joint");
  return j;
}

void check_function(const SmpProtocol& p, const FunctionTable& f) {
  f.validate();
  if (!(f.x == p.x()) || !(f.y == p.y()) || !(f.z == p.z())) {
    throw ValidationError("function alphabets do not match the protocol");
  }
}

}  // namespace smpleak
