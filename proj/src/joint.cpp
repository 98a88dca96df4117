#include "smpleak/joint.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "smpleak/errors.hpp"

namespace smpleak {

namespace {

std::vector<std::size_t> compute_strides(const std::vector<RegisterSpec>& regs) {
  std::vector<std::size_t> strides(regs.size());
  std::size_t s = 1;
  for (std::size_t i = regs.size(); i-- > 0;) {
    strides[i] = s;
    s *= regs[i].alphabet.size();
  }
  return strides;
}

std::size_t total_cells(const std::vector<RegisterSpec>& regs) {
  std::size_t n = 1;
  for (const auto& r : regs) n *= r.alphabet.size();
  return n;
}

}  // namespace

JointDist::JointDist(std::vector<RegisterSpec> registers, std::vector<double> probs)
    : regs_(std::move(registers)), strides_(compute_strides(regs_)), p_(std::move(probs)) {
  if (regs_.empty()) throw ValidationError("JointDist needs at least one register");
  std::unordered_set<std::string_view> names;
  for (const auto& r : regs_) {
    if (!names.insert(r.name).second) {
      throw ValidationError("duplicate register name: " + r.name);
    }
  }
  if (p_.size() != total_cells(regs_)) {
    throw ValidationError("JointDist table size does not match register product");
  }
  validate();
}

JointDist JointDist::zeros(std::vector<RegisterSpec> registers) {
  if (registers.empty()) throw ValidationError("JointDist needs at least one register");
  JointDist j;
  j.regs_ = std::move(registers);
  j.strides_ = compute_strides(j.regs_);
  j.p_.assign(total_cells(j.regs_), 0.0);
  return j;
}

std::size_t JointDist::register_index(std::string_view name) const {
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (regs_[i].name == name) return i;
  }
  throw ValidationError("unknown register name: " + std::string(name));
}

const Alphabet& JointDist::alphabet_of(std::string_view name) const {
  return regs_[register_index(name)].alphabet;
}

std::size_t JointDist::flat_index(std::span<const std::size_t> coords) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < regs_.size(); ++i) idx += coords[i] * strides_[i];
  return idx;
}

void JointDist::add(std::span<const std::size_t> coords, double mass) {
  p_[flat_index(coords)] += mass;
}

void JointDist::validate(const char* what) const {
  check_probability_vector(p_, what);
}

std::vector<std::size_t> JointDist::resolve(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  std::unordered_set<std::size_t> seen;
  for (const auto& n : names) {
    std::size_t i = register_index(n);
    if (!seen.insert(i).second) throw ValidationError("repeated register in group: " + n);
    idx.push_back(i);
  }
  return idx;
}

JointDist JointDist::marginal(std::span<const std::string> names) const {
  const auto keep = resolve(names);
  if (keep.empty()) throw ValidationError("marginal needs at least one register");

  std::vector<RegisterSpec> out_regs;
  out_regs.reserve(keep.size());
  for (std::size_t i : keep) out_regs.push_back(regs_[i]);
  const auto out_strides = compute_strides(out_regs);

  std::vector<double> out(total_cells(out_regs), 0.0);
  const std::size_t n_regs = regs_.size();
  std::vector<std::size_t> coord(n_regs, 0);
  // odometer walk over the full table, scattering into the kept coordinates
  for (std::size_t flat = 0; flat < p_.size(); ++flat) {
    std::size_t target = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) target += coord[keep[k]] * out_strides[k];
    out[target] += p_[flat];
    for (std::size_t r = n_regs; r-- > 0;) {
      if (++coord[r] < regs_[r].alphabet.size()) break;
      coord[r] = 0;
    }
  }

  JointDist result = zeros(std::move(out_regs));
  result.p_ = std::move(out);
  return result;
}

JointDist JointDist::marginal(std::initializer_list<std::string> names) const {
  std::vector<std::string> v(names);
  return marginal(std::span<const std::string>(v));
}

double JointDist::entropy_of(std::span<const std::string> names) const {
  return entropy_bits(marginal(names).probs());
}

double JointDist::entropy_of(std::initializer_list<std::string> names) const {
  std::vector<std::string> v(names);
  return entropy_of(std::span<const std::string>(v));
}

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

namespace {

void check_disjoint(std::span<const std::string> a, std::span<const std::string> b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      throw ValidationError("register groups overlap on: " + x);
    }
  }
}

std::vector<std::string> concat(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::string> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double mutual_info(const JointDist& j, std::span<const std::string> group_a,
                   std::span<const std::string> group_b) {
  if (group_a.empty() || group_b.empty()) throw ValidationError("mutual_info groups must be nonempty");
  check_disjoint(group_a, group_b);
  const auto ab = concat(group_a, group_b);
  return j.entropy_of(group_a) + j.entropy_of(group_b) -
         j.entropy_of(std::span<const std::string>(ab));
}

double mutual_info(const JointDist& j, std::initializer_list<std::string> group_a,
                   std::initializer_list<std::string> group_b) {
  std::vector<std::string> a(group_a), b(group_b);
  return mutual_info(j, std::span<const std::string>(a), std::span<const std::string>(b));
}

double cond_mutual_info(const JointDist& j, std::span<const std::string> group_a,
                        std::span<const std::string> group_b,
                        std::span<const std::string> cond) {
  if (cond.empty()) return mutual_info(j, group_a, group_b);
  if (group_a.empty() || group_b.empty()) throw ValidationError("cond_mutual_info groups must be nonempty");
  check_disjoint(group_a, group_b);
  check_disjoint(group_a, cond);
  check_disjoint(group_b, cond);
  const auto ac = concat(group_a, cond);
  const auto bc = concat(group_b, cond);
  const auto abc = concat(std::span<const std::string>(ac), group_b);
  return j.entropy_of(std::span<const std::string>(ac)) +
         j.entropy_of(std::span<const std::string>(bc)) - j.entropy_of(cond) -
         j.entropy_of(std::span<const std::string>(abc));
}

double cond_mutual_info(const JointDist& j, std::initializer_list<std::string> group_a,
                        std::initializer_list<std::string> group_b,
                        std::initializer_list<std::string> cond) {
  std::vector<std::string> a(group_a), b(group_b), c(cond);
  return cond_mutual_info(j, std::span<const std::string>(a), std::span<const std::string>(b),
                          std::span<const std::string>(c));
}

}  // namespace smpleak
