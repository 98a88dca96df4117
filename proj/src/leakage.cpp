#include "smpleak/leakage.hpp"

#include <stdexcept>
#include <string>

#include "smpleak/errors.hpp"

namespace smpleak {

namespace r = reg;

double il_dist(const SmpProtocol& p, const InputPrior& mu) {
  const JointDist j = referee_joint(p, mu, /*include_rc=*/false);
  return cond_mutual_info(j, {r::kX, r::kY}, {r::kMA, r::kMB}, {r::kRAC, r::kRBC});
}

IlThreeForms il_three_forms(const SmpProtocol& p, const InputPrior& mu) {
  const JointDist j = referee_joint(p, mu, /*include_rc=*/true);
  IlThreeForms f;
  f.with_registers = mutual_info(j, {r::kX, r::kY}, {r::kMA, r::kMB, r::kRC, r::kRAC, r::kRBC});
  f.conditional = cond_mutual_info(j, {r::kX, r::kY}, {r::kMA, r::kMB, r::kRC},
                                   {r::kRAC, r::kRBC});
  f.simplified = cond_mutual_info(j, {r::kX, r::kY}, {r::kMA, r::kMB}, {r::kRAC, r::kRBC});
  return f;
}

double ic_dist(const SmpProtocol& p, const InputPrior& mu) {
  const JointDist j = referee_joint(p, mu, /*include_rc=*/false);
  return cond_mutual_info(j, {r::kX}, {r::kMA}, {r::kRAC}) +
         cond_mutual_info(j, {r::kY}, {r::kMB}, {r::kRBC});
}

LeakageReport leakage_dist(const SmpProtocol& p, const InputPrior& mu) {
  const JointDist j = referee_joint(p, mu, /*include_rc=*/false);
  LeakageReport rep;
  rep.il = cond_mutual_info(j, {r::kX, r::kY}, {r::kMA, r::kMB}, {r::kRAC, r::kRBC});
  rep.ic = cond_mutual_info(j, {r::kX}, {r::kMA}, {r::kRAC}) +
           cond_mutual_info(j, {r::kY}, {r::kMB}, {r::kRBC});
  rep.cross_term = cond_mutual_info(j, {r::kMA}, {r::kMB}, {r::kRAC, r::kRBC});
  rep.witness_prior = mu;
  return rep;
}

LeakageReport ic_worst(const SmpProtocol& p, double tol) {
  const CapacityResult cap_a = capacity(alice_view(p).to_channel(), tol);
  const CapacityResult cap_b = capacity(bob_view(p).to_channel(), tol);
  LeakageReport rep;
  rep.ic = cap_a.capacity + cap_b.capacity;
  rep.il = rep.ic;
  rep.witness_prior = InputPrior::product(cap_a.optimal_prior.probs(),
                                          cap_b.optimal_prior.probs());
  rep.cross_term = leakage_dist(p, rep.witness_prior).cross_term;
  return rep;
}

LeakageReport il_worst(const SmpProtocol& p, double tol) {
  LeakageReport rep = ic_worst(p, tol);
  const double il_at_witness = il_dist(p, rep.witness_prior);
  if (il_at_witness > rep.ic + 1e-6) {
    throw std::logic_error("worst-case cross-check failed: IL at witness " +
                           std::to_string(il_at_witness) + " exceeds IC " +
                           std::to_string(rep.ic));
  }
  return rep;
}

}  // namespace smpleak
