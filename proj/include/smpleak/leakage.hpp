#ifndef SMPLEAK_LEAKAGE_HPP
#define SMPLEAK_LEAKAGE_HPP

#include "smpleak/protocol.hpp"

namespace smpleak {

struct LeakageReport {
  double il = 0.0;          // bits
  double ic = 0.0;          // bits
  double cross_term = 0.0;  // I(MA; MB | RAC RBC), bits
  InputPrior witness_prior; // maximizing prior (worst-case reports)
};

// IL(p, mu) = I(XY; MA MB | RAC RBC) on the exact induced joint.
double il_dist(const SmpProtocol& p, const InputPrior& mu);

// The three equivalent expressions for IL; they agree because the shared
// registers carry no input information and the referee's private coins are
// independent of the inputs given the messages.
struct IlThreeForms {
  double with_registers = 0.0;   // I(XY; MA MB RC RAC RBC)
  double conditional = 0.0;      // I(XY; MA MB RC | RAC RBC)
  double simplified = 0.0;       // I(XY; MA MB | RAC RBC)
};
IlThreeForms il_three_forms(const SmpProtocol& p, const InputPrior& mu);

// IC(p, mu) = I(X; MA | RAC) + I(Y; MB | RBC).
double ic_dist(const SmpProtocol& p, const InputPrior& mu);

// IL, IC and the cross term at one prior, from a single induced joint.
LeakageReport leakage_dist(const SmpProtocol& p, const InputPrior& mu);

// Worst-case IC via the product-prior reduction: the maximum splits into the
// capacities of the two side channels x -> (RAC, MA) and y -> (RBC, MB),
// solved by Blahut-Arimoto. The witness prior is the product of the two
// optimal priors.
LeakageReport ic_worst(const SmpProtocol& p, double tol = 1e-9);

// Worst-case IL equals worst-case IC; additionally cross-checks
// IL(p, witness) <= IC(p) on the returned witness.
LeakageReport il_worst(const SmpProtocol& p, double tol = 1e-9);

}  // namespace smpleak

#endif
