#ifndef SMPLEAK_DIST_HPP
#define SMPLEAK_DIST_HPP

#include <span>
#include <vector>

#include "smpleak/alphabet.hpp"

namespace smpleak {

// Tolerance on probability normalization and on all information identities.
inline constexpr double kProbTol = 1e-9;

// Finite probability distribution over an Alphabet. Entries are nonnegative
// and sum to 1 within kProbTol.
class Dist {
public:
  Dist(Alphabet alphabet, std::vector<double> probs);

  static Dist uniform(Alphabet alphabet);
  static Dist point_mass(Alphabet alphabet, std::size_t index);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probs() const { return p_; }

private:
  Alphabet alphabet_;
  std::vector<double> p_;
};

// Shared validation used by Dist, JointDist and Channel rows.
void check_probability_vector(std::span<const double> p, const char* what);

}  // namespace smpleak

#endif
