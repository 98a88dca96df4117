#include "smpleak/dist.hpp"

#include <cmath>
#include <string>

#include "smpleak/errors.hpp"

namespace smpleak {

void check_probability_vector(std::span<const double> p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {  // also rejects NaN
      throw ValidationError(std::string(what) + ": negative or NaN probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw ValidationError(std::string(what) + ": probabilities sum to " + std::to_string(sum) +
                          ", not 1 within tolerance");
  }
}

Dist::Dist(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), p_(std::move(probs)) {
  if (p_.size() != alphabet_.size()) {
    throw ValidationError("distribution length does not match alphabet size");
  }
  check_probability_vector(p_, "Dist");
}

Dist Dist::uniform(Alphabet alphabet) {
  std::vector<double> p(alphabet.size(), 1.0 / static_cast<double>(alphabet.size()));
  return Dist(std::move(alphabet), std::move(p));
}

Dist Dist::point_mass(Alphabet alphabet, std::size_t index) {
  if (index >= alphabet.size()) throw ValidationError("point mass index out of range");
  std::vector<double> p(alphabet.size(), 0.0);
  p[index] = 1.0;
  return Dist(std::move(alphabet), std::move(p));
}

}  // namespace smpleak
