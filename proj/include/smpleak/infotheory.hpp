#ifndef SMPLEAK_INFOTHEORY_HPP
#define SMPLEAK_INFOTHEORY_HPP

#include <vector>

#include "smpleak/dist.hpp"
#include "smpleak/joint.hpp"

namespace smpleak {

// Shannon entropy in bits, 0 log 0 = 0.
double entropy(const Dist& d);

// Input-indexed family of output distributions: one row per input symbol,
// all rows over a common output alphabet.
class Channel {
public:
  Channel(Alphabet input, Alphabet output, std::vector<double> rows_flat);
  static Channel from_rows(Alphabet input, const std::vector<Dist>& rows);

  const Alphabet& input() const { return input_; }
  const Alphabet& output() const { return output_; }
  double prob(std::size_t x, std::size_t m) const { return rows_[x * output_.size() + m]; }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(rows_).subspan(x * output_.size(), output_.size());
  }
  Dist row_dist(std::size_t x) const;

  // Output distribution under an input prior, and I(X;M) at that prior.
  std::vector<double> output_marginal(std::span<const double> prior) const;
  double mutual_information(std::span<const double> prior) const;

private:
  Alphabet input_;
  Alphabet output_;
  std::vector<double> rows_;  // |input| x |output|, row-major
};

struct CapacityResult {
  double capacity = 0.0;   // certified lower end of the bracket, bits
  Dist optimal_prior;
  double lower_gap = 0.0;  // bracket width; true capacity <= capacity + lower_gap
  int iterations = 0;
};

// Blahut-Arimoto fixed point iteration with the standard upper/lower bracket
// as stopping rule. Throws ConvergenceError carrying the last bracket if the
// gap does not close within max_iter.
CapacityResult capacity(const Channel& ch, double tol = 1e-9, int max_iter = 100000);

}  // namespace smpleak

#endif
