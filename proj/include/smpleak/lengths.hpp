#ifndef SMPLEAK_LENGTHS_HPP
#define SMPLEAK_LENGTHS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace smpleak {

// Bit length assigned to each message symbol of an alphabet. Lengths must be
// prefix-free realizable, i.e. satisfy the Kraft inequality sum 2^-l <= 1,
// which in particular forces E[l(M)] >= H(M) for every distribution on M.
class LengthFunction {
public:
  explicit LengthFunction(std::vector<int> lengths);

  // ceil(log2 n) for every symbol (the equal-length encoding)
  static LengthFunction uniform(std::size_t alphabet_size);

  std::size_t size() const { return lengths_.size(); }
  int operator[](std::size_t i) const { return lengths_[i]; }
  std::span<const int> lengths() const { return lengths_; }
  int max_length() const;
  bool is_uniform(std::size_t alphabet_size) const;

  double expected_length(std::span<const double> probs) const;
  double kraft_sum() const;

private:
  std::vector<int> lengths_;
};

// ceil(log2 n), with ceil_log2(1) = 0.
int ceil_log2(std::uint64_t n);

// Elias-gamma codeword length for a positive integer: 2*floor(log2 n) + 1.
int elias_gamma_length(std::uint64_t n);

}  // namespace smpleak

#endif
