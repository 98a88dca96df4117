#include "smpleak/lengths.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "smpleak/errors.hpp"

namespace smpleak {

int ceil_log2(std::uint64_t n) {
  if (n == 0) throw ValidationError("ceil_log2(0) undefined");
  if (n == 1) return 0;
  return std::bit_width(n - 1);
}

int elias_gamma_length(std::uint64_t n) {
  if (n == 0) throw ValidationError("Elias gamma encodes positive integers only");
  return 2 * (std::bit_width(n) - 1) + 1;
}

LengthFunction::LengthFunction(std::vector<int> lengths) : lengths_(std::move(lengths)) {
  if (lengths_.empty()) throw ValidationError("length function must be nonempty");
  for (int l : lengths_) {
    if (l < 0 || l > 62) throw ValidationError("message length out of range");
  }
  if (kraft_sum() > 1.0 + 1e-12) {
    throw ValidationError("length function violates the Kraft inequality");
  }
}

LengthFunction LengthFunction::uniform(std::size_t alphabet_size) {
  if (alphabet_size == 0) throw ValidationError("length function must be nonempty");
  return LengthFunction(std::vector<int>(alphabet_size, ceil_log2(alphabet_size)));
}

int LengthFunction::max_length() const {
  return *std::max_element(lengths_.begin(), lengths_.end());
}

bool LengthFunction::is_uniform(std::size_t alphabet_size) const {
  const int want = ceil_log2(alphabet_size);
  return std::all_of(lengths_.begin(), lengths_.end(), [&](int l) { return l == want; });
}

double LengthFunction::expected_length(std::span<const double> probs) const {
  if (probs.size() != lengths_.size()) {
    throw ValidationError("length/probability size mismatch");
  }
  // a constant's expectation is the constant; skipping the dot product keeps
  // equal-length encodings exact instead of picking up normalization dust
  const auto [lo, hi] = std::minmax_element(lengths_.begin(), lengths_.end());
  if (*lo == *hi) return *lo;
  double e = 0.0;
  for (std::size_t i = 0; i < lengths_.size(); ++i) e += probs[i] * lengths_[i];
  return e;
}

double LengthFunction::kraft_sum() const {
  double s = 0.0;
  for (int l : lengths_) s += std::ldexp(1.0, -l);
  return s;
}

}  // namespace smpleak
