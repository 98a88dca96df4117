#include "smpleak/alphabet.hpp"

#include <unordered_set>

#include "smpleak/errors.hpp"

namespace smpleak {

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("alphabet must be nonempty");
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ValidationError("duplicate alphabet label: " + l);
  }
}

Alphabet Alphabet::indexed(std::string_view prefix, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return Alphabet(std::move(labels));
}

Alphabet Alphabet::bitstrings(int bits) {
  if (bits < 1 || bits > 20) throw ValidationError("bitstring alphabet width out of range");
  std::vector<std::string> labels;
  labels.reserve(std::size_t{1} << bits);
  for (std::size_t v = 0; v < (std::size_t{1} << bits); ++v) {
    std::string s(static_cast<std::size_t>(bits), '0');
    for (int b = 0; b < bits; ++b) {
      if (v & (std::size_t{1} << (bits - 1 - b))) s[static_cast<std::size_t>(b)] = '1';
    }
    labels.push_back(std::move(s));
  }
  return Alphabet(std::move(labels));
}

Alphabet Alphabet::product(const Alphabet& a, const Alphabet& b) {
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      labels.push_back(a.label(i) + "|" + b.label(j));
    }
  }
  return Alphabet(std::move(labels));
}

std::optional<std::size_t> Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

}  // namespace smpleak
