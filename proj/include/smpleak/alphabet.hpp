#ifndef SMPLEAK_ALPHABET_HPP
#define SMPLEAK_ALPHABET_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smpleak {

// Ordered finite set of distinct symbol labels. Index order is canonical and
// stable; all tables elsewhere are indexed against it.
class Alphabet {
public:
  explicit Alphabet(std::vector<std::string> labels);

  // "p0", "p1", ..., "p<n-1>"
  static Alphabet indexed(std::string_view prefix, std::size_t n);
  // all bitstrings of the given width in lexicographic order: "00","01",...
  static Alphabet bitstrings(int bits);
  // pairwise product, labels joined with '|' (left index varies slowest)
  static Alphabet product(const Alphabet& a, const Alphabet& b);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const Alphabet& other) const { return labels_ == other.labels_; }

private:
  std::vector<std::string> labels_;
};

}  // namespace smpleak

#endif
