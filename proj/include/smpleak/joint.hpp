#ifndef SMPLEAK_JOINT_HPP
#define SMPLEAK_JOINT_HPP

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smpleak/dist.hpp"

namespace smpleak {

struct RegisterSpec {
  std::string name;
  Alphabet alphabet;
};

// Dense joint distribution over named registers. The table is row-major in
// register order (first register varies slowest). Marginalizing any subset
// yields a valid JointDist over that subset.
class JointDist {
public:
  JointDist(std::vector<RegisterSpec> registers, std::vector<double> probs);

  // Builds a zeroed table to be filled through add(); call finish() to
  // validate before use.
  static JointDist zeros(std::vector<RegisterSpec> registers);

  const std::vector<RegisterSpec>& registers() const { return regs_; }
  std::size_t register_index(std::string_view name) const;       // throws if unknown
  const Alphabet& alphabet_of(std::string_view name) const;

  std::size_t table_size() const { return p_.size(); }
  std::span<const double> probs() const { return p_; }

  // Flat index from per-register coordinates (one per register, in order).
  std::size_t flat_index(std::span<const std::size_t> coords) const;
  void add(std::span<const std::size_t> coords, double mass);
  void validate(const char* what = "JointDist") const;

  // Marginal over the named registers, in the order given.
  JointDist marginal(std::span<const std::string> names) const;
  JointDist marginal(std::initializer_list<std::string> names) const;

  // Shannon entropy (bits) of the marginal on the named registers.
  double entropy_of(std::span<const std::string> names) const;
  double entropy_of(std::initializer_list<std::string> names) const;

private:
  JointDist() = default;

  std::vector<RegisterSpec> regs_;
  std::vector<std::size_t> strides_;
  std::vector<double> p_;

  std::vector<std::size_t> resolve(std::span<const std::string> names) const;
};

// Entropy of a bare probability vector (bits), with 0 log 0 = 0.
double entropy_bits(std::span<const double> p);

// I(A;B) = H(A) + H(B) - H(AB), groups given as register-name sets.
double mutual_info(const JointDist& j, std::span<const std::string> group_a,
                   std::span<const std::string> group_b);
double mutual_info(const JointDist& j, std::initializer_list<std::string> group_a,
                   std::initializer_list<std::string> group_b);

// I(A;B|C) = H(AC) + H(BC) - H(C) - H(ABC); the three groups must be
// pairwise disjoint. C may be empty, which reduces to mutual_info.
double cond_mutual_info(const JointDist& j, std::span<const std::string> group_a,
                        std::span<const std::string> group_b,
                        std::span<const std::string> cond);
double cond_mutual_info(const JointDist& j, std::initializer_list<std::string> group_a,
                        std::initializer_list<std::string> group_b,
                        std::initializer_list<std::string> cond);

}  // namespace smpleak

#endif
