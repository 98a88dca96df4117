#ifndef SMPLEAK_PROTOCOL_HPP
#define SMPLEAK_PROTOCOL_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "smpleak/infotheory.hpp"
#include "smpleak/joint.hpp"
#include "smpleak/lengths.hpp"

namespace smpleak {

enum class Model { kPrivate, kShared, kAverage };

const char* model_name(Model m);
Model model_from_name(const std::string& name);

// Register names used in joint distributions built from protocols.
namespace reg {
inline constexpr const char* kX = "X";
inline constexpr const char* kY = "Y";
inline constexpr const char* kRA = "RA";
inline constexpr const char* kRB = "RB";
inline constexpr const char* kRC = "RC";
inline constexpr const char* kRAC = "RAC";
inline constexpr const char* kRBC = "RBC";
inline constexpr const char* kMA = "MA";
inline constexpr const char* kMB = "MB";
inline constexpr const char* kZ = "Z";
}  // namespace reg

inline constexpr std::uint64_t kDefaultCellCap = 100'000'000;

// One-shot SMP protocol: deterministic maps plus explicit randomness
// registers. Randomness registers are mutually independent and independent
// of the inputs by construction. In the private model the two shared
// registers are degenerate singletons; outside the average model the length
// functions are the uniform ceil(log2 |M|) encodings.
class SmpProtocol {
public:
  struct Parts {
    Model model = Model::kShared;
    Alphabet x, y, z, ma, mb;
    Dist ra, rb, rc, rac, rbc;
    std::vector<std::uint32_t> alice_map;    // [x][ra][rac] -> ma
    std::vector<std::uint32_t> bob_map;      // [y][rb][rbc] -> mb
    std::vector<std::uint32_t> referee_map;  // [ma][mb][rc][rac][rbc] -> z
    LengthFunction len_a, len_b;             // per message symbol
    std::uint64_t cell_cap = kDefaultCellCap;
  };

  explicit SmpProtocol(Parts parts);

  Model model() const { return parts_.model; }
  const Alphabet& x() const { return parts_.x; }
  const Alphabet& y() const { return parts_.y; }
  const Alphabet& z() const { return parts_.z; }
  const Alphabet& ma() const { return parts_.ma; }
  const Alphabet& mb() const { return parts_.mb; }
  const Dist& ra() const { return parts_.ra; }
  const Dist& rb() const { return parts_.rb; }
  const Dist& rc() const { return parts_.rc; }
  const Dist& rac() const { return parts_.rac; }
  const Dist& rbc() const { return parts_.rbc; }
  const LengthFunction& len_a() const { return parts_.len_a; }
  const LengthFunction& len_b() const { return parts_.len_b; }
  std::uint64_t cell_cap() const { return parts_.cell_cap; }
  const Parts& parts() const { return parts_; }

  std::uint32_t alice(std::size_t ix, std::size_t ira, std::size_t irac) const {
    return parts_.alice_map[(ix * parts_.ra.size() + ira) * parts_.rac.size() + irac];
  }
  std::uint32_t bob(std::size_t iy, std::size_t irb, std::size_t irbc) const {
    return parts_.bob_map[(iy * parts_.rb.size() + irb) * parts_.rbc.size() + irbc];
  }
  std::uint32_t referee(std::size_t ima, std::size_t imb, std::size_t irc, std::size_t irac,
                        std::size_t irbc) const {
    return parts_.referee_map[(((ima * parts_.mb.size() + imb) * parts_.rc.size() + irc) *
                                   parts_.rac.size() +
                               irac) *
                                  parts_.rbc.size() +
                              irbc];
  }

  // Product of all randomness register sizes; evaluations refuse to run when
  // it exceeds cell_cap.
  std::uint64_t randomness_cells() const;

private:
  Parts parts_;
};

// Total function f : X x Y -> Z as a dense table.
struct FunctionTable {
  Alphabet x, y, z;
  std::vector<std::uint32_t> table;  // [x][y] -> z index

  std::uint32_t value(std::size_t ix, std::size_t iy) const { return table[ix * y.size() + iy]; }
  void validate() const;
};

// EQ_n on n-bit strings, Z = {0,1}, 1 iff x == y. Enumerable desk scale only.
FunctionTable make_equality(int bits);

// Joint input distribution over X x Y as a flat [x][y] table.
struct InputPrior {
  std::vector<double> p;

  static InputPrior uniform(std::size_t nx, std::size_t ny);
  static InputPrior point_mass(std::size_t nx, std::size_t ny, std::size_t ix, std::size_t iy);
  static InputPrior product(std::span<const double> px, std::span<const double> py);
  double prob(std::size_t ix, std::size_t iy, std::size_t ny) const { return p[ix * ny + iy]; }
  void validate(const SmpProtocol& p_ref) const;
};

// One party's view of the protocol with its private randomness marginalized
// out: P(message | input, shared register), plus the shared register prior.
struct SideView {
  Alphabet input, shared, message;
  std::vector<double> shared_prior;  // |shared|
  std::vector<double> msg_given;     // [input][shared][message]
  const LengthFunction* lengths = nullptr;

  double prob(std::size_t ix, std::size_t ir, std::size_t im) const {
    return msg_given[(ix * shared_prior.size() + ir) * message.size() + im];
  }
  // channel input -> (shared, message); output alphabet is the pair product
  Channel to_channel() const;
  // P(message | input), shared register summed out
  std::vector<double> msg_marginal(std::size_t ix) const;
  double expected_length(std::size_t ix) const;
};

SideView alice_view(const SmpProtocol& p);
SideView bob_view(const SmpProtocol& p);

struct CostReport {
  int cc_priv = 0;                      // bits
  int cc_sh = 0;                        // bits
  std::vector<double> cc_av_per_input;  // [x][y] flat
  double cc_av = 0.0;                   // max over inputs
  double worst_err = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per_input_error;  // [x][y] flat; empty unless f given
};

// Exact evaluator; precomputes the per-side message tables once.
class Evaluator {
public:
  explicit Evaluator(const SmpProtocol& p);

  const SmpProtocol& protocol() const { return *p_; }
  const SideView& alice() const { return alice_; }
  const SideView& bob() const { return bob_; }

  // exact distribution of the referee output on inputs (x, y)
  Dist output_dist(std::size_t ix, std::size_t iy) const;
  double error_prob(const FunctionTable& f, std::size_t ix, std::size_t iy) const;
  double worst_error(const FunctionTable& f) const;

  CostReport costs() const;
  CostReport costs(const FunctionTable& f) const;

private:
  const SmpProtocol* p_;
  SideView alice_;
  SideView bob_;
};

Dist output_dist(const SmpProtocol& p, std::size_t ix, std::size_t iy);
double error_prob(const SmpProtocol& p, const FunctionTable& f, std::size_t ix, std::size_t iy);
double worst_error(const SmpProtocol& p, const FunctionTable& f);
CostReport costs(const SmpProtocol& p);
CostReport costs(const SmpProtocol& p, const FunctionTable& f);

// Exact joint over (X, Y, MA, MB, RAC, RBC) -- optionally RC -- induced by
// the prior mu and the protocol. This is the referee-side object leakage
// quantities are computed from.
JointDist referee_joint(const SmpProtocol& p, const InputPrior& mu, bool include_rc = false);

// Exact joint over all ten registers (X, Y, RA, RB, RC, RAC, RBC, MA, MB, Z).
JointDist full_joint(const SmpProtocol& p, const InputPrior& mu);

// Checks the f table against the protocol's alphabets.
void check_function(const SmpProtocol& p, const FunctionTable& f);

}  // namespace smpleak

#endif
