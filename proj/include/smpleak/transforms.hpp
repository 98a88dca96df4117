#ifndef SMPLEAK_TRANSFORMS_HPP
#define SMPLEAK_TRANSFORMS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "smpleak/infotheory.hpp"
#include "smpleak/leakage.hpp"
#include "smpleak/protocol.hpp"
#include "smpleak/rng.hpp"

namespace smpleak {

// ---------------------------------------------------------------------------
// Channel simulation
// ---------------------------------------------------------------------------

// Codeword lengths of the simulator's message set: accepted proposal indices
// carry their Elias-gamma code; the escape word spends the budget of index
// cap+1 followed by a plain fixed-width code of a fresh sample.
int simulator_index_length(std::uint64_t index);
int simulator_escape_length(std::uint64_t rejection_cap, std::size_t output_size);

// One-message average-length exact simulator for a channel. The shared
// randomness is a stream of i.i.d. proposal samples; the sender accepts
// sample v at each trial with probability P_x(v) / (c_x Q(v)) where
// c_x = max_v P_x(v)/Q(v), and transmits the index of the first acceptance.
// After rejection_cap rejections it sends the escape word plus a fresh
// sample. Von Neumann acceptance keeps the residual proportional to the
// target row, so the escape branch preserves exactness at bounded length.
class ChannelSimulator {
public:
  ChannelSimulator(Channel target, std::vector<double> proposal, std::uint64_t rejection_cap);

  const Channel& target() const { return target_; }
  std::span<const double> proposal() const { return proposal_; }
  std::uint64_t rejection_cap() const { return cap_; }

  double accept_prob(std::size_t x) const { return accept_[x]; }   // 1/c_x
  double accept_threshold(std::size_t x, std::size_t v) const;     // P_x(v)/(c_x Q(v))

  // analytic walk of the rejection tree up to the escape fallback
  Dist output_dist(std::size_t x) const;
  double tv_distance(std::size_t x) const;    // vs the target row
  double expected_length(std::size_t x) const;
  double max_expected_length() const;
  int max_length() const;

private:
  Channel target_;
  std::vector<double> proposal_;
  std::uint64_t cap_;
  std::vector<double> accept_;  // per input, 1/c_x
};

struct SimulatorOptions {
  std::uint64_t rejection_cap = std::uint64_t{1} << 16;
  double capacity_tol = 1e-9;
};

struct SimulatorReport {
  std::vector<double> expected_length_per_input;  // bits
  std::vector<double> tv_distance_per_input;
  double capacity = 0.0;  // C of the simulated channel
  double bound = 0.0;     // C + g1(C)
};

// Builds a simulator whose proposal is the capacity-achieving output
// distribution, floor-mixed with the uniform distribution (mix chosen from a
// small deterministic grid to minimize the worst-input expected length), and
// measures it against the compression bound. The bound check is a
// measurement, not an assumption: callers decide what to do with a
// violation.
std::pair<ChannelSimulator, SimulatorReport> hjmr_compress(const Channel& ch,
                                                           const SimulatorOptions& opt = {});

// Dense realization of a (small-cap) simulator: the proposal stream becomes
// the shared register, the acceptance coins and the fallback sampler become
// the sender's private register, and the decoder is a deterministic table.
struct MaterializedSide {
  Dist stream;   // shared register: proposal^K
  Dist coins;    // private register: acceptance coins^K x fallback sampler
  Alphabet msg;
  LengthFunction lengths;
  std::vector<std::uint32_t> map;     // [x][coin][stream] -> msg
  std::vector<std::uint32_t> decode;  // [msg][stream] -> output symbol
};
MaterializedSide materialize_side(const ChannelSimulator& sim);

// One-message protocol over the simulator (Bob degenerate, referee outputs
// the decoded symbol). Used to cross-check the analytic tree against plain
// register enumeration.
SmpProtocol materialize_simulator(const ChannelSimulator& sim);

// ---------------------------------------------------------------------------
// Compression of a shared-randomness protocol into the average-length model
// ---------------------------------------------------------------------------

struct CompressOptions {
  int materialize_cap = 0;        // proposal stream length; 0 = auto (largest feasible)
  double capacity_tol = 1e-9;
  double exactness_tol = 1e-12;
  std::uint64_t table_budget = 4'000'000;  // referee-table ceiling for auto cap
};

struct CompressReport {
  double ic = 0.0;        // IC of the input protocol (capacity method)
  double bound = 0.0;     // IC + 2 g1(IC)
  double cc_av = 0.0;     // measured on the compressed protocol
  double max_tv = 0.0;    // worst per-input output-distribution deviation
  bool exact = false;     // max_tv <= exactness_tol
  bool bound_holds = false;
  int stream_cap_a = 0;
  int stream_cap_b = 0;
};

// Applies the channel simulator to both side channels x -> (RAC, MA) and
// y -> (RBC, MB); the output protocol reproduces the input protocol's output
// distribution on every input pair and is costed by expected length.
std::pair<SmpProtocol, CompressReport> ic_to_ccav(const SmpProtocol& p,
                                                  const CompressOptions& opt = {});

// ---------------------------------------------------------------------------
// Markov truncation: average length -> bounded length
// ---------------------------------------------------------------------------

struct TruncateReport {
  double delta = 0.0;
  double cc_av_in = 0.0;
  int cc_sh_out = 0;
  double cc_sh_bound = 0.0;          // (1/delta) cc_av_in + 4
  bool bound_holds = false;
  bool any_truncation = false;
  std::vector<double> threshold_a;   // per x: c_A(x)/delta
  std::vector<double> threshold_b;   // per y
  double max_abort_prob = 0.0;       // max over inputs of P[some side aborts]
};

// Each party sends its message only when the codeword length is within
// c(x)/delta of its own per-input expected length, and a 1-bit abort flag
// otherwise; the referee answers with a fresh uniform bit on any abort.
// Requires the average model and a Boolean output alphabet.
std::pair<SmpProtocol, TruncateReport> markov_truncate(const SmpProtocol& p, double delta);

// ---------------------------------------------------------------------------
// Derandomization
// ---------------------------------------------------------------------------

struct DerandomizationReport {
  std::uint64_t t = 0;          // sample count
  double achieved_error = 0.0;  // exact worst-case error of the output
  double target_error = 0.0;    // epsilon + delta
  int restarts_used = 0;
};

struct NewmanOptions {
  int restarts = 1000;
  std::optional<std::uint64_t> t_override;
};

// Sample count per side for a total error increase of delta (each side
// budgets delta/2): ceil((log|X| + log|Y|) / (2 (delta/2)^2 log2 e)).
std::uint64_t newman_sample_count(std::size_t x_size, std::size_t y_size, double delta);

// Replaces the two shared registers by verified t-element candidate sets;
// each party picks its index privately and prefixes it to the message.
// Candidate sets are drawn from the registers' own distributions and checked
// by exact error evaluation on every input pair; sets failing the check are
// redrawn up to `restarts` times.
std::pair<SmpProtocol, DerandomizationReport> newman_derandomize(const SmpProtocol& p,
                                                                 const FunctionTable& f,
                                                                 double delta,
                                                                 std::uint64_t seed,
                                                                 const NewmanOptions& opt = {});

// ---------------------------------------------------------------------------
// Babai-Kimmel style derandomization of Alice
// ---------------------------------------------------------------------------

// Deterministic-Alice protocol: on input x Alice sends the fixed
// concatenation of t base-protocol messages; the referee computes the
// empirical acceptance frequency of the base referee over the t components
// and outputs 1 with that probability. Evaluated analytically (the tuple
// message space is declared, not tabulated).
class BkProtocol {
public:
  BkProtocol(SmpProtocol base, std::uint64_t t, std::vector<std::uint32_t> tuples);

  const SmpProtocol& base() const { return base_; }
  std::uint64_t t() const { return t_; }
  std::span<const std::uint32_t> tuple(std::size_t ix) const;
  const std::vector<std::uint32_t>& tuples_flat() const { return tuples_; }

  // Pr_{rc}[base referee outputs 1] for one component pair
  double q_value(std::size_t ima, std::size_t imb) const;
  double qbar(std::size_t ix, std::size_t imb) const;

  Dist output_dist(std::size_t ix, std::size_t iy) const;
  double worst_error(const FunctionTable& f) const;
  int alice_message_bits() const;  // ceil(t log2 |MA|)
  int cc_priv() const;

private:
  SmpProtocol base_;
  std::uint64_t t_;
  std::vector<std::uint32_t> tuples_;  // [x][t]
  std::vector<double> q_;              // [ma][mb]
};

struct BkOptions {
  int restarts = 1000;
  std::optional<std::uint64_t> t_override;
};

// ceil((log|MB| + 2) / (2 delta^2 log2 e))
std::uint64_t bk_sample_count(std::size_t mb_size, double delta);

// For every x, finds t private-coin draws whose empirical referee acceptance
// stays within delta of the true acceptance for every possible Bob message;
// verified exhaustively, redrawn per input up to `restarts` times.
std::pair<BkProtocol, DerandomizationReport> bk_derandomize_alice(const SmpProtocol& p,
                                                                  const FunctionTable& f,
                                                                  double delta,
                                                                  std::uint64_t seed,
                                                                  const BkOptions& opt = {});

}  // namespace smpleak

#endif
