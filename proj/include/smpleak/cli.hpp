#ifndef SMPLEAK_CLI_HPP
#define SMPLEAK_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "smpleak/bounds.hpp"
#include "smpleak/protocol.hpp"
#include "smpleak/protocol_json.hpp"
#include "smpleak/transforms.hpp"

namespace smpleak {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBoundCheck = 2;
inline constexpr int kExitSearch = 3;

struct SweepConfig {
  double epsilon = 0.01;
  std::uint64_t n_min = 10'000;
  std::uint64_t n_max = 1'000'000'000'000ull;
  int steps = 25;
  QuantumModel model;
  std::string format = "csv";  // csv | json | svg
};

std::string render_bounds_csv(const std::vector<BoundCurveRow>& rows);
std::string render_bounds_json(const SweepConfig& cfg, const std::vector<BoundCurveRow>& rows);
std::string render_bounds_svg(const std::vector<BoundCurveRow>& rows);

// bounds sweep in the configured format
std::string cmd_bounds(const SweepConfig& cfg);

// crossover search; JSON {"crossover_n": n|null, "qil_at": ..., "il_at": ...}
std::string cmd_crossover(const SweepConfig& cfg);

// "eq:<bits>" or "table:<path>"
FunctionTable parse_function_spec(const std::string& spec);

struct SimulateConfig {
  std::string protocol_path;
  std::string function_spec;      // required
  std::string mu_path;            // optional prior file
  std::uint64_t cell_cap = kDefaultCellCap;
};
std::string cmd_simulate(const SimulateConfig& cfg);

struct TransformConfig {
  std::string protocol_path;
  std::string pipeline;       // e.g. "compress,truncate:0.25,newman:0.25"
  std::string function_spec;  // required by truncate/newman/bk stages
  std::uint64_t seed = 1;
  std::string out_path;       // transformed protocol (empty: not written)
};
struct TransformOutcome {
  std::string report_json;
  std::string protocol_json;
  bool all_bounds_hold = true;
};
TransformOutcome cmd_transform(const TransformConfig& cfg);

// Emits one of the bundled fixture protocols as a JSON file.
struct FixtureConfig {
  std::string name;  // verbatim-eq | constant | referee-coin | shared-hash-eq |
                     // private-hash-eq | padded-eq | two-length | ignores-shared
  int bits = 2;
  int hash_bits = 1;
};
std::string cmd_fixture(const FixtureConfig& cfg);

struct VerifyConfig {
  std::uint64_t seed = 1;
  int count = 20;
  std::string protocol_path;  // optional: run the suite on this protocol
};
struct VerifyOutcome {
  std::string report_json;
  bool ok = true;
};
VerifyOutcome cmd_verify(const VerifyConfig& cfg);

// Full command-line entry point (argv without the program name).
int run_cli(const std::vector<std::string>& args, std::string& out, std::string& err);

}  // namespace smpleak

#endif
