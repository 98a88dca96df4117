#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "smpleak/cli.hpp"
#include "smpleak/errors.hpp"
#include "smpleak/fixtures.hpp"
#include "smpleak/leakage.hpp"

using namespace smpleak;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "smpleak_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_fixture(const std::string& name, const SmpProtocol& p) {
  const auto path = (temp_dir() / name).string();
  write_protocol_file(path, p);
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::vector<std::string>& args, std::string& out, std::string& err) {
  out.clear();
  err.clear();
  return run_cli(args, out, err);
}

}  // namespace

TEST_CASE("bounds sweep output") {
  SUBCASE("single step gives a single row") {
    SweepConfig cfg;
    cfg.n_min = cfg.n_max = 1'000'000;
    cfg.steps = 1;
    const std::string csv = cmd_bounds(cfg);
    CHECK(csv.rfind("n,cc_lower,il_lower,delta1_opt,delta2_opt,qil_upper\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  }
  SUBCASE("cc_lower column matches the formula pointwise") {
    SweepConfig cfg;
    cfg.steps = 7;
    cfg.n_max = 100'000'000;
    const std::string csv = cmd_bounds(cfg);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const double n = std::stod(line.substr(0, c1));
      const double cc = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      CHECK(cc == doctest::Approx(cc_priv_lower_eq(n, cfg.epsilon)).epsilon(1e-9));
    }
  }
  SUBCASE("deterministic byte-for-byte") {
    SweepConfig cfg;
    cfg.steps = 5;
    CHECK(cmd_bounds(cfg) == cmd_bounds(cfg));
    cfg.format = "json";
    CHECK(cmd_bounds(cfg) == cmd_bounds(cfg));
  }
  SUBCASE("il_lower column is nondecreasing on the default sweep") {
    SweepConfig cfg;
    cfg.steps = 9;
    const std::string csv = cmd_bounds(cfg);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    double prev = -1.0;
    while (std::getline(in, line)) {
      std::size_t pos = 0;
      for (int c = 0; c < 2; ++c) pos = line.find(',', pos) + 1;
      const double il = std::stod(line.substr(pos));
      CHECK(il >= prev - 1e-9);
      prev = il;
    }
  }
  SUBCASE("svg output is a self-contained polyline plot") {
    SweepConfig cfg;
    cfg.steps = 5;
    cfg.format = "svg";
    const std::string svg = cmd_bounds(cfg);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  SUBCASE("validation") {
    SweepConfig cfg;
    cfg.epsilon = 0.7;
    CHECK_THROWS_AS(cmd_bounds(cfg), ValidationError);
    cfg.epsilon = 0.01;
    cfg.format = "yaml";
    CHECK_THROWS_AS(cmd_bounds(cfg), ValidationError);
    cfg.format = "csv";
    cfg.n_min = 100;
    cfg.n_max = 10;
    CHECK_THROWS_AS(cmd_bounds(cfg), ValidationError);
  }
}

TEST_CASE("crossover command") {
  SUBCASE("zero-photon model") {
    SweepConfig cfg;
    cfg.model.mu = 0.0;
    cfg.n_max = 100'000'000;
    const Json j = Json::parse(cmd_crossover(cfg));
    CHECK(j.at("crossover_n").is_number());
    CHECK(j.at("qil_at").get<double>() == 0.0);
  }
  SUBCASE("hopeless scale reports null") {
    SweepConfig cfg;
    cfg.model.scale = 1e9;
    const Json j = Json::parse(cmd_crossover(cfg));
    CHECK(j.at("crossover_n").is_null());
  }
  SUBCASE("default model witness is stable and pinned") {
    SweepConfig cfg;
    cfg.n_max = 100'000'000'000'000ull;
    const Json a = Json::parse(cmd_crossover(cfg));
    const Json b = Json::parse(cmd_crossover(cfg));
    CHECK(a == b);
    CHECK(a.at("qil_at").get<double>() < a.at("il_at").get<double>());
    // regression pin for the default configuration
    CHECK(a.at("crossover_n").get<std::uint64_t>() == 206124900ull);
  }
}

TEST_CASE("simulate command") {
  SUBCASE("verbatim equality") {
    SimulateConfig cfg;
    cfg.protocol_path = write_fixture("verbatim.json", verbatim_eq_protocol(2));
    cfg.function_spec = "eq:2";
    const Json j = Json::parse(cmd_simulate(cfg));
    CHECK(j.at("worst_error").get<double>() == 0.0);
    CHECK(j.at("leakage_worst").at("il").get<double>() == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(j.at("lemma3_residual").get<double>() <= 1e-9);
  }
  SUBCASE("constant messages") {
    SimulateConfig cfg;
    cfg.protocol_path = write_fixture("constant.json", constant_message_protocol(2));
    cfg.function_spec = "eq:2";
    const Json j = Json::parse(cmd_simulate(cfg));
    CHECK(j.at("leakage_worst").at("il").get<double>() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(j.at("leakage_worst").at("ic").get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("bundled hash fixture matches the library") {
    const SmpProtocol p = shared_hash_eq_protocol(2, 1);
    SimulateConfig cfg;
    cfg.protocol_path = write_fixture("hash.json", p);
    cfg.function_spec = "eq:2";
    const Json j = Json::parse(cmd_simulate(cfg));
    CHECK(j.at("worst_error").get<double>() ==
          doctest::Approx(worst_error(p, make_equality(2))).epsilon(1e-12));
    CHECK(j.at("leakage_worst").at("ic").get<double>() ==
          doctest::Approx(ic_worst(p).ic).epsilon(1e-9));
    CHECK(j.at("costs").at("cc_priv").get<int>() == 3);
  }
  SUBCASE("distributional leakage with a prior file") {
    const SmpProtocol p = shared_hash_eq_protocol(2, 1);
    SimulateConfig cfg;
    cfg.protocol_path = write_fixture("hash2.json", p);
    cfg.function_spec = "eq:2";
    const auto mu_path = (temp_dir() / "mu.json").string();
    Json mu;
    mu["probs"] = InputPrior::uniform(4, 4).p;
    write_text_file(mu_path, dump_canonical(mu));
    cfg.mu_path = mu_path;
    const Json j = Json::parse(cmd_simulate(cfg));
    CHECK(j.at("leakage_dist").at("il").get<double>() ==
          doctest::Approx(il_dist(p, InputPrior::uniform(4, 4))).epsilon(1e-12));
  }
}

TEST_CASE("transform command") {
  const std::string hash_path = write_fixture("hash_t.json", shared_hash_eq_protocol(2, 3));

  SUBCASE("empty pipeline is a byte-identical round trip") {
    TransformConfig cfg;
    cfg.protocol_path = hash_path;
    cfg.pipeline = "";
    const TransformOutcome out = cmd_transform(cfg);
    CHECK(out.all_bounds_hold);
    CHECK(out.protocol_json == slurp(hash_path));
  }
  SUBCASE("compress stage passes its exactness and cost checks") {
    TransformConfig cfg;
    cfg.protocol_path = write_fixture("hash_small.json", shared_hash_eq_protocol(2, 1));
    cfg.pipeline = "compress";
    const TransformOutcome out = cmd_transform(cfg);
    CHECK(out.all_bounds_hold);
    const Json rep = Json::parse(out.report_json);
    CHECK(rep.at("stages").size() == 1);
    CHECK(rep.at("stages").at(0).at("exact").get<bool>());
    CHECK(rep.at("stages").at(0).at("pass").get<bool>());
  }
  SUBCASE("full pipeline passes every stage check") {
    TransformConfig cfg;
    cfg.protocol_path = write_fixture("padded.json", padded_eq_protocol(2));
    cfg.pipeline = "compress,truncate:0.25,newman:0.25";
    cfg.function_spec = "eq:2";
    cfg.seed = 17;
    cfg.out_path = (temp_dir() / "pipeline_out.json").string();
    const TransformOutcome out = cmd_transform(cfg);
    CHECK(out.all_bounds_hold);
    const Json rep = Json::parse(out.report_json);
    REQUIRE(rep.at("stages").size() == 3);
    for (const auto& st : rep.at("stages")) CHECK(st.at("pass").get<bool>());
    // the emitted protocol is a readable private-coin protocol
    const SmpProtocol final = read_protocol_file(cfg.out_path);
    CHECK(final.model() == Model::kPrivate);
  }
  SUBCASE("stage/model mismatch is a validation error") {
    TransformConfig cfg;
    cfg.protocol_path = hash_path;
    cfg.pipeline = "truncate:0.25";
    CHECK_THROWS_AS(cmd_transform(cfg), ValidationError);
  }
  SUBCASE("bk search failure surfaces as SearchError") {
    TransformConfig cfg;
    cfg.protocol_path = write_fixture("priv.json", private_hash_eq_protocol(2, 3));
    cfg.pipeline = "bk:0.05,1";
    cfg.function_spec = "eq:2";
    CHECK_THROWS_AS(cmd_transform(cfg), SearchError);
  }
  SUBCASE("bk stage emits its own protocol kind, deterministically") {
    TransformConfig cfg;
    cfg.protocol_path = write_fixture("priv2.json", private_hash_eq_protocol(2, 3));
    cfg.pipeline = "bk:0.3";
    cfg.function_spec = "eq:2";
    cfg.seed = 23;
    const TransformOutcome a = cmd_transform(cfg);
    const TransformOutcome b = cmd_transform(cfg);
    CHECK(a.all_bounds_hold);
    CHECK(a.report_json == b.report_json);
    CHECK(a.protocol_json == b.protocol_json);
    const Json j = Json::parse(a.protocol_json);
    CHECK(j.at("kind").get<std::string>() == "bk_deterministic_alice");
    CHECK(j.at("t").get<int>() == 16);
  }
}

TEST_CASE("verify command") {
  SUBCASE("fixed seed is deterministic") {
    VerifyConfig cfg;
    cfg.seed = 5;
    cfg.count = 1;
    const VerifyOutcome a = cmd_verify(cfg);
    const VerifyOutcome b = cmd_verify(cfg);
    CHECK(a.report_json == b.report_json);
    CHECK(a.ok);
  }
  SUBCASE("a batch of random fixtures passes every identity") {
    VerifyConfig cfg;
    cfg.seed = 6;
    cfg.count = 25;
    const VerifyOutcome out = cmd_verify(cfg);
    CHECK(out.ok);
    const Json j = Json::parse(out.report_json);
    CHECK(j.at("identities").at("lemma3_identity").get<double>() <= 1e-9);
    CHECK(j.at("identities").at("chain_ok").get<bool>());
  }
}

TEST_CASE("command line entry point") {
  std::string out, err;

  SUBCASE("bounds to stdout") {
    const int code = run({"bounds", "--steps", "3", "--n-min", "100000", "--n-max",
                          "10000000"},
                         out, err);
    CHECK(code == kExitOk);
    CHECK(out.rfind("n,cc_lower", 0) == 0);
  }
  SUBCASE("bounds to a file") {
    const auto path = (temp_dir() / "sweep.csv").string();
    const int code = run({"bounds", "--steps", "3", "--out", path}, out, err);
    CHECK(code == kExitOk);
    CHECK(out.empty());
    CHECK(slurp(path).rfind("n,cc_lower", 0) == 0);
  }
  SUBCASE("environment variable override") {
    setenv("SMP_STEPS", "4", 1);
    const int code = run({"bounds", "--n-min", "100000", "--n-max", "100000000"}, out, err);
    unsetenv("SMP_STEPS");
    CHECK(code == kExitOk);
    CHECK(std::count(out.begin(), out.end(), '\n') == 5);  // header + 4 rows
  }
  SUBCASE("validation errors exit with code 1") {
    const int code = run({"simulate", "/nonexistent/file.json", "--function", "eq:2"}, out, err);
    CHECK(code == kExitValidation);
    CHECK(!err.empty());
  }
  SUBCASE("tampered protocol file exits with code 1 and a field diagnostic") {
    const auto path = (temp_dir() / "tampered.json").string();
    Json j = protocol_to_json(verbatim_eq_protocol(1));
    j["ra"]["probs"] = std::vector<double>{0.7, 0.7};
    write_text_file(path, dump_canonical(j));
    const int code = run({"simulate", path, "--function", "eq:1"}, out, err);
    CHECK(code == kExitValidation);
    CHECK(err.find("ra") != std::string::npos);
  }
  SUBCASE("search failure exits with code 3") {
    const auto path = write_fixture("priv_cli.json", private_hash_eq_protocol(2, 3));
    const int code = run({"transform", path, "--pipeline", "bk:0.05,1", "--function", "eq:2"},
                         out, err);
    CHECK(code == kExitSearch);
  }
  SUBCASE("transform seed reaches the search and the report") {
    const auto path = write_fixture("hash_seed.json", shared_hash_eq_protocol(2, 3));
    const int code = run({"transform", path, "--pipeline", "newman:0.25", "--function", "eq:2",
                          "--seed", "17"},
                         out, err);
    CHECK(code == kExitOk);
    CHECK(Json::parse(out).at("seed").get<std::uint64_t>() == 17);
  }
  SUBCASE("fixture emission round-trips") {
    const int code = run({"fixture", "two-length"}, out, err);
    CHECK(code == kExitOk);
    const SmpProtocol p = protocol_from_json(parse_json_text(out, "stdout"));
    CHECK(p.model() == Model::kAverage);
  }
  SUBCASE("verify runs end to end") {
    const int code = run({"verify", "--seed", "3", "--count", "2"}, out, err);
    CHECK(code == kExitOk);
    CHECK(Json::parse(out).at("pass").get<bool>());
  }
  SUBCASE("help text") {
    const int code = run({"--help"}, out, err);
    CHECK(code == kExitOk);
    CHECK(out.find("bounds") != std::string::npos);
  }
}
