#include "smpleak/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "smpleak/errors.hpp"
#include "smpleak/fixtures.hpp"
#include "smpleak/leakage.hpp"

namespace smpleak {

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json labels_json(const Alphabet& a) { return Json(a.labels()); }

}  // namespace

// ---------------------------------------------------------------------------
// bounds / crossover
// ---------------------------------------------------------------------------

std::string render_bounds_csv(const std::vector<BoundCurveRow>& rows) {
  std::string out = "n,cc_lower,il_lower,delta1_opt,delta2_opt,qil_upper\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    out += ',' + fmt12(r.cc_lower);
    out += ',' + fmt12(r.il_lower);
    out += ',' + fmt12(r.delta1_opt);
    out += ',' + fmt12(r.delta2_opt);
    out += ',' + fmt12(r.qil_upper);
    out += '\n';
  }
  return out;
}

std::string render_bounds_json(const SweepConfig& cfg, const std::vector<BoundCurveRow>& rows) {
  Json j;
  j["schema"] = 1;
  j["epsilon"] = cfg.epsilon;
  j["model"] = Json{{"mu", cfg.model.mu},
                    {"visibility", cfg.model.visibility},
                    {"dark_rate_hz", cfg.model.dark_rate_hz},
                    {"transmissivity", cfg.model.transmissivity},
                    {"scale", cfg.model.scale}};
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"n", r.n},
                       {"cc_lower", r.cc_lower},
                       {"il_lower", r.il_lower},
                       {"delta1_opt", r.delta1_opt},
                       {"delta2_opt", r.delta2_opt},
                       {"qil_upper", r.qil_upper},
                       {"cc_lower_raw", r.cc_lower_raw},
                       {"il_lower_raw", r.il_lower_raw}});
  }
  j["rows"] = std::move(arr);
  return dump_canonical(j);
}

std::string render_bounds_svg(const std::vector<BoundCurveRow>& rows) {
  const double width = 840, height = 520, ml = 70, mr = 20, mt = 20, mb = 50;
  double x_lo = 1e300, x_hi = -1e300, y_hi = 1.0;
  for (const auto& r : rows) {
    const double lx = std::log10(static_cast<double>(r.n));
    x_lo = std::min(x_lo, lx);
    x_hi = std::max(x_hi, lx);
    y_hi = std::max({y_hi, r.cc_lower, r.il_lower, r.qil_upper});
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  auto px = [&](double lx) { return ml + (lx - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  auto py = [&](double v) { return height - mb - v / y_hi * (height - mt - mb); };
  auto polyline = [&](const char* color, auto getter) {
    std::string pts;
    for (const auto& r : rows) {
      pts += fmt12(px(std::log10(static_cast<double>(r.n)))) + "," + fmt12(py(getter(r))) + " ";
    }
    return "  <polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt12(width) + "\" height=\"" +
         fmt12(height) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "  <line x1=\"" + fmt12(ml) + "\" y1=\"" + fmt12(height - mb) + "\" x2=\"" +
         fmt12(width - mr) + "\" y2=\"" + fmt12(height - mb) + "\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"" + fmt12(ml) + "\" y1=\"" + fmt12(mt) + "\" x2=\"" + fmt12(ml) +
         "\" y2=\"" + fmt12(height - mb) + "\" stroke=\"black\"/>\n";
  svg += polyline("#1f77b4", [](const BoundCurveRow& r) { return r.cc_lower; });
  svg += polyline("#d62728", [](const BoundCurveRow& r) { return r.il_lower; });
  svg += polyline("#2ca02c", [](const BoundCurveRow& r) { return r.qil_upper; });
  svg += "  <text x=\"" + fmt12(width / 2) + "\" y=\"" + fmt12(height - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">log10 n (" + fmt12(x_lo) + " .. " +
         fmt12(x_hi) + ")</text>\n";
  svg += "  <text x=\"16\" y=\"" + fmt12(mt + 10) +
         "\" font-size=\"13\">bits (0 .. " + fmt12(y_hi) + ")</text>\n";
  svg += "  <text x=\"" + fmt12(width - mr - 240) + "\" y=\"" + fmt12(mt + 14) +
         "\" font-size=\"13\" fill=\"#1f77b4\">communication lower bound</text>\n";
  svg += "  <text x=\"" + fmt12(width - mr - 240) + "\" y=\"" + fmt12(mt + 32) +
         "\" font-size=\"13\" fill=\"#d62728\">leakage lower bound</text>\n";
  svg += "  <text x=\"" + fmt12(width - mr - 240) + "\" y=\"" + fmt12(mt + 50) +
         "\" font-size=\"13\" fill=\"#2ca02c\">quantum leakage upper bound</text>\n";
  svg += "</svg>\n";
  return svg;
}

namespace {

void check_sweep(const SweepConfig& cfg) {
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 0.5)) {
    throw ValidationError("epsilon must be in [0, 1/2)");
  }
  if (cfg.n_min < 2 || cfg.n_min > cfg.n_max) throw ValidationError("empty n range");
  if (cfg.steps < 1) throw ValidationError("steps must be at least 1");
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "svg") {
    throw ValidationError("format must be csv, json or svg");
  }
}

}  // namespace

std::string cmd_bounds(const SweepConfig& cfg) {
  check_sweep(cfg);
  const auto rows = bound_curve(cfg.model, cfg.epsilon, cfg.n_min, cfg.n_max, cfg.steps);
  if (cfg.format == "json") return render_bounds_json(cfg, rows);
  if (cfg.format == "svg") return render_bounds_svg(rows);
  return render_bounds_csv(rows);
}

std::string cmd_crossover(const SweepConfig& cfg) {
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 0.5)) {
    throw ValidationError("epsilon must be in [0, 1/2)");
  }
  if (cfg.n_min < 2 || cfg.n_min > cfg.n_max) throw ValidationError("empty n range");
  const CrossoverResult r = crossover(cfg.model, cfg.epsilon, cfg.n_min, cfg.n_max);
  Json j;
  j["schema"] = 1;
  j["epsilon"] = cfg.epsilon;
  if (r.found) {
    j["crossover_n"] = r.n;
    j["qil_at"] = r.qil_at;
    j["il_at"] = r.il_at;
  } else {
    j["crossover_n"] = nullptr;
  }
  return dump_canonical(j);
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

FunctionTable parse_function_spec(const std::string& spec) {
  if (spec.rfind("eq:", 0) == 0) {
    const int bits = std::stoi(spec.substr(3));
    return make_equality(bits);
  }
  if (spec.rfind("table:", 0) == 0) {
    const Json j = read_json_file(spec.substr(6));
    auto labels = [&](const char* field) {
      std::vector<std::string> out;
      for (const auto& v : j.at(field)) out.push_back(v.get<std::string>());
      return Alphabet(std::move(out));
    };
    FunctionTable f{labels("x"), labels("y"), labels("z"), {}};
    for (const auto& v : j.at("table")) f.table.push_back(v.get<std::uint32_t>());
    f.validate();
    return f;
  }
  throw ValidationError("function spec must be 'eq:<bits>' or 'table:<path>'");
}

namespace {

InputPrior read_prior_file(const std::string& path, const SmpProtocol& p) {
  const Json j = read_json_file(path);
  const Json& arr = j.is_array() ? j : j.at("probs");
  InputPrior mu;
  for (const auto& v : arr) mu.p.push_back(v.get<double>());
  mu.validate(p);
  return mu;
}

Json cost_report_json(const SmpProtocol& p, const CostReport& c) {
  Json j;
  j["cc_priv"] = c.cc_priv;
  j["cc_sh"] = c.cc_sh;
  j["cc_av"] = c.cc_av;
  j["x_labels"] = labels_json(p.x());
  j["y_labels"] = labels_json(p.y());
  j["cc_av_per_input"] = c.cc_av_per_input;
  if (!c.per_input_error.empty()) {
    j["worst_error"] = c.worst_err;
    j["per_input_error"] = c.per_input_error;
  }
  return j;
}

}  // namespace

std::string cmd_simulate(const SimulateConfig& cfg) {
  SmpProtocol p = [&] {
    SmpProtocol loaded = read_protocol_file(cfg.protocol_path);
    if (cfg.cell_cap != kDefaultCellCap) {
      SmpProtocol::Parts parts = loaded.parts();
      parts.cell_cap = cfg.cell_cap;
      return SmpProtocol(std::move(parts));
    }
    return loaded;
  }();
  const FunctionTable f = parse_function_spec(cfg.function_spec);
  check_function(p, f);

  const Evaluator ev(p);
  const CostReport cost = ev.costs(f);
  const LeakageReport worst = il_worst(p);

  Json j;
  j["schema"] = 1;
  j["model"] = model_name(p.model());
  j["worst_error"] = cost.worst_err;
  j["costs"] = cost_report_json(p, cost);
  j["leakage_worst"] = Json{{"il", worst.il}, {"ic", worst.ic}, {"cross_term", worst.cross_term}};

  const InputPrior at_prior =
      cfg.mu_path.empty() ? worst.witness_prior : read_prior_file(cfg.mu_path, p);
  const LeakageReport dist = leakage_dist(p, at_prior);
  if (!cfg.mu_path.empty()) {
    j["leakage_dist"] = Json{{"il", dist.il}, {"ic", dist.ic}, {"cross_term", dist.cross_term}};
  }
  j["lemma3_residual"] = std::abs(dist.ic - (dist.il + dist.cross_term));
  return dump_canonical(j);
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

namespace {

struct Stage {
  std::string name;
  double delta = 0.0;
  std::optional<std::uint64_t> t;
};

std::vector<Stage> parse_pipeline(const std::string& pipeline) {
  std::vector<Stage> stages;
  std::stringstream ss(pipeline);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    // a bare integer continues the previous bk stage as its sample count
    if (!stages.empty() && stages.back().name == "bk" && !stages.back().t &&
        token.find_first_not_of("0123456789") == std::string::npos) {
      stages.back().t = std::stoull(token);
      continue;
    }
    Stage st;
    const auto colon = token.find(':');
    st.name = token.substr(0, colon);
    if (st.name != "compress" && st.name != "truncate" && st.name != "newman" &&
        st.name != "bk") {
      throw ValidationError("unknown pipeline stage: " + st.name);
    }
    if (st.name != "compress") {
      if (colon == std::string::npos) {
        throw ValidationError("stage '" + st.name + "' needs a delta parameter");
      }
      std::string rest = token.substr(colon + 1);
      const auto second = rest.find(':');
      if (second != std::string::npos) {
        st.t = std::stoull(rest.substr(second + 1));
        rest = rest.substr(0, second);
      }
      st.delta = std::stod(rest);
    }
    stages.push_back(std::move(st));
  }
  return stages;
}

Json bk_to_json(const BkProtocol& bk) {
  Json j;
  j["schema"] = 1;
  j["kind"] = "bk_deterministic_alice";
  j["t"] = bk.t();
  j["tuples"] = bk.tuples_flat();
  j["base"] = protocol_to_json(bk.base());
  return j;
}

}  // namespace

TransformOutcome cmd_transform(const TransformConfig& cfg) {
  SmpProtocol initial = read_protocol_file(cfg.protocol_path);
  std::optional<FunctionTable> f;
  if (!cfg.function_spec.empty()) f = parse_function_spec(cfg.function_spec);

  const auto stages = parse_pipeline(cfg.pipeline);
  std::variant<SmpProtocol, BkProtocol> current = std::move(initial);
  Json stage_reports = Json::array();
  bool all_pass = true;
  Rng seed_stream(cfg.seed);

  auto need_smp = [&](const std::string& stage) -> SmpProtocol& {
    if (!std::holds_alternative<SmpProtocol>(current)) {
      throw ValidationError("stage '" + stage + "' cannot follow a bk stage");
    }
    return std::get<SmpProtocol>(current);
  };
  auto need_f = [&](const std::string& stage) -> const FunctionTable& {
    if (!f) throw ValidationError("stage '" + stage + "' needs --function");
    return *f;
  };

  for (const auto& st : stages) {
    Json rep;
    rep["stage"] = st.name;
    if (st.name == "compress") {
      auto [out, crep] = ic_to_ccav(need_smp(st.name));
      rep["ic"] = crep.ic;
      rep["claimed_cc_av_bound"] = crep.bound;
      rep["measured_cc_av"] = crep.cc_av;
      rep["max_tv"] = crep.max_tv;
      rep["exact"] = crep.exact;
      const bool pass = crep.exact && crep.bound_holds;
      rep["pass"] = pass;
      all_pass = all_pass && pass;
      current = std::move(out);
    } else if (st.name == "truncate") {
      SmpProtocol& in = need_smp(st.name);
      double err_in = -1.0;
      if (f) err_in = worst_error(in, *f);
      auto [out, trep] = markov_truncate(in, st.delta);
      rep["delta"] = st.delta;
      rep["cc_av_in"] = trep.cc_av_in;
      rep["claimed_cc_sh_bound"] = trep.cc_sh_bound;
      rep["measured_cc_sh"] = trep.cc_sh_out;
      rep["max_abort_prob"] = trep.max_abort_prob;
      bool pass = trep.bound_holds;
      if (f) {
        const double err_out = worst_error(out, *f);
        rep["error_in"] = err_in;
        rep["error_out"] = err_out;
        rep["claimed_error_bound"] = err_in + st.delta;
        pass = pass && err_out <= err_in + st.delta + 1e-12;
      }
      rep["pass"] = pass;
      all_pass = all_pass && pass;
      current = std::move(out);
      stage_reports.push_back(std::move(rep));
      continue;
    } else if (st.name == "newman") {
      SmpProtocol& in = need_smp(st.name);
      const FunctionTable& fn = need_f(st.name);
      const int cc_sh_in = costs(in).cc_sh;
      NewmanOptions nopt;
      nopt.t_override = st.t;
      auto [out, nrep] = newman_derandomize(in, fn, st.delta, seed_stream.next_u64(), nopt);
      const int cc_priv_out = costs(out).cc_priv;
      const int overhead = 2 * ceil_log2(nrep.t);
      rep["delta"] = st.delta;
      rep["t"] = nrep.t;
      rep["cc_sh_in"] = cc_sh_in;
      rep["measured_cc_priv"] = cc_priv_out;
      rep["claimed_cc_priv_bound"] = cc_sh_in + overhead;
      rep["achieved_error"] = nrep.achieved_error;
      rep["claimed_error_bound"] = nrep.target_error;
      rep["restarts_used"] = nrep.restarts_used;
      const bool pass = cc_priv_out <= cc_sh_in + overhead &&
                        nrep.achieved_error <= nrep.target_error + 1e-12;
      rep["pass"] = pass;
      all_pass = all_pass && pass;
      current = std::move(out);
    } else {  // bk
      SmpProtocol& in = need_smp(st.name);
      const FunctionTable& fn = need_f(st.name);
      BkOptions bopt;
      bopt.t_override = st.t;
      auto [out, brep] = bk_derandomize_alice(in, fn, st.delta, seed_stream.next_u64(), bopt);
      rep["delta"] = st.delta;
      rep["t"] = brep.t;
      rep["alice_message_bits"] = out.alice_message_bits();
      rep["measured_cc_priv"] = out.cc_priv();
      rep["achieved_error"] = brep.achieved_error;
      rep["claimed_error_bound"] = brep.target_error;
      rep["restarts_used"] = brep.restarts_used;
      const bool pass = brep.achieved_error <= brep.target_error + 1e-12;
      rep["pass"] = pass;
      all_pass = all_pass && pass;
      current = std::move(out);
    }
    stage_reports.push_back(std::move(rep));
  }

  TransformOutcome outcome;
  outcome.all_bounds_hold = all_pass;
  outcome.protocol_json = std::visit(
      [](const auto& pr) -> std::string {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, SmpProtocol>) {
          return protocol_to_string(pr);
        } else {
          return dump_canonical(bk_to_json(pr));
        }
      },
      current);

  Json report;
  report["schema"] = 1;
  report["pipeline"] = cfg.pipeline;
  report["seed"] = cfg.seed;
  report["stages"] = std::move(stage_reports);
  report["all_pass"] = all_pass;
  outcome.report_json = dump_canonical(report);

  if (!cfg.out_path.empty()) write_text_file(cfg.out_path, outcome.protocol_json);
  return outcome;
}

// ---------------------------------------------------------------------------
// fixture
// ---------------------------------------------------------------------------

std::string cmd_fixture(const FixtureConfig& cfg) {
  const auto& n = cfg.name;
  if (n == "verbatim-eq") return protocol_to_string(verbatim_eq_protocol(cfg.bits));
  if (n == "constant") return protocol_to_string(constant_message_protocol(cfg.bits));
  if (n == "referee-coin") return protocol_to_string(referee_coin_protocol(cfg.bits));
  if (n == "shared-hash-eq") {
    return protocol_to_string(shared_hash_eq_protocol(cfg.bits, cfg.hash_bits));
  }
  if (n == "private-hash-eq") {
    return protocol_to_string(private_hash_eq_protocol(cfg.bits, cfg.hash_bits));
  }
  if (n == "padded-eq") return protocol_to_string(padded_eq_protocol(cfg.bits));
  if (n == "two-length") return protocol_to_string(two_length_protocol(1, 1, 1, 1));
  if (n == "ignores-shared") return protocol_to_string(ignores_shared_protocol(cfg.bits));
  throw ValidationError("unknown fixture name: " + n);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

VerifyOutcome cmd_verify(const VerifyConfig& cfg) {
  if (cfg.count < 1) throw ValidationError("count must be at least 1");

  struct Residuals {
    double three_forms = 0.0;
    double lemma3_identity = 0.0;
    double lemma3_lower = 0.0;   // max(0, IL - IC)
    double lemma3_upper = 0.0;   // max(0, IC - 2 IL)
    double ic_vs_e_ccav = 0.0;   // max(0, IC - E_mu[CC_av])
    double ic_dominance = 0.0;   // max(0, IC(mu) - IC_worst)
    double lemma4_witness = 0.0; // max(0, IL(witness) - IC_worst)
    double length_vs_entropy = 0.0;  // max(0, H(M) - E[l(M)])
    bool chain_ok = true;
  } res;

  Rng rng(cfg.seed);
  std::optional<SmpProtocol> fixed;
  if (!cfg.protocol_path.empty()) fixed = read_protocol_file(cfg.protocol_path);

  for (int i = 0; i < cfg.count; ++i) {
    Rng item = rng.fork();
    RandomProtocolOptions opt;
    const SmpProtocol p = fixed ? *fixed : random_protocol(item, opt);
    const InputPrior mu = random_prior(item, p);

    const IlThreeForms forms = il_three_forms(p, mu);
    res.three_forms = std::max({res.three_forms,
                                std::abs(forms.with_registers - forms.conditional),
                                std::abs(forms.conditional - forms.simplified)});

    const LeakageReport at_mu = leakage_dist(p, mu);
    res.lemma3_identity =
        std::max(res.lemma3_identity, std::abs(at_mu.ic - (at_mu.il + at_mu.cross_term)));
    res.lemma3_lower = std::max(res.lemma3_lower, at_mu.il - at_mu.ic);
    res.lemma3_upper = std::max(res.lemma3_upper, at_mu.ic - 2.0 * at_mu.il);

    const CostReport cost = costs(p);
    double e_ccav = 0.0;
    for (std::size_t k = 0; k < cost.cc_av_per_input.size(); ++k) {
      e_ccav += mu.p[k] * cost.cc_av_per_input[k];
    }
    res.ic_vs_e_ccav = std::max(res.ic_vs_e_ccav, at_mu.ic - e_ccav);

    const LeakageReport worst = il_worst(p);
    res.ic_dominance = std::max(res.ic_dominance, at_mu.ic - worst.ic);
    res.lemma4_witness = std::max(res.lemma4_witness, il_dist(p, worst.witness_prior) - worst.ic);

    // E[l(M)] >= H(M) under the mu-induced message distribution
    const SideView va = alice_view(p);
    std::vector<double> pm(p.ma().size(), 0.0);
    const std::size_t ny = p.y().size();
    for (std::size_t ix = 0; ix < p.x().size(); ++ix) {
      double px = 0.0;
      for (std::size_t iy = 0; iy < ny; ++iy) px += mu.prob(ix, iy, ny);
      const auto row = va.msg_marginal(ix);
      for (std::size_t m = 0; m < pm.size(); ++m) pm[m] += px * row[m];
    }
    res.length_vs_entropy = std::max(
        res.length_vs_entropy, entropy_bits(pm) - p.len_a().expected_length(pm));

    if (p.len_a().is_uniform(p.ma().size()) && p.len_b().is_uniform(p.mb().size())) {
      res.chain_ok = res.chain_ok && cost.cc_av <= cost.cc_sh && cost.cc_sh <= cost.cc_priv;
    }
  }

  const double tol = kProbTol;
  const double cap_tol = 1e-7;  // identities that pass through the capacity solver
  const bool pass = res.three_forms <= tol && res.lemma3_identity <= tol &&
                    res.lemma3_lower <= tol && res.lemma3_upper <= tol &&
                    res.ic_vs_e_ccav <= tol && res.ic_dominance <= cap_tol &&
                    res.lemma4_witness <= cap_tol && res.length_vs_entropy <= tol &&
                    res.chain_ok;

  Json j;
  j["schema"] = 1;
  j["seed"] = cfg.seed;
  j["count"] = cfg.count;
  j["identities"] = Json{{"il_three_forms", res.three_forms},
                         {"lemma3_identity", res.lemma3_identity},
                         {"lemma3_lower", std::max(0.0, res.lemma3_lower)},
                         {"lemma3_upper", std::max(0.0, res.lemma3_upper)},
                         {"ic_le_expected_ccav", std::max(0.0, res.ic_vs_e_ccav)},
                         {"ic_dominance", std::max(0.0, res.ic_dominance)},
                         {"lemma4_witness", std::max(0.0, res.lemma4_witness)},
                         {"length_vs_entropy", std::max(0.0, res.length_vs_entropy)},
                         {"chain_ok", res.chain_ok}};
  j["pass"] = pass;

  VerifyOutcome out;
  out.ok = pass;
  out.report_json = dump_canonical(j);
  return out;
}

// ---------------------------------------------------------------------------
// command line front end
// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::string& out, std::string& err) {
  CLI::App app{"SMP protocol leakage toolkit"};
  app.require_subcommand(1);

  SweepConfig sweep;
  std::string out_path;
  std::uint64_t cell_cap = kDefaultCellCap;

  auto add_sweep_options = [&](CLI::App* cmd) {
    cmd->add_option("--epsilon", sweep.epsilon, "worst-case error parameter")
        ->envname("SMP_EPSILON");
    cmd->add_option("--n-min", sweep.n_min, "smallest input length")->envname("SMP_N_MIN");
    cmd->add_option("--n-max", sweep.n_max, "largest input length")->envname("SMP_N_MAX");
    cmd->add_option("--steps", sweep.steps, "number of log-spaced sweep points")
        ->envname("SMP_STEPS");
    cmd->add_option("--mu", sweep.model.mu, "mean photon number of the quantum model")
        ->envname("SMP_MU");
    cmd->add_option("--qil-scale", sweep.model.scale, "scale of the quantum leakage curve")
        ->envname("SMP_QIL_SCALE");
    cmd->add_option("--visibility", sweep.model.visibility, "interference visibility");
    cmd->add_option("--dark-rate", sweep.model.dark_rate_hz, "dark count rate (Hz)");
    cmd->add_option("--transmissivity", sweep.model.transmissivity, "channel transmissivity");
    cmd->add_option("--out", out_path, "output file (default: stdout)")->envname("SMP_OUT");
  };

  CLI::App* bounds_cmd = app.add_subcommand("bounds", "sweep the bound curves over n");
  add_sweep_options(bounds_cmd);
  bounds_cmd->add_option("--format", sweep.format, "csv | json | svg")->envname("SMP_FORMAT");

  CLI::App* cross_cmd =
      app.add_subcommand("crossover", "find the smallest n where quantum leaks less");
  add_sweep_options(cross_cmd);

  SimulateConfig sim_cfg;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "evaluate a protocol file exactly");
  sim_cmd->add_option("protocol", sim_cfg.protocol_path, "protocol JSON file")->required();
  sim_cmd->add_option("--function", sim_cfg.function_spec, "eq:<bits> or table:<path>")
      ->required();
  sim_cmd->add_option("--prior", sim_cfg.mu_path, "input prior JSON file");
  sim_cmd->add_option("--cell-cap", cell_cap, "enumeration cell cap")->envname("SMP_CELL_CAP");
  sim_cmd->add_option("--out", out_path, "output file (default: stdout)")->envname("SMP_OUT");

  TransformConfig tr_cfg;
  std::string report_path;
  CLI::App* tr_cmd = app.add_subcommand("transform", "apply a transformation pipeline");
  tr_cmd->add_option("protocol", tr_cfg.protocol_path, "protocol JSON file")->required();
  tr_cmd->add_option("--pipeline", tr_cfg.pipeline,
                     "comma-separated stages: compress | truncate:d | newman:d | bk:d[,t]")
      ->required();
  tr_cmd->add_option("--function", tr_cfg.function_spec, "eq:<bits> or table:<path>");
  tr_cmd->add_option("--seed", tr_cfg.seed, "search seed")->envname("SMP_SEED");
  tr_cmd->add_option("--out", tr_cfg.out_path, "transformed protocol file")->envname("SMP_OUT");
  tr_cmd->add_option("--report", report_path, "stage report file (default: stdout)");

  VerifyConfig ver_cfg;
  CLI::App* ver_cmd =
      app.add_subcommand("verify", "run the identity suites on random fixtures");
  ver_cmd->add_option("--seed", ver_cfg.seed, "fixture seed")->envname("SMP_SEED");
  ver_cmd->add_option("--count", ver_cfg.count, "number of fixtures");
  ver_cmd->add_option("--protocol", ver_cfg.protocol_path, "run the suite on this protocol");

  FixtureConfig fix_cfg;
  CLI::App* fix_cmd = app.add_subcommand("fixture", "emit a bundled fixture protocol");
  fix_cmd
      ->add_option("name", fix_cfg.name,
                   "verbatim-eq | constant | referee-coin | shared-hash-eq | private-hash-eq | "
                   "padded-eq | two-length | ignores-shared")
      ->required();
  fix_cmd->add_option("--bits", fix_cfg.bits, "input width in bits");
  fix_cmd->add_option("--hash-bits", fix_cfg.hash_bits, "hash bits per side");
  fix_cmd->add_option("--out", out_path, "output file (default: stdout)")->envname("SMP_OUT");

  std::vector<const char*> argv;
  argv.push_back("smpleak");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out = app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err = std::string(e.what()) + "\n";
    return kExitValidation;
  }

  try {
    std::string result;
    int code = kExitOk;
    if (bounds_cmd->parsed()) {
      result = cmd_bounds(sweep);
    } else if (cross_cmd->parsed()) {
      result = cmd_crossover(sweep);
    } else if (sim_cmd->parsed()) {
      sim_cfg.cell_cap = cell_cap;
      result = cmd_simulate(sim_cfg);
    } else if (tr_cmd->parsed()) {
      const TransformOutcome outcome = cmd_transform(tr_cfg);
      result = outcome.report_json;
      if (!report_path.empty()) {
        write_text_file(report_path, outcome.report_json);
        result.clear();
      }
      if (!outcome.all_bounds_hold) code = kExitBoundCheck;
    } else if (ver_cmd->parsed()) {
      const VerifyOutcome outcome = cmd_verify(ver_cfg);
      result = outcome.report_json;
      if (!outcome.ok) code = kExitBoundCheck;
    } else if (fix_cmd->parsed()) {
      result = cmd_fixture(fix_cfg);
    }
    if (!out_path.empty() && (bounds_cmd->parsed() || cross_cmd->parsed() || sim_cmd->parsed() ||
                              fix_cmd->parsed())) {
      write_text_file(out_path, result);
    } else {
      out += result;
    }
    return code;
  } catch (const CapExceededError& e) {
    err = std::string("error: ") + e.what() + "\n";
    return kExitValidation;
  } catch (const SearchError& e) {
    err = std::string("search failure: ") + e.what() + "\n";
    return kExitSearch;
  } catch (const BoundCheckError& e) {
    err = std::string("bound check failure: ") + e.what() + "\n";
    return kExitBoundCheck;
  } catch (const ValidationError& e) {
    err = std::string("error: ") + e.what() + "\n";
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err = std::string("solver failure: ") + e.what() + "\n";
    return kExitValidation;
  }
}

}  // namespace smpleak
