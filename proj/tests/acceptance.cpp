// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "smpleak/bounds.hpp"
#include "smpleak/cli.hpp"
#include "smpleak/fixtures.hpp"
#include "smpleak/leakage.hpp"
#include "smpleak/transforms.hpp"
#include "support/oracles.hpp"

using namespace smpleak;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed >= budget_seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("runtime budget exceeded");
  }
  std::printf("%s criterion %d: %s (%.2f s%s%s)\n", ok ? "PASS" : "FAIL", number, title.c_str(),
              elapsed, detail.empty() ? "" : "; ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double tv(const Dist& a, const Dist& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace

int main() {
  // 1. Lemma-8 slope and the order-of-magnitude improvement
  criterion(1, "Lemma-8 slope 1.66 sqrt(n) and >= 16x over the 0.1 sqrt(n) reference", 1.0,
            [](std::string& detail) {
              bool ok = true;
              for (double n : {1e6, 1e7, 1e8, 1e10, 1e12}) {
                const double slope = cc_priv_lower_eq(n, 0.01) / std::sqrt(n);
                ok = ok && slope >= 1.66 - 0.01 && slope <= 1.66 + 0.01;
                const double ratio = cc_priv_lower_eq(n, 0.01) / babai_kimmel_reference(n);
                ok = ok && ratio >= 16.0;
                if (n == 1e6) detail = fmt("slope@1e6=%.5f ratio=%.2f", slope, ratio);
              }
              return ok;
            });

  // 2. Theorem identity at 1e-12
  criterion(2, "assembled bound equals the closed-form expression to 1e-12", 1.0,
            [](std::string& detail) {
              const double lg2e = 1.4426950408889634;
              auto g1o = [](double x) { return 2.0 * std::log2(x + 1.0) + 10.0; };
              auto g2o = [&](double x, double y, double z) {
                return 2.0 * std::log2(2.0 * (x + y) / (z * z * lg2e) + 1.0) + 2.0;
              };
              auto g3o = [&](double x) { return 2.0 * (0.5 - x) * (0.5 - x) * lg2e; };
              Rng rng(2026);
              double worst = 0.0;
              for (int i = 0; i < 20; ++i) {
                const double n = std::exp2(6.64 + 10.0 * rng.uniform());  // ~1e2..1e5
                const double eps = 0.4 * rng.uniform();
                const double d1 = (0.5 - eps) * (0.05 + 0.55 * rng.uniform());
                const double d2 = (0.5 - eps - d1) * (0.05 + 0.8 * rng.uniform());
                const double g = g3o(eps + d1 + d2);
                const double direct =
                    d1 * (2.0 * std::sqrt(g) * std::sqrt(n) - g - g2o(n, n, d2) - 10.0) -
                    2.0 * g1o(2.0 * n);
                worst = std::max(worst, std::abs(il_lower_eq_raw(n, eps, d1, d2) - direct));
              }
              detail = fmt("max |diff| = %.3g", worst);
              return worst <= 1e-12;
            });

  // 3. Lemma 3/4 identities and the joint-prior search on 100 random protocols
  criterion(3, "Lemma 3/4 on 100 seeded protocols incl. joint-prior search", 300.0,
            [](std::string& detail) {
              Rng rng(303);
              double worst_identity = 0.0, worst_gap = -1e300;
              bool ok = true;
              for (int i = 0; i < 100; ++i) {
                Rng item = rng.fork();
                const SmpProtocol p = random_protocol(item, {});
                const InputPrior mu = random_prior(item, p);
                const LeakageReport at_mu = leakage_dist(p, mu);
                worst_identity = std::max(
                    worst_identity, std::abs(at_mu.ic - (at_mu.il + at_mu.cross_term)));
                ok = ok && at_mu.il <= at_mu.ic + 1e-9 && at_mu.ic <= 2.0 * at_mu.il + 1e-9;

                const LeakageReport worst = il_worst(p);
                Rng climb(1000 + static_cast<std::uint64_t>(i));
                const double searched = testing::simplex_ascend(
                    [&](const std::vector<double>& prior) {
                      return il_dist(p, InputPrior{prior});
                    },
                    p.x().size() * p.y().size(), climb, 1);
                worst_gap = std::max(worst_gap, searched - worst.il);
                ok = ok && worst.il >= searched - 0.02;
              }
              detail = fmt("max identity residual %.2g, max search-over-capacity gap %.2g",
                           worst_identity, worst_gap);
              return ok && worst_identity <= 1e-9;
            });

  // 4. Compression exactness and expected-length bounds
  criterion(4, "compression is exact and within C + g1(C) (resp. IC + 2 g1(IC))", 300.0,
            [](std::string& detail) {
              bool ok = true;
              Rng rng(404);
              double worst_tv = 0.0;
              for (int i = 0; i < 12; ++i) {
                const Channel ch = random_channel(rng, 2, 4);
                auto [sim, rep] = hjmr_compress(ch);
                for (std::size_t x = 0; x < ch.input().size(); ++x) {
                  ok = ok && rep.tv_distance_per_input[x] == 0.0;
                  ok = ok && rep.expected_length_per_input[x] <= rep.bound + 1e-9;
                }
              }
              for (int i = 0; i < 8; ++i) {
                RandomProtocolOptions opt;
                opt.max_inputs = 3;
                opt.max_messages = 3;
                opt.max_register = 3;
                const SmpProtocol p = random_protocol(rng, opt);
                auto [out, rep] = ic_to_ccav(p);
                worst_tv = std::max(worst_tv, rep.max_tv);
                ok = ok && rep.max_tv <= 1e-12 && rep.cc_av <= rep.bound + 1e-9;
              }
              detail = fmt("worst protocol-compression tv %.2g", worst_tv);
              return ok;
            });

  // 5. Truncation contract on two-valued length fixtures
  criterion(5, "truncation keeps error within eps + delta at (1/delta) CC_av + 4 bits", 60.0,
            [](std::string& detail) {
              const FunctionTable eq1 = make_equality(1);
              bool ok = true;
              double worst_slack = 1e300;
              for (auto nums : {std::array<int, 4>{1, 1, 1, 1}, {4, 4, 4, 4}, {0, 8, 4, 0},
                                {2, 6, 1, 3}}) {
                const SmpProtocol p =
                    two_length_protocol(nums[0], nums[1], nums[2], nums[3]);
                const double eps = worst_error(p, eq1);
                const double cc_av = costs(p).cc_av;
                for (double delta : {0.1, 0.25, 0.5}) {
                  auto [out, rep] = markov_truncate(p, delta);
                  const double err = worst_error(out, eq1);
                  ok = ok && err <= eps + delta + 1e-12;
                  ok = ok && rep.cc_sh_out <= cc_av / delta + 4.0 + 1e-9;
                  worst_slack = std::min(worst_slack, eps + delta - err);
                }
              }
              detail = fmt("min error slack %.3f", worst_slack);
              return ok;
            });

  // 6. Derandomization contracts
  criterion(6, "Newman and Babai-Kimmel derandomization verified exhaustively", 300.0,
            [](std::string& detail) {
              const FunctionTable eq2 = make_equality(2);
              bool ok = true;

              const SmpProtocol shared = shared_hash_eq_protocol(2, 3);
              const double eps_sh = worst_error(shared, eq2);
              NewmanOptions nopt;
              nopt.restarts = 1000;
              auto [priv, nrep] = newman_derandomize(shared, eq2, 0.25, 606, nopt);
              ok = ok && nrep.achieved_error <= eps_sh + 0.25 + 1e-12;
              ok = ok && worst_error(priv, eq2) <= eps_sh + 0.25 + 1e-12;
              ok = ok && costs(priv).cc_priv <=
                             costs(shared).cc_sh + 2 * ceil_log2(nrep.t);

              const SmpProtocol base = private_hash_eq_protocol(2, 3);
              const double eps_bk = worst_error(base, eq2);
              BkOptions bopt;
              bopt.restarts = 1000;
              auto [bk, brep] = bk_derandomize_alice(base, eq2, 0.3, 606, bopt);
              ok = ok && brep.achieved_error <= eps_bk + 0.3 + 1e-12;
              const double c_a = std::log2(static_cast<double>(base.ma().size()));
              ok = ok && bk.alice_message_bits() ==
                             static_cast<int>(std::ceil(static_cast<double>(brep.t) * c_a));
              detail = fmt("newman err %.4f, bk err %.4f", nrep.achieved_error,
                           brep.achieved_error);
              return ok;
            });

  // 7. Qualitative reproduction of the leakage-vs-communication picture
  criterion(7, "curves: leakage below communication, finite quantum crossover", 30.0,
            [](std::string& detail) {
              const QuantumModel model;  // constant mu = 100, scale 1
              const auto rows = bound_curve(model, 0.01, 10'000, 1'000'000'000'000ull, 25);
              bool ok = !rows.empty();
              double prev = -1.0;
              bool positive_seen = false;
              for (const auto& r : rows) {
                ok = ok && r.il_lower >= prev - 1e-9;
                prev = r.il_lower;
                if (r.il_lower > 0.0) {
                  positive_seen = true;
                  if (r.cc_lower > 0.0) ok = ok && r.il_lower < r.cc_lower;
                }
              }
              ok = ok && positive_seen;
              const CrossoverResult cx =
                  crossover(model, 0.01, 10'000, 100'000'000'000'000ull);
              ok = ok && cx.found && cx.qil_at < cx.il_at;
              if (cx.found) {
                detail = fmt("crossover n = %.3g, qil %.1f", static_cast<double>(cx.n),
                             cx.qil_at);
              }
              return ok;
            });

  // 8. Cost chain on uniform-length fixtures
  criterion(8, "CC_av <= CC_sh <= CC_priv on 50 random uniform-length fixtures", 60.0,
            [](std::string& detail) {
              Rng rng(808);
              bool ok = true;
              for (int i = 0; i < 50; ++i) {
                RandomProtocolOptions opt;
                opt.model = i % 3 == 0   ? Model::kPrivate
                            : i % 3 == 1 ? Model::kShared
                                         : Model::kAverage;
                opt.uniform_lengths = true;
                const SmpProtocol p = random_protocol(rng, opt);
                const CostReport c = costs(p);
                ok = ok && c.cc_av <= c.cc_sh + 1e-12 && c.cc_sh <= c.cc_priv;
              }
              detail = "50 fixtures across all three models";
              return ok;
            });

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
