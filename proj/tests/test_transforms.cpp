#include <doctest.h>

#include <cmath>

#include "smpleak/bounds.hpp"
#include "smpleak/errors.hpp"
#include "smpleak/fixtures.hpp"
#include "smpleak/transforms.hpp"

using namespace smpleak;

namespace {

double tv(const Dist& a, const Dist& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

Channel identity_channel(std::size_t n) {
  std::vector<double> rows(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) rows[i * n + i] = 1.0;
  return Channel(Alphabet::indexed("x", n), Alphabet::indexed("m", n), std::move(rows));
}

SmpProtocol as_private(SmpProtocol p) {
  SmpProtocol::Parts parts = p.parts();
  parts.model = Model::kPrivate;
  return SmpProtocol(std::move(parts));
}

}  // namespace

TEST_CASE("simulator codeword lengths are prefix-free realizable") {
  CHECK(simulator_index_length(1) == 1);
  CHECK(simulator_index_length(2) == 3);
  CHECK(simulator_index_length(5) == 5);
  // Kraft over indices 1..K plus the escape block stays at or below 1
  for (std::uint64_t cap : {1ull, 2ull, 7ull, 64ull}) {
    double kraft = 0.0;
    for (std::uint64_t i = 1; i <= cap; ++i) kraft += std::ldexp(1.0, -simulator_index_length(i));
    kraft += 8 * std::ldexp(1.0, -simulator_escape_length(cap, 8));
    CHECK(kraft <= 1.0 + 1e-12);
  }
}

TEST_CASE("channel simulation on the bundled channels") {
  SUBCASE("constant channel") {
    const Channel ch(Alphabet::indexed("x", 3), Alphabet::indexed("m", 2),
                     {0.3, 0.7, 0.3, 0.7, 0.3, 0.7});
    auto [sim, rep] = hjmr_compress(ch);
    CHECK(rep.capacity == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.bound == doctest::Approx(10.0).epsilon(1e-7));
    for (double tv_x : rep.tv_distance_per_input) CHECK(tv_x == 0.0);
    for (double len : rep.expected_length_per_input) CHECK(len <= rep.bound);
  }
  SUBCASE("identity channel on two symbols") {
    auto [sim, rep] = hjmr_compress(identity_channel(2));
    CHECK(rep.capacity == doctest::Approx(1.0).epsilon(1e-9));
    for (double tv_x : rep.tv_distance_per_input) CHECK(tv_x == 0.0);
    for (double len : rep.expected_length_per_input) CHECK(len <= 1.0 + g1(1.0) + 1e-9);
  }
  SUBCASE("random channels stay exact and within the bound") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
      const Channel ch = random_channel(rng, 3, 3);
      auto [sim, rep] = hjmr_compress(ch);
      for (std::size_t x = 0; x < ch.input().size(); ++x) {
        CHECK(rep.tv_distance_per_input[x] == 0.0);
        CHECK(rep.expected_length_per_input[x] <= rep.bound + 1e-9);
      }
      CHECK(sim.max_length() == simulator_escape_length(sim.rejection_cap(), 3));
    }
  }
}

TEST_CASE("analytic simulator tree equals dense register enumeration") {
  Rng rng(42);
  for (int trial = 0; trial < 12; ++trial) {
    const Channel ch = random_channel(rng, 2, 3);
    const std::uint64_t cap = 1 + trial % 3;
    double cbits = 0.0;
    auto [sim_big, rep] = hjmr_compress(ch, {cap, 1e-9});
    (void)rep;
    (void)cbits;
    const SmpProtocol dense = materialize_simulator(sim_big);
    const Evaluator ev(dense);
    const CostReport cost = ev.costs();
    for (std::size_t x = 0; x < ch.input().size(); ++x) {
      // output distribution: analytic vs enumerated
      CHECK(tv(ev.output_dist(x, 0), sim_big.output_dist(x)) <= 1e-12);
      // enumerated output matches the target row exactly up to float dust
      CHECK(tv(ev.output_dist(x, 0), ch.row_dist(x)) <= 1e-12);
      // expected length: analytic vs enumerated
      CHECK(cost.cc_av_per_input[x] ==
            doctest::Approx(sim_big.expected_length(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("ic_to_ccav compresses exactly within the claimed cost") {
  SUBCASE("deterministic protocol") {
    auto [out, rep] = ic_to_ccav(verbatim_eq_protocol(1));
    CHECK(rep.exact);
    CHECK(rep.max_tv <= 1e-12);
    CHECK(rep.bound_holds);
    CHECK(out.model() == Model::kAverage);
  }
  SUBCASE("shared-hash fixture") {
    const SmpProtocol p = shared_hash_eq_protocol(2, 1);
    auto [out, rep] = ic_to_ccav(p);
    CHECK(rep.exact);
    CHECK(rep.cc_av <= rep.bound + 1e-9);
    // the compressed protocol preserves the worst-case error exactly
    const FunctionTable eq2 = make_equality(2);
    CHECK(worst_error(out, eq2) == doctest::Approx(worst_error(p, eq2)).epsilon(1e-10));
  }
  SUBCASE("constant messages compress into the pure overhead budget") {
    auto [out, rep] = ic_to_ccav(constant_message_protocol(1));
    CHECK(rep.ic == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(rep.cc_av <= 2.0 * g1(0.0) + 1e-6);
    CHECK(rep.exact);
  }
  SUBCASE("average-model input is rejected") {
    CHECK_THROWS_AS(ic_to_ccav(two_length_protocol(1, 1, 1, 1)), ValidationError);
  }
}

TEST_CASE("markov truncation") {
  const FunctionTable eq1 = make_equality(1);

  SUBCASE("no message over the threshold leaves the protocol unchanged") {
    const SmpProtocol p = two_length_protocol(0, 0, 0, 0);
    const double err_in = worst_error(p, eq1);
    auto [out, rep] = markov_truncate(p, 0.25);
    CHECK_FALSE(rep.any_truncation);
    CHECK(out.model() == Model::kShared);
    CHECK(worst_error(out, eq1) == doctest::Approx(err_in).epsilon(1e-12));
    CHECK(rep.max_abort_prob == 0.0);
  }

  SUBCASE("two-valued lengths across the delta grid") {
    for (auto [nx0, nx1, ny0, ny1] :
         {std::array<int, 4>{1, 1, 1, 1}, {4, 4, 4, 4}, {0, 8, 4, 0}}) {
      const SmpProtocol p = two_length_protocol(nx0, nx1, ny0, ny1);
      const double err_in = worst_error(p, eq1);
      const double cc_av_in = costs(p).cc_av;
      for (double delta : {0.1, 0.25, 0.5}) {
        auto [out, rep] = markov_truncate(p, delta);
        CHECK(worst_error(out, eq1) <= err_in + delta + 1e-12);
        CHECK(rep.cc_sh_out <= (1.0 / delta) * cc_av_in + 4.0 + 1e-9);
        CHECK(rep.bound_holds);
        CHECK(rep.max_abort_prob <= 2.0 * delta + 1e-12);
      }
    }
  }

  SUBCASE("per-input thresholds differ when expectations do") {
    const SmpProtocol p = two_length_protocol(1, 8, 0, 0);
    auto [out, rep] = markov_truncate(p, 0.5);
    // c_A(0) = 2 + 3/32, c_A(1) = 2.75; the long form is cut on x = 0 only
    CHECK(rep.threshold_a[0] == doctest::Approx(4.1875).epsilon(1e-12));
    CHECK(rep.threshold_a[1] == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(rep.any_truncation);
    CHECK(worst_error(out, eq1) <= worst_error(p, eq1) + 0.5 + 1e-12);
    // the long symbols stay in the message alphabet (kept for x = 1)
    CHECK(out.ma().index_of("L1").has_value());
    CHECK(out.ma().index_of("~abort").has_value());
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(markov_truncate(two_length_protocol(1, 1, 1, 1), 0.0), ValidationError);
    CHECK_THROWS_AS(markov_truncate(two_length_protocol(1, 1, 1, 1), 1.0), ValidationError);
    CHECK_THROWS_AS(markov_truncate(verbatim_eq_protocol(1), 0.25), ValidationError);
  }
}

TEST_CASE("newman derandomization") {
  const FunctionTable eq2 = make_equality(2);

  SUBCASE("sample count formula") {
    CHECK(newman_sample_count(4, 4, 0.5) == 23);
    CHECK(newman_sample_count(4, 4, 0.25) == 89);
  }

  SUBCASE("shared randomness that is ignored needs a single sample") {
    const SmpProtocol p = ignores_shared_protocol(2);
    const double err_in = worst_error(p, eq2);
    NewmanOptions opt;
    opt.t_override = 1;
    auto [out, rep] = newman_derandomize(p, eq2, 0.25, 7, opt);
    CHECK(rep.t == 1);
    CHECK(rep.restarts_used == 0);
    CHECK(out.model() == Model::kPrivate);
    CHECK(worst_error(out, eq2) == doctest::Approx(err_in).epsilon(1e-12));
  }

  SUBCASE("hash fixture at delta 0.25") {
    const SmpProtocol p = shared_hash_eq_protocol(2, 3);
    const double eps = worst_error(p, eq2);
    CHECK(eps == doctest::Approx(0.125).epsilon(1e-12));
    auto [out, rep] = newman_derandomize(p, eq2, 0.25, 7);
    CHECK(rep.t == 89);
    CHECK(rep.achieved_error <= rep.target_error + 1e-12);
    // honest re-measurement on the packaged private protocol
    CHECK(worst_error(out, eq2) == doctest::Approx(rep.achieved_error).epsilon(1e-9));
    const int overhead = costs(out).cc_priv - costs(p).cc_sh;
    CHECK(overhead <= 2 * ceil_log2(rep.t));
  }

  SUBCASE("search failure is reported, never silently accepted") {
    // verbatim equality, except the referee deliberately answers wrong on the
    // one input pair indexed by the shared register: any single pinned value
    // has error 1 somewhere, so every t = 1 candidate fails verification
    SmpProtocol::Parts parts = verbatim_eq_protocol(1).parts();
    parts.rac = Dist::uniform(Alphabet::indexed("k", 4));
    parts.alice_map = {0, 0, 0, 0, 1, 1, 1, 1};
    parts.referee_map.assign(2 * 2 * 1 * 4 * 1, 0);
    for (std::size_t ma = 0; ma < 2; ++ma)
      for (std::size_t mb = 0; mb < 2; ++mb)
        for (std::size_t rac = 0; rac < 4; ++rac) {
          const bool flip = (ma * 2 + mb) == rac;
          parts.referee_map[(ma * 2 + mb) * 4 + rac] = (ma == mb) != flip ? 1 : 0;
        }
    const SmpProtocol p(std::move(parts));
    const FunctionTable eq1 = make_equality(1);
    CHECK(worst_error(p, eq1) == doctest::Approx(0.25).epsilon(1e-12));
    NewmanOptions opt;
    opt.t_override = 1;
    opt.restarts = 8;
    try {
      newman_derandomize(p, eq1, 0.2, 7, opt);
      FAIL("expected SearchError");
    } catch (const SearchError& e) {
      CHECK(e.restarts_used == 8);
    }
  }

  SUBCASE("infeasible error budget is rejected") {
    const SmpProtocol p = shared_hash_eq_protocol(2, 1);  // eps = 1/2
    CHECK_THROWS_AS(newman_derandomize(p, eq2, 0.25, 7), ValidationError);
  }
}

TEST_CASE("babai-kimmel derandomization of Alice") {
  const FunctionTable eq2 = make_equality(2);

  SUBCASE("sample count formula") {
    CHECK(bk_sample_count(4, 0.3) == 16);
    CHECK(bk_sample_count(2, 0.3) == 12);
  }

  SUBCASE("deterministic Alice with one sample is the identity") {
    const SmpProtocol p = as_private(verbatim_eq_protocol(2));
    BkOptions opt;
    opt.t_override = 1;
    auto [out, rep] = bk_derandomize_alice(p, eq2, 0.3, 5, opt);
    CHECK(rep.t == 1);
    CHECK(rep.restarts_used == 0);
    const Evaluator ev(p);
    for (std::size_t ix = 0; ix < 4; ++ix) {
      for (std::size_t iy = 0; iy < 4; ++iy) {
        CHECK(tv(out.output_dist(ix, iy), ev.output_dist(ix, iy)) <= 1e-12);
      }
    }
  }

  SUBCASE("uniform-bit Alice concentrates around the true acceptance") {
    const SmpProtocol p = uniform_bit_alice_protocol(2);
    // f(x, y) = parity(y): the protocol errs with probability 1/2 against it,
    // which stays feasible at delta = 0.3 only through the concentration check
    FunctionTable f{p.x(), p.y(), p.z(), {}};
    f.table.resize(16);
    for (std::size_t ix = 0; ix < 4; ++ix) {
      for (std::size_t iy = 0; iy < 4; ++iy) {
        f.table[ix * 4 + iy] = static_cast<std::uint32_t>(std::popcount(iy) & 1);
      }
    }
    const double eps = worst_error(p, f);
    CHECK(eps == doctest::Approx(0.5).epsilon(1e-12));
    // eps + delta < 1/2 fails for this function; verify the guard fires
    CHECK_THROWS_AS(bk_derandomize_alice(p, f, 0.3, 5), ValidationError);

    // against the constant-1 function the base error is 1/2 as well, so
    // exercise concentration directly through a feasible fixture instead
    const SmpProtocol hash = private_hash_eq_protocol(2, 3);
    auto [out, rep] = bk_derandomize_alice(hash, eq2, 0.3, 5);
    CHECK(rep.t == 16);
    for (std::size_t ix = 0; ix < 4; ++ix) {
      for (std::size_t mb = 0; mb < hash.mb().size(); ++mb) {
        double truth = 0.0;
        for (std::size_t ra = 0; ra < hash.ra().size(); ++ra) {
          truth += hash.ra()[ra] * out.q_value(hash.alice(ix, ra, 0), mb);
        }
        CHECK(std::abs(out.qbar(ix, mb) - truth) < 0.3);
      }
    }
  }

  SUBCASE("2-bit equality fixture at delta 0.3") {
    const SmpProtocol p = private_hash_eq_protocol(2, 3);
    const FunctionTable f = make_equality(2);
    const double eps = worst_error(p, f);
    CHECK(eps == doctest::Approx(0.125).epsilon(1e-12));
    auto [out, rep] = bk_derandomize_alice(p, f, 0.3, 11);
    CHECK(rep.achieved_error <= eps + 0.3 + 1e-12);
    CHECK(out.worst_error(f) == doctest::Approx(rep.achieved_error).epsilon(1e-12));
    // message length is t * c_A bits
    const double c_a = std::log2(static_cast<double>(p.ma().size()));
    CHECK(out.alice_message_bits() == static_cast<int>(std::ceil(rep.t * c_a)));
  }

  SUBCASE("impossible concentration target fails loudly") {
    const SmpProtocol p = private_hash_eq_protocol(2, 3);
    BkOptions opt;
    opt.t_override = 1;
    opt.restarts = 50;
    CHECK_THROWS_AS(bk_derandomize_alice(p, make_equality(2), 0.05, 5, opt), SearchError);
  }
}

TEST_CASE("composition: compress, truncate, then derandomize") {
  const SmpProtocol p = padded_eq_protocol(2);
  const FunctionTable eq2 = make_equality(2);
  const double eps0 = worst_error(p, eq2);
  const double ic0 = ic_worst(p).ic;

  auto [avg, crep] = ic_to_ccav(p);
  REQUIRE(crep.exact);
  CHECK(crep.cc_av <= ic0 + 2.0 * g1(ic0) + 1e-9);
  CHECK(worst_error(avg, eq2) == doctest::Approx(eps0).epsilon(1e-10));

  const double delta = 0.25;
  auto [sh, trep] = markov_truncate(avg, delta);
  CHECK(trep.cc_sh_out <= crep.cc_av / delta + 4.0 + 1e-9);
  const double eps1 = worst_error(sh, eq2);
  CHECK(eps1 <= eps0 + delta + 1e-12);

  auto [priv, nrep] = newman_derandomize(sh, eq2, delta, 17);
  const double eps2 = worst_error(priv, eq2);
  CHECK(eps2 <= eps1 + delta + 1e-9);
  CHECK(priv.model() == Model::kPrivate);

  // the whole chain against the formula assembled from the measured IC
  const double cc_priv_final = costs(priv).cc_priv;
  const double chain_bound = (ic0 + 2.0 * g1(ic0)) / delta + 4.0 +
                             2.0 * ceil_log2(nrep.t);
  CHECK(cc_priv_final <= chain_bound + 1e-9);
  CHECK(eps2 <= eps0 + 2.0 * delta + 1e-9);
}
