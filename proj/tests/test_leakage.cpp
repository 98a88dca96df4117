#include <doctest.h>

#include <cmath>

#include "smpleak/fixtures.hpp"
#include "smpleak/leakage.hpp"
#include "smpleak/rng.hpp"
#include "support/oracles.hpp"

using namespace smpleak;

TEST_CASE("distributional leakage on the bundled protocols") {
  SUBCASE("point mass prior carries no information") {
    const SmpProtocol p = shared_hash_eq_protocol(2, 1);
    const InputPrior mu = InputPrior::point_mass(4, 4, 1, 2);
    CHECK(il_dist(p, mu) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("constant messages leak nothing") {
    const SmpProtocol p = constant_message_protocol(2);
    const InputPrior mu = InputPrior::uniform(4, 4);
    CHECK(il_dist(p, mu) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ic_dist(p, mu) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("verbatim messages leak the full inputs") {
    const SmpProtocol p = verbatim_eq_protocol(2);
    const InputPrior mu = InputPrior::uniform(4, 4);
    CHECK(il_dist(p, mu) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(ic_dist(p, mu) == doctest::Approx(4.0).epsilon(1e-9));
  }
}

TEST_CASE("the three leakage expressions agree") {
  SUBCASE("bundled fixtures at the uniform prior") {
    for (const SmpProtocol& p : {shared_hash_eq_protocol(2, 1), referee_coin_protocol(1),
                                 verbatim_eq_protocol(1), ignores_shared_protocol(1)}) {
      const InputPrior mu = InputPrior::uniform(p.x().size(), p.y().size());
      const IlThreeForms f = il_three_forms(p, mu);
      CHECK(f.with_registers == doctest::Approx(f.conditional).epsilon(1e-9));
      CHECK(f.conditional == doctest::Approx(f.simplified).epsilon(1e-9));
    }
  }
  SUBCASE("random protocols and priors, referee coins in use") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      const SmpProtocol p = random_protocol(rng, {});
      const InputPrior mu = random_prior(rng, p);
      const IlThreeForms f = il_three_forms(p, mu);
      CHECK(std::abs(f.with_registers - f.conditional) <= 1e-9);
      CHECK(std::abs(f.conditional - f.simplified) <= 1e-9);
    }
  }
}

TEST_CASE("IC vs IL identities over random protocol/prior pairs") {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const SmpProtocol p = random_protocol(rng, {});
    const InputPrior mu = random_prior(rng, p);
    const LeakageReport rep = leakage_dist(p, mu);
    // the identity and the two-sided bound, each computed independently
    const double il = il_dist(p, mu);
    const double ic = ic_dist(p, mu);
    CHECK(il == doctest::Approx(rep.il).epsilon(1e-12));
    CHECK(ic == doctest::Approx(rep.ic).epsilon(1e-12));
    CHECK(std::abs(ic - (il + rep.cross_term)) <= 1e-9);
    CHECK(il <= ic + 1e-9);
    CHECK(ic <= 2.0 * il + 1e-9);

    // IC is bounded by the expected average cost
    const CostReport cost = costs(p);
    double e_ccav = 0.0;
    for (std::size_t k = 0; k < cost.cc_av_per_input.size(); ++k) {
      e_ccav += mu.p[k] * cost.cc_av_per_input[k];
    }
    CHECK(ic <= e_ccav + 1e-9);
  }
}

TEST_CASE("worst-case leakage of the bundled protocols") {
  SUBCASE("constant messages") {
    const LeakageReport rep = il_worst(constant_message_protocol(2));
    CHECK(rep.il == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.ic == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("verbatim protocol reaches 2n bits") {
    for (int bits : {1, 2}) {
      const LeakageReport rep = il_worst(verbatim_eq_protocol(bits));
      CHECK(rep.il == doctest::Approx(2.0 * bits).epsilon(1e-7));
      CHECK(rep.ic == rep.il);
    }
  }
}

TEST_CASE("capacity method matches the per-side grid oracle on the hash fixture") {
  const SmpProtocol p = shared_hash_eq_protocol(2, 1);
  const LeakageReport rep = ic_worst(p);

  // independent oracle: step-0.02 grid over each input simplex with local
  // refinement, evaluating the side channels' input-output information
  auto side_best = [&](const SideView& view) {
    const Channel ch = view.to_channel();
    double best = 0.0;
    testing::enumerate_simplex_grid(ch.input().size(), 50, [&](const std::vector<double>& pr) {
      best = std::max(best, ch.mutual_information(pr));
    });
    Rng rng(33);
    const double refined = testing::simplex_ascend(
        [&](const std::vector<double>& pr) { return ch.mutual_information(pr); },
        ch.input().size(), rng, 1);
    return std::max(best, refined);
  };
  const double oracle = side_best(alice_view(p)) + side_best(bob_view(p));
  CHECK(rep.ic >= oracle - 1e-7);    // certified capacity cannot lose to the grid
  CHECK(rep.ic <= oracle + 0.02);    // and the grid comes within its resolution

  // product-prior maximum of IC agrees with the joint-prior maximum of IL
  Rng joint_rng(36);
  const double joint_best = testing::simplex_ascend(
      [&](const std::vector<double>& mu) { return il_dist(p, InputPrior{mu}); },
      p.x().size() * p.y().size(), joint_rng, 2);
  CHECK(std::abs(oracle - joint_best) <= 0.02 + 1e-6);
}

TEST_CASE("worst-case IL equals worst-case IC and dominates the joint-prior search") {
  Rng rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    RandomProtocolOptions opt;
    opt.max_inputs = 3;
    opt.max_register = 3;
    const SmpProtocol p = random_protocol(rng, opt);
    const LeakageReport worst = il_worst(p);
    CHECK(worst.il == worst.ic);
    CHECK(worst.cross_term == doctest::Approx(0.0).epsilon(1e-9));

    const std::size_t dim = p.x().size() * p.y().size();
    Rng climb_rng(100 + static_cast<std::uint64_t>(trial));
    const double searched = testing::simplex_ascend(
        [&](const std::vector<double>& mu) { return il_dist(p, InputPrior{mu}); }, dim,
        climb_rng, 2);
    CHECK(searched <= worst.il + 1e-6);   // maximizing over joints cannot beat it
    CHECK(worst.il <= searched + 0.02);   // and the search gets close
  }
}

TEST_CASE("worst-case leakage on the verbatim fixture dominates sampled priors") {
  Rng rng(35);
  const SmpProtocol p = shared_hash_eq_protocol(2, 2);
  const LeakageReport worst = il_worst(p);
  for (int i = 0; i < 25; ++i) {
    const InputPrior mu = random_prior(rng, p);
    CHECK(ic_dist(p, mu) <= worst.ic + 1e-7);
    CHECK(il_dist(p, mu) <= worst.ic + 1e-7);
  }
}
