#include "smpleak/fixtures.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <string>

#include "smpleak/errors.hpp"

namespace smpleak {

namespace {

Dist singleton() { return Dist::uniform(Alphabet({"-"})); }

// <a, x> over GF(2), inputs as bit-indices
std::uint32_t dot2(std::size_t a, std::size_t x) {
  return static_cast<std::uint32_t>(std::popcount(a & x) & 1);
}

// alphabet of k-tuples of n-bit seeds, index = base-2^n digits
Alphabet seed_tuples(int bits, int k) {
  const std::size_t n = std::size_t{1} << bits;
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= n;
  std::vector<std::string> labels;
  labels.reserve(total);
  const Alphabet base = Alphabet::bitstrings(bits);
  for (std::size_t v = 0; v < total; ++v) {
    std::string s;
    std::size_t rest = v;
    for (int i = k - 1; i >= 0; --i) {
      std::size_t digit = rest % n;
      rest /= n;
      s = base.label(digit) + (i == k - 1 ? s : "," + s);
    }
    labels.push_back(std::move(s));
  }
  return Alphabet(std::move(labels));
}

std::size_t seed_digit(std::size_t tuple, int i, int k, std::size_t n) {
  for (int j = k - 1; j > i; --j) tuple /= n;
  return tuple % n;
}

SmpProtocol::Parts blank_parts(Model model, Alphabet x, Alphabet y, Alphabet z, Alphabet ma,
                               Alphabet mb) {
  SmpProtocol::Parts parts{model,
                           std::move(x),
                           std::move(y),
                           std::move(z),
                           std::move(ma),
                           std::move(mb),
                           singleton(),
                           singleton(),
                           singleton(),
                           singleton(),
                           singleton(),
                           {},
                           {},
                           {},
                           LengthFunction::uniform(1),
                           LengthFunction::uniform(1),
                           kDefaultCellCap};
  parts.len_a = LengthFunction::uniform(parts.ma.size());
  parts.len_b = LengthFunction::uniform(parts.mb.size());
  return parts;
}

void fill_maps(SmpProtocol::Parts& p,
               const std::function<std::uint32_t(std::size_t, std::size_t, std::size_t)>& alice,
               const std::function<std::uint32_t(std::size_t, std::size_t, std::size_t)>& bob,
               const std::function<std::uint32_t(std::size_t, std::size_t, std::size_t,
                                                 std::size_t, std::size_t)>& referee) {
  p.alice_map.resize(p.x.size() * p.ra.size() * p.rac.size());
  for (std::size_t ix = 0; ix < p.x.size(); ++ix)
    for (std::size_t a = 0; a < p.ra.size(); ++a)
      for (std::size_t r = 0; r < p.rac.size(); ++r)
        p.alice_map[(ix * p.ra.size() + a) * p.rac.size() + r] = alice(ix, a, r);
  p.bob_map.resize(p.y.size() * p.rb.size() * p.rbc.size());
  for (std::size_t iy = 0; iy < p.y.size(); ++iy)
    for (std::size_t b = 0; b < p.rb.size(); ++b)
      for (std::size_t r = 0; r < p.rbc.size(); ++r)
        p.bob_map[(iy * p.rb.size() + b) * p.rbc.size() + r] = bob(iy, b, r);
  p.referee_map.resize(p.ma.size() * p.mb.size() * p.rc.size() * p.rac.size() * p.rbc.size());
  for (std::size_t ma = 0; ma < p.ma.size(); ++ma)
    for (std::size_t mb = 0; mb < p.mb.size(); ++mb)
      for (std::size_t rc = 0; rc < p.rc.size(); ++rc)
        for (std::size_t rac = 0; rac < p.rac.size(); ++rac)
          for (std::size_t rbc = 0; rbc < p.rbc.size(); ++rbc)
            p.referee_map[(((ma * p.mb.size() + mb) * p.rc.size() + rc) * p.rac.size() + rac) *
                              p.rbc.size() +
                          rbc] = referee(ma, mb, rc, rac, rbc);
}

}  // namespace

SmpProtocol verbatim_eq_protocol(int bits) {
  const Alphabet in = Alphabet::bitstrings(bits);
  auto parts = blank_parts(Model::kShared, in, in, Alphabet({"0", "1"}), in, in);
  fill_maps(
      parts, [](std::size_t ix, std::size_t, std::size_t) { return static_cast<std::uint32_t>(ix); },
      [](std::size_t iy, std::size_t, std::size_t) { return static_cast<std::uint32_t>(iy); },
      [](std::size_t ma, std::size_t mb, std::size_t, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>(ma == mb ? 1 : 0);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol constant_message_protocol(int bits) {
  const Alphabet in = Alphabet::bitstrings(bits);
  auto parts = blank_parts(Model::kShared, in, in, Alphabet({"0", "1"}), Alphabet({"m"}),
                           Alphabet({"m"}));
  fill_maps(
      parts, [](std::size_t, std::size_t, std::size_t) { return 0u; },
      [](std::size_t, std::size_t, std::size_t) { return 0u; },
      [](std::size_t, std::size_t, std::size_t, std::size_t, std::size_t) { return 0u; });
  return SmpProtocol(std::move(parts));
}

SmpProtocol referee_coin_protocol(int bits) {
  const Alphabet in = Alphabet::bitstrings(bits);
  auto parts = blank_parts(Model::kShared, in, in, Alphabet({"0", "1"}), Alphabet({"m"}),
                           Alphabet({"m"}));
  parts.rc = Dist::uniform(Alphabet({"h", "t"}));
  fill_maps(
      parts, [](std::size_t, std::size_t, std::size_t) { return 0u; },
      [](std::size_t, std::size_t, std::size_t) { return 0u; },
      [](std::size_t, std::size_t, std::size_t rc, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>(rc);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol shared_hash_eq_protocol(int bits, int hash_bits) {
  if (bits < 1 || bits > 5 || hash_bits < 1 || hash_bits > 4) {
    throw ValidationError("shared_hash_eq fixture sizes out of desk range");
  }
  const int k = hash_bits;
  const std::size_t n = std::size_t{1} << bits;
  const Alphabet in = Alphabet::bitstrings(bits);
  auto parts = blank_parts(Model::kShared, in, in, Alphabet({"0", "1"}),
                           Alphabet::bitstrings(k), in);
  parts.rac = Dist::uniform(seed_tuples(bits, k));
  parts.rbc = Dist::uniform(in);  // Bob's one-time pad
  fill_maps(
      parts,
      [=](std::size_t ix, std::size_t, std::size_t rac) {
        std::uint32_t u = 0;
        for (int i = 0; i < k; ++i) {
          u = (u << 1) | dot2(seed_digit(rac, i, k, n), ix);
        }
        return u;
      },
      [](std::size_t iy, std::size_t, std::size_t rbc) {
        return static_cast<std::uint32_t>(iy ^ rbc);
      },
      [=](std::size_t ma, std::size_t mb, std::size_t, std::size_t rac, std::size_t rbc) {
        const std::size_t y = mb ^ rbc;
        std::uint32_t u = 0;
        for (int i = 0; i < k; ++i) {
          u = (u << 1) | dot2(seed_digit(rac, i, k, n), y);
        }
        return static_cast<std::uint32_t>(u == ma ? 1 : 0);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol private_hash_eq_protocol(int bits, int hash_bits) {
  if (bits < 1 || bits > 3 || hash_bits < 1 || hash_bits > 4) {
    throw ValidationError("private_hash_eq fixture sizes out of desk range");
  }
  const int k = hash_bits;
  const std::size_t n = std::size_t{1} << bits;
  const Alphabet in = Alphabet::bitstrings(bits);
  const Alphabet seeds = seed_tuples(bits, k);
  const Alphabet ma = Alphabet::product(seeds, Alphabet::bitstrings(k));
  const std::size_t hash_space = std::size_t{1} << k;
  auto parts = blank_parts(Model::kPrivate, in, in, Alphabet({"0", "1"}), ma, in);
  parts.ra = Dist::uniform(seeds);
  fill_maps(
      parts,
      [=](std::size_t ix, std::size_t ra, std::size_t) {
        std::uint32_t u = 0;
        for (int i = 0; i < k; ++i) u = (u << 1) | dot2(seed_digit(ra, i, k, n), ix);
        return static_cast<std::uint32_t>(ra * hash_space + u);
      },
      [](std::size_t iy, std::size_t, std::size_t) { return static_cast<std::uint32_t>(iy); },
      [=](std::size_t ma_i, std::size_t mb, std::size_t, std::size_t, std::size_t) {
        const std::size_t seed = ma_i / hash_space;
        const std::size_t u = ma_i % hash_space;
        std::uint32_t v = 0;
        for (int i = 0; i < k; ++i) v = (v << 1) | dot2(seed_digit(seed, i, k, n), mb);
        return static_cast<std::uint32_t>(v == u ? 1 : 0);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol two_length_protocol(int long_num_x0, int long_num_x1, int long_num_y0,
                                int long_num_y1) {
  for (int v : {long_num_x0, long_num_x1, long_num_y0, long_num_y1}) {
    if (v < 0 || v > 32) throw ValidationError("long-message numerator must be in [0, 32]");
  }
  const Alphabet in = Alphabet::bitstrings(1);
  const Alphabet msg({"s0", "s1", "L0", "L1"});  // short/long variants carrying the input bit
  auto parts = blank_parts(Model::kAverage, in, in, Alphabet({"0", "1"}), msg, msg);
  parts.ra = Dist::uniform(Alphabet::indexed("r", 32));
  parts.rb = Dist::uniform(Alphabet::indexed("r", 32));
  parts.len_a = LengthFunction({2, 2, 5, 5});
  parts.len_b = LengthFunction({2, 2, 5, 5});
  const int long_x[2] = {long_num_x0, long_num_x1};
  const int long_y[2] = {long_num_y0, long_num_y1};
  fill_maps(
      parts,
      [&](std::size_t ix, std::size_t ra, std::size_t) {
        const bool go_long = static_cast<int>(ra) < long_x[ix];
        return static_cast<std::uint32_t>((go_long ? 2 : 0) + ix);
      },
      [&](std::size_t iy, std::size_t rb, std::size_t) {
        const bool go_long = static_cast<int>(rb) < long_y[iy];
        return static_cast<std::uint32_t>((go_long ? 2 : 0) + iy);
      },
      [](std::size_t ma, std::size_t mb, std::size_t, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>((ma & 1) == (mb & 1) ? 1 : 0);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol padded_eq_protocol(int bits) {
  const Alphabet in = Alphabet::bitstrings(bits);
  auto parts = blank_parts(Model::kShared, in, in, Alphabet({"0", "1"}), in, in);
  parts.rac = Dist::uniform(in);
  parts.rbc = Dist::uniform(in);
  fill_maps(
      parts,
      [](std::size_t ix, std::size_t, std::size_t rac) {
        return static_cast<std::uint32_t>(ix ^ rac);
      },
      [](std::size_t iy, std::size_t, std::size_t rbc) {
        return static_cast<std::uint32_t>(iy ^ rbc);
      },
      [](std::size_t ma, std::size_t mb, std::size_t, std::size_t rac, std::size_t rbc) {
        return static_cast<std::uint32_t>((ma ^ rac) == (mb ^ rbc) ? 1 : 0);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol ignores_shared_protocol(int bits) {
  const Alphabet in = Alphabet::bitstrings(bits);
  auto parts = blank_parts(Model::kShared, in, in, Alphabet({"0", "1"}), in, in);
  parts.rac = Dist::uniform(Alphabet::indexed("s", 2));
  parts.rbc = Dist::uniform(Alphabet::indexed("s", 2));
  fill_maps(
      parts, [](std::size_t ix, std::size_t, std::size_t) { return static_cast<std::uint32_t>(ix); },
      [](std::size_t iy, std::size_t, std::size_t) { return static_cast<std::uint32_t>(iy); },
      [](std::size_t ma, std::size_t mb, std::size_t, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>(ma == mb ? 1 : 0);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol uniform_bit_alice_protocol(int bits) {
  const Alphabet in = Alphabet::bitstrings(bits);
  auto parts = blank_parts(Model::kPrivate, in, in, Alphabet({"0", "1"}),
                           Alphabet::bitstrings(1), in);
  parts.ra = Dist::uniform(Alphabet({"h", "t"}));
  fill_maps(
      parts,
      [](std::size_t, std::size_t ra, std::size_t) { return static_cast<std::uint32_t>(ra); },
      [](std::size_t iy, std::size_t, std::size_t) { return static_cast<std::uint32_t>(iy); },
      [](std::size_t ma, std::size_t mb, std::size_t, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>(ma == (std::popcount(mb) & 1u) ? 1 : 0);
      });
  return SmpProtocol(std::move(parts));
}

SmpProtocol random_protocol(Rng& rng, const RandomProtocolOptions& opt) {
  auto size_between = [&](std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lo),
                                                static_cast<std::int64_t>(hi)));
  };
  const std::size_t nx = size_between(opt.min_inputs, opt.max_inputs);
  const std::size_t ny = size_between(opt.min_inputs, opt.max_inputs);
  const std::size_t nma = size_between(opt.min_messages, opt.max_messages);
  const std::size_t nmb = size_between(opt.min_messages, opt.max_messages);
  const bool shared_regs = opt.model != Model::kPrivate;

  auto rand_dist = [&](const char* prefix, std::size_t max_n) {
    const std::size_t n = size_between(1, max_n);
    return Dist(Alphabet::indexed(prefix, n), rng.simplex_point(n));
  };

  SmpProtocol::Parts parts = blank_parts(opt.model, Alphabet::indexed("x", nx),
                                         Alphabet::indexed("y", ny), Alphabet({"0", "1"}),
                                         Alphabet::indexed("a", nma), Alphabet::indexed("b", nmb));
  parts.ra = rand_dist("ra", opt.max_register);
  parts.rb = rand_dist("rb", opt.max_register);
  parts.rc = rand_dist("rc", opt.max_register);
  if (shared_regs) {
    parts.rac = rand_dist("rac", opt.max_register);
    parts.rbc = rand_dist("rbc", opt.max_register);
  }
  if (opt.model == Model::kAverage && !opt.uniform_lengths) {
    auto rand_lengths = [&](std::size_t n) {
      for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<int> l(n);
        double kraft = 0.0;
        for (auto& v : l) {
          v = static_cast<int>(rng.between(1, 5));
          kraft += std::ldexp(1.0, -v);
        }
        if (kraft <= 1.0) return LengthFunction(std::move(l));
      }
      return LengthFunction::uniform(n);
    };
    parts.len_a = rand_lengths(nma);
    parts.len_b = rand_lengths(nmb);
  }
  fill_maps(
      parts,
      [&](std::size_t, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>(rng.index(nma));
      },
      [&](std::size_t, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>(rng.index(nmb));
      },
      [&](std::size_t, std::size_t, std::size_t, std::size_t, std::size_t) {
        return static_cast<std::uint32_t>(rng.index(parts.z.size()));
      });
  return SmpProtocol(std::move(parts));
}

InputPrior random_prior(Rng& rng, const SmpProtocol& p) {
  return InputPrior{rng.simplex_point(p.x().size() * p.y().size())};
}

Channel random_channel(Rng& rng, std::size_t min_size, std::size_t max_size) {
  const auto nin = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(min_size),
                                                        static_cast<std::int64_t>(max_size)));
  const auto nout = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(min_size),
                                                         static_cast<std::int64_t>(max_size)));
  std::vector<double> rows;
  rows.reserve(nin * nout);
  for (std::size_t i = 0; i < nin; ++i) {
    auto r = rng.simplex_point(nout);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return Channel(Alphabet::indexed("x", nin), Alphabet::indexed("m", nout), std::move(rows));
}

}  // namespace smpleak
