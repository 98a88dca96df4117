#ifndef SMPLEAK_FIXTURES_HPP
#define SMPLEAK_FIXTURES_HPP

#include "smpleak/protocol.hpp"
#include "smpleak/rng.hpp"

namespace smpleak {

// Both parties send their inputs verbatim; the referee compares. Zero error,
// maximal leakage (the referee learns everything).
SmpProtocol verbatim_eq_protocol(int bits);

// Single constant message on each side; referee outputs a fixed answer.
SmpProtocol constant_message_protocol(int bits);

// Messages are constant; the referee outputs a fresh uniform bit from its
// private randomness, so the output is input-independent.
SmpProtocol referee_coin_protocol(int bits);

// Equality via hashing against referee-shared seeds: Alice sends the k inner
// products <a_i, x> for seeds a_1..a_k drawn from R_AC; Bob sends y one-time
// padded with R_BC. The referee recovers y, re-hashes it and compares.
// Errs only on x != y, with probability exactly 2^-k.
SmpProtocol shared_hash_eq_protocol(int bits, int hash_bits);

// Private-coin variant: Alice samples the seeds herself and prepends them to
// the hash bits; Bob sends y verbatim. Error 2^-k on x != y.
SmpProtocol private_hash_eq_protocol(int bits, int hash_bits);

// Average-length model on 1-bit inputs with two-valued length functions
// {2, 5}: each side sends a short input-carrying message, switching to the
// long variant with probability long_num/32 per input symbol. Computes EQ_1
// with zero error. (Two length-1 codewords would exhaust the Kraft budget,
// so the short class is 2 bits.)
SmpProtocol two_length_protocol(int long_num_x0, int long_num_x1, int long_num_y0,
                                int long_num_y1);

// Both parties send their inputs one-time padded with their referee-shared
// registers; the referee unpads and compares. Zero error, and small enough
// side channels to materialize compression at desk scale.
SmpProtocol padded_eq_protocol(int bits);

// Shared registers present (size 2) but ignored by all maps; verbatim
// equality underneath.
SmpProtocol ignores_shared_protocol(int bits);

// Alice's message is a fresh uniform private bit, independent of x; Bob
// sends y verbatim; referee answers 1 iff Alice's bit equals the parity
// of y. Boolean, private model.
SmpProtocol uniform_bit_alice_protocol(int bits);

struct RandomProtocolOptions {
  Model model = Model::kShared;
  std::size_t min_inputs = 2, max_inputs = 4;
  std::size_t min_messages = 2, max_messages = 4;
  std::size_t max_register = 4;  // each randomness register in [1 .. max]
  bool uniform_lengths = true;   // average model may draw Kraft-valid lengths
};

SmpProtocol random_protocol(Rng& rng, const RandomProtocolOptions& opt = {});
InputPrior random_prior(Rng& rng, const SmpProtocol& p);
Channel random_channel(Rng& rng, std::size_t min_size = 2, std::size_t max_size = 4);

}  // namespace smpleak

#endif
