#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "iconoclasm/ans.hpp"
#include "iconoclasm/hmm.hpp"

namespace iconoclasm {

enum class Codec : std::uint8_t {
  iconoclasm = 0,   // interleaved bits-back, O(1) initial bits
  vanilla = 1,      // plain ANS with the exact predictive P(x_t | x_1..t-1)
  naive_bbans = 2,  // pop the whole latent path first, O(T) initial bits
};

std::string_view to_string(Codec codec);
// Accepts "iconoclasm", "vanilla", "naive-bbans".
Codec parse_codec(std::string_view name);

struct CodecConfig {
  unsigned precision = 16;
  std::size_t init_words = 4;
  std::uint64_t init_seed = 0;

  // precision in [8, 24].
  void validate() const;
  Message base_message() const { return Message::init(init_words, init_seed); }
};

struct RateReport {
  std::size_t length = 0;     // T
  double l_init_bits = 0.0;   // base message, counted in the final length
  double l_final_bits = 0.0;
  double h_model_bits = 0.0;  // log2 1/P(x) under the model
  double ratio = 0.0;         // l_final / h_model
  // Deepest the run dug into the base message, in words; the smallest
  // init_words for which this encode succeeds.
  std::size_t init_words_consumed = 0;

  double net_bits() const noexcept { return l_final_bits - l_init_bits; }
};

struct Encoded {
  Message message;
  RateReport report;
};

struct Decoded {
  ObservedSequence observed;
  Message message;  // equals cfg.base_message() for a well-formed input
};

// Throws TailUnderflow (carrying the required init_words) when the base message
// is too short, ZeroLikelihood if x is impossible under the model.
Encoded encode_iconoclasm(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg);
Decoded decode_iconoclasm(const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg);

Encoded encode_vanilla(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg);
Decoded decode_vanilla(const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg);

Encoded encode_naive_bbans(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg);
Decoded decode_naive_bbans(const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg);

Encoded encode(Codec codec, const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg);
Decoded decode(Codec codec, const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg);

// Smallest init_words with which encode(codec, ...) succeeds; cfg.init_words is ignored.
std::size_t minimal_init_words(Codec codec, const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg);

// sum_t [ -log2 q_t(x_t) + log2 p_t(x_t) ] where p_t is the exact predictive
// and q_t its quantization: the code-length cost of quantizing for vanilla ANS.
double vanilla_quantization_slop_bits(const Hmm& hmm, std::span<const Symbol> x, unsigned precision);

}  // namespace iconoclasm
