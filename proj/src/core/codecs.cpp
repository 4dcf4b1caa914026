#include "iconoclasm/codecs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iconoclasm/errors.hpp"
#include "iconoclasm/quantizer.hpp"

namespace iconoclasm {

namespace {

// Quantized prior, transition rows and emission rows; fixed for a whole run.
struct QuantizedModel {
  QuantizedCategorical initial;
  std::vector<QuantizedCategorical> transition;
  std::vector<QuantizedCategorical> emission;

  QuantizedModel(const Hmm& hmm, unsigned precision) : initial(quantize(hmm.initial, precision)) {
    transition.reserve(hmm.states());
    emission.reserve(hmm.states());
    for (std::size_t i = 0; i < hmm.states(); ++i) {
      transition.push_back(quantize(hmm.transition.row(i), precision));
      emission.push_back(quantize(hmm.emission.row(i), precision));
    }
  }
};

// Message plus a record of how far pops reached into the base message.
class Coder {
 public:
  Coder(Message m) : m_(std::move(m)), base_words_(m_.tail_words()) {}

  void push(const QuantizedCategorical& q, std::size_t symbol) { push_symbol(m_, q, symbol); }

  Symbol pop(const QuantizedCategorical& q) {
    const auto s = static_cast<Symbol>(pop_symbol(m_, q));
    if (m_.tail_words() < base_words_) consumed_ = std::max(consumed_, base_words_ - m_.tail_words());
    return s;
  }

  Message& message() { return m_; }
  std::size_t consumed() const { return consumed_; }

 private:
  Message m_;
  std::size_t base_words_;
  std::size_t consumed_ = 0;
};

void check_inputs(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  cfg.validate();
  hmm.validate();
  if (x.empty()) throw ContractViolation("encode: empty sequence");
  for (Symbol s : x) {
    if (s >= hmm.symbols()) {
      throw ContractViolation("encode: symbol " + std::to_string(s) + " outside alphabet of size " +
                              std::to_string(hmm.symbols()));
    }
  }
}

void check_decode_inputs(const Hmm& hmm, std::size_t length, const CodecConfig& cfg) {
  cfg.validate();
  hmm.validate();
  if (length == 0) throw ContractViolation("decode: sequence length must be >= 1");
}

Encoded finish(Coder& coder, const CodecConfig& cfg, std::size_t length, double h_bits) {
  Encoded out{std::move(coder.message()), {}};
  RateReport& r = out.report;
  r.length = length;
  r.l_init_bits = static_cast<double>(cfg.base_message().length_bits());
  r.l_final_bits = static_cast<double>(out.message.length_bits());
  r.h_model_bits = h_bits;
  r.ratio = h_bits > 0.0 ? r.l_final_bits / h_bits : 0.0;
  r.init_words_consumed = coder.consumed();
  return out;
}

Encoded iconoclasm_impl(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  const std::size_t n = x.size();
  const unsigned prec = cfg.precision;
  const std::vector<FilterState> fs = filter_all(hmm, x);
  const QuantizedModel qm(hmm, prec);
  Coder coder(cfg.base_message());

  // fs[t - 1] is the filter state after x_1..t (1-based t).
  Symbol z = coder.pop(quantize(posterior_last(hmm, fs[n - 1]), prec));
  for (std::size_t t = n; t >= 2; --t) {
    coder.push(qm.emission[z], x[t - 1]);
    const Symbol prev = coder.pop(quantize(posterior_step(hmm, fs[t - 2], z), prec));
    coder.push(qm.transition[prev], z);
    z = prev;
  }
  coder.push(qm.emission[z], x[0]);
  coder.push(qm.initial, z);
  return finish(coder, cfg, n, fs.back().info_bits);
}

Encoded vanilla_impl(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  const std::size_t n = x.size();
  const std::vector<FilterState> fs = filter_all(hmm, x);
  const FilterState prior = filter_prior(hmm);
  Coder coder(cfg.base_message());
  for (std::size_t t = n; t >= 1; --t) {
    const FilterState& before = t == 1 ? prior : fs[t - 2];
    coder.push(quantize(predictive(hmm, before), cfg.precision), x[t - 1]);
  }
  return finish(coder, cfg, n, fs.back().info_bits);
}

Encoded naive_impl(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  const std::size_t n = x.size();
  const unsigned prec = cfg.precision;
  const std::vector<FilterState> fs = filter_all(hmm, x);
  const QuantizedModel qm(hmm, prec);
  Coder coder(cfg.base_message());

  LatentSequence z(n);
  z[n - 1] = coder.pop(quantize(posterior_last(hmm, fs[n - 1]), prec));
  for (std::size_t t = n - 1; t >= 1; --t) z[t - 1] = coder.pop(quantize(posterior_step(hmm, fs[t - 1], z[t]), prec));

  for (std::size_t t = n; t >= 2; --t) {
    coder.push(qm.emission[z[t - 1]], x[t - 1]);
    coder.push(qm.transition[z[t - 2]], z[t - 1]);
  }
  coder.push(qm.emission[z[0]], x[0]);
  coder.push(qm.initial, z[0]);
  return finish(coder, cfg, n, fs.back().info_bits);
}

Encoded run_impl(Codec codec, const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  switch (codec) {
    case Codec::iconoclasm:
      return iconoclasm_impl(hmm, x, cfg);
    case Codec::vanilla:
      return vanilla_impl(hmm, x, cfg);
    case Codec::naive_bbans:
      return naive_impl(hmm, x, cfg);
  }
  throw ContractViolation("unknown codec");
}

std::size_t pop_count(Codec codec, std::size_t length) { return codec == Codec::vanilla ? 0 : length; }

std::size_t search_init_words(Codec codec, const Hmm& hmm, std::span<const Symbol> x, CodecConfig cfg) {
  // A pop removes at most `precision` bits, so this many words always suffice.
  cfg.init_words = (pop_count(codec, x.size()) * cfg.precision) / Message::kWordBits + 2;
  for (;;) {
    try {
      return run_impl(codec, hmm, x, cfg).report.init_words_consumed;
    } catch (const TailUnderflow&) {
      cfg.init_words *= 2;
    }
  }
}

Encoded encode_checked(Codec codec, const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  check_inputs(hmm, x, cfg);
  try {
    return run_impl(codec, hmm, x, cfg);
  } catch (const TailUnderflow&) {
    const std::size_t need = search_init_words(codec, hmm, x, cfg);
    throw TailUnderflow(std::string(to_string(codec)) + " encode of T=" + std::to_string(x.size()) +
                            " needs init_words >= " + std::to_string(need) + " (got " +
                            std::to_string(cfg.init_words) + ")",
                        need);
  }
}

}  // namespace

std::string_view to_string(Codec codec) {
  switch (codec) {
    case Codec::iconoclasm:
      return "iconoclasm";
    case Codec::vanilla:
      return "vanilla";
    case Codec::naive_bbans:
      return "naive-bbans";
  }
  return "unknown";
}

Codec parse_codec(std::string_view name) {
  for (Codec c : {Codec::iconoclasm, Codec::vanilla, Codec::naive_bbans}) {
    if (name == to_string(c)) return c;
  }
  throw ContractViolation("unknown codec '" + std::string(name) + "' (expected iconoclasm, vanilla or naive-bbans)");
}

void CodecConfig::validate() const {
  if (precision < 8 || precision > 24) {
    throw ContractViolation("codec precision " + std::to_string(precision) + " outside [8, 24]");
  }
}

Encoded encode_iconoclasm(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  return encode_checked(Codec::iconoclasm, hmm, x, cfg);
}

Encoded encode_vanilla(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  return encode_checked(Codec::vanilla, hmm, x, cfg);
}

Encoded encode_naive_bbans(const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  return encode_checked(Codec::naive_bbans, hmm, x, cfg);
}

Decoded decode_iconoclasm(const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg) {
  check_decode_inputs(hmm, length, cfg);
  const unsigned prec = cfg.precision;
  const QuantizedModel qm(hmm, prec);
  Decoded out{ObservedSequence(length), std::move(m)};
  Message& msg = out.message;

  Symbol z = static_cast<Symbol>(pop_symbol(msg, qm.initial));
  out.observed[0] = static_cast<Symbol>(pop_symbol(msg, qm.emission[z]));
  FilterState fs = filter_init(hmm, out.observed[0]);
  for (std::size_t t = 2; t <= length; ++t) {
    const Symbol next = static_cast<Symbol>(pop_symbol(msg, qm.transition[z]));
    push_symbol(msg, quantize(posterior_step(hmm, fs, next), prec), z);
    z = next;
    out.observed[t - 1] = static_cast<Symbol>(pop_symbol(msg, qm.emission[z]));
    fs = filter_step(hmm, fs, out.observed[t - 1]);
  }
  push_symbol(msg, quantize(posterior_last(hmm, fs), prec), z);
  return out;
}

Decoded decode_vanilla(const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg) {
  check_decode_inputs(hmm, length, cfg);
  Decoded out{ObservedSequence(length), std::move(m)};
  FilterState fs = filter_prior(hmm);
  for (std::size_t t = 0; t < length; ++t) {
    const auto q = quantize(predictive(hmm, fs), cfg.precision);
    out.observed[t] = static_cast<Symbol>(pop_symbol(out.message, q));
    fs = filter_step(hmm, fs, out.observed[t]);
  }
  return out;
}

Decoded decode_naive_bbans(const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg) {
  check_decode_inputs(hmm, length, cfg);
  const unsigned prec = cfg.precision;
  const QuantizedModel qm(hmm, prec);
  Decoded out{ObservedSequence(length), std::move(m)};
  Message& msg = out.message;

  LatentSequence z(length);
  z[0] = static_cast<Symbol>(pop_symbol(msg, qm.initial));
  out.observed[0] = static_cast<Symbol>(pop_symbol(msg, qm.emission[z[0]]));
  for (std::size_t t = 1; t < length; ++t) {
    z[t] = static_cast<Symbol>(pop_symbol(msg, qm.transition[z[t - 1]]));
    out.observed[t] = static_cast<Symbol>(pop_symbol(msg, qm.emission[z[t]]));
  }

  // Give back the bits the encoder borrowed, in reverse order of its pops.
  const std::vector<FilterState> fs = filter_all(hmm, out.observed);
  for (std::size_t t = 1; t < length; ++t) push_symbol(msg, quantize(posterior_step(hmm, fs[t - 1], z[t]), prec), z[t - 1]);
  push_symbol(msg, quantize(posterior_last(hmm, fs[length - 1]), prec), z[length - 1]);
  return out;
}

Encoded encode(Codec codec, const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  return encode_checked(codec, hmm, x, cfg);
}

Decoded decode(Codec codec, const Hmm& hmm, std::size_t length, Message m, const CodecConfig& cfg) {
  switch (codec) {
    case Codec::iconoclasm:
      return decode_iconoclasm(hmm, length, std::move(m), cfg);
    case Codec::vanilla:
      return decode_vanilla(hmm, length, std::move(m), cfg);
    case Codec::naive_bbans:
      return decode_naive_bbans(hmm, length, std::move(m), cfg);
  }
  throw ContractViolation("unknown codec");
}

std::size_t minimal_init_words(Codec codec, const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg) {
  check_inputs(hmm, x, cfg);
  return search_init_words(codec, hmm, x, cfg);
}

double vanilla_quantization_slop_bits(const Hmm& hmm, std::span<const Symbol> x, unsigned precision) {
  double slop = 0.0;
  FilterState fs = filter_prior(hmm);
  for (Symbol s : x) {
    const std::vector<double> p = predictive(hmm, fs);
    const auto q = quantize(p, precision);
    slop += q.code_length_bits(s) + std::log2(p[s]);
    fs = filter_step(hmm, fs, s);
  }
  return slop;
}

}  // namespace iconoclasm
