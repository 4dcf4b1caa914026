#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "iconoclasm/ans.hpp"

namespace iconoclasm {

// Integer frequency table summing to 2^precision, every entry >= 1.
//
// Built by largest-remainder apportionment, so identical inputs give identical
// tables on encoder and decoder.
class QuantizedCategorical {
 public:
  // p: non-negative, sums to 1 within 1e-9 (it is renormalized by its sum).
  // Throws CapacityError if p.size() > 2^precision, ContractViolation on bad p.
  static QuantizedCategorical quantize(std::span<const double> p, unsigned precision);

  std::size_t size() const noexcept { return freqs_.size(); }
  unsigned precision() const noexcept { return precision_; }
  std::span<const std::uint32_t> freqs() const noexcept { return freqs_; }
  // Exclusive prefix sums, size() + 1 entries, last = 2^precision.
  std::span<const std::uint32_t> cumfreqs() const noexcept { return cumfreqs_; }

  FreqSpan span_of(std::size_t symbol) const;
  // Unique s with cumfreqs[s] <= cum < cumfreqs[s+1].
  std::size_t symbol_of(std::uint32_t cum) const;

  std::pair<std::size_t, FreqSpan> locate(std::uint32_t cum) const {
    const std::size_t s = symbol_of(cum);
    return {s, span_of(s)};
  }

  // -log2(freq[s] / 2^precision).
  double code_length_bits(std::size_t symbol) const;

  friend bool operator==(const QuantizedCategorical&, const QuantizedCategorical&) = default;

 private:
  QuantizedCategorical(std::vector<std::uint32_t> freqs, unsigned precision);

  std::vector<std::uint32_t> freqs_;
  std::vector<std::uint32_t> cumfreqs_;
  unsigned precision_ = 0;
};

inline QuantizedCategorical quantize(std::span<const double> p, unsigned precision) {
  return QuantizedCategorical::quantize(p, precision);
}

inline void push_symbol(Message& m, const QuantizedCategorical& q, std::size_t symbol) {
  m.push(q.span_of(symbol));
}

inline std::size_t pop_symbol(Message& m, const QuantizedCategorical& q) {
  return m.pop(q.precision(), [&q](std::uint32_t cum) { return q.locate(cum); });
}

}  // namespace iconoclasm
