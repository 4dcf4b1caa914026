#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iconoclasm/errors.hpp"

namespace iconoclasm {

inline constexpr unsigned kMaxPrecision = 31;

// The integer CDF interval [start, start + width) of one symbol out of 2^precision.
struct FreqSpan {
  std::uint32_t start = 0;
  std::uint32_t width = 0;
  unsigned precision = 0;

  bool valid() const noexcept;
  friend bool operator==(const FreqSpan&, const FreqSpan&) = default;
};

// Throws ContractViolation unless s.valid().
void check_span(const FreqSpan& s);

// LIFO rANS message: a 64-bit head with a stack of 32-bit words beneath it.
//
// The head stays in [2^32, 2^64) between operations. push(s) followed by a pop
// whose locate() yields s restores the message bit for bit, and vice versa.
class Message {
 public:
  static constexpr std::uint64_t kHeadLow = std::uint64_t{1} << 32;
  static constexpr unsigned kWordBits = 32;
  static constexpr unsigned kHeadBits = 64;

  // head = 2^32, empty tail.
  Message() = default;

  // Base message: head = 2^32 and init_words pseudo-random tail words.
  //
  // Word d counted from the top of the stack is the high half of the d-th
  // SplitMix64(seed) output, so init(n, seed) is the top-n prefix of
  // init(n + k, seed). Codecs rely on this: a run that consumes at most n
  // words behaves identically for every init_words >= n.
  static Message init(std::size_t init_words, std::uint64_t seed);

  // Encodes the symbol occupying span s.
  void push(const FreqSpan& s);

  // Decodes one symbol. locate(cum) must return {symbol, span} where span is the
  // unique span at `precision` that contains cum.
  template <class Locate>
  auto pop(unsigned precision, Locate&& locate) {
    check_precision(precision);
    const std::uint32_t cum = static_cast<std::uint32_t>(head_ & ((std::uint64_t{1} << precision) - 1));
    auto [symbol, span] = locate(cum);
    check_located(span, precision, cum);
    head_ = std::uint64_t{span.width} * (head_ >> precision) + (cum - span.start);
    renormalize_after_pop();
    return symbol;
  }

  std::uint64_t head() const noexcept { return head_; }
  // Bottom-to-top; back() is the most recently pushed word.
  std::span<const std::uint32_t> tail() const noexcept { return tail_; }
  std::size_t tail_words() const noexcept { return tail_.size(); }

  // 64 + 32 * tail_words(): what a transmitted message costs.
  std::size_t length_bits() const noexcept { return kHeadBits + kWordBits * tail_.size(); }

  // log2(head) + 32 * tail_words(); removes the 32-bit granularity of
  // length_bits() when measuring per-operation overhead.
  double fractional_length_bits() const noexcept;

  // Little-endian: u64 head, u32 word count n, then n u32 words bottom-to-top.
  std::vector<std::uint8_t> serialize() const;
  static Message deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const Message&, const Message&) = default;

 private:
  Message(std::uint64_t head, std::vector<std::uint32_t> tail) : head_(head), tail_(std::move(tail)) {}

  static void check_precision(unsigned precision);
  static void check_located(const FreqSpan& span, unsigned precision, std::uint32_t cum);
  void renormalize_after_pop();

  std::uint64_t head_ = kHeadLow;
  std::vector<std::uint32_t> tail_;
};

std::string describe(const Message& m);

}  // namespace iconoclasm
