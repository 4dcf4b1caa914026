#include "iconoclasm/ans.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "iconoclasm/rng.hpp"

namespace iconoclasm {

bool FreqSpan::valid() const noexcept {
  if (precision < 1 || precision > kMaxPrecision) return false;
  const std::uint64_t total = std::uint64_t{1} << precision;
  return width >= 1 && std::uint64_t{start} + width <= total;
}

void check_span(const FreqSpan& s) {
  if (!s.valid()) {
    std::ostringstream os;
    os << "invalid FreqSpan{start=" << s.start << ", width=" << s.width << ", precision=" << s.precision << "}";
    throw ContractViolation(os.str());
  }
}

Message Message::init(std::size_t init_words, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> tail(init_words);
  for (std::size_t d = 0; d < init_words; ++d) {
    tail[init_words - 1 - d] = static_cast<std::uint32_t>(rng() >> 32);
  }
  return Message(kHeadLow, std::move(tail));
}

void Message::push(const FreqSpan& s) {
  check_span(s);
  // Flush while head >= width * 2^(64 - precision); at most once for precision <= 32.
  const unsigned shift = kHeadBits - s.precision;
  while ((head_ >> shift) >= s.width) {
    tail_.push_back(static_cast<std::uint32_t>(head_));
    head_ >>= kWordBits;
  }
  head_ = ((head_ / s.width) << s.precision) + (head_ % s.width) + s.start;
}

void Message::check_precision(unsigned precision) {
  if (precision < 1 || precision > kMaxPrecision) {
    throw ContractViolation("pop: precision " + std::to_string(precision) + " outside [1, 31]");
  }
}

void Message::check_located(const FreqSpan& span, unsigned precision, std::uint32_t cum) {
  check_span(span);
  if (span.precision != precision || cum < span.start || cum - span.start >= span.width) {
    std::ostringstream os;
    os << "pop: locate(" << cum << ") returned span [" << span.start << ", "
       << std::uint64_t{span.start} + span.width << ") at precision " << span.precision
       << " which does not contain it";
    throw ContractViolation(os.str());
  }
}

void Message::renormalize_after_pop() {
  while (head_ < kHeadLow) {
    if (tail_.empty()) {
      throw TailUnderflow(
          "ANS tail underflow: a pop needed another 32-bit word but the message tail is empty; "
          "encode again with a larger init_words");
    }
    head_ = (head_ << kWordBits) | tail_.back();
    tail_.pop_back();
  }
}

double Message::fractional_length_bits() const noexcept {
  return std::log2(static_cast<double>(head_)) + static_cast<double>(kWordBits * tail_.size());
}

std::vector<std::uint8_t> Message::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(12 + 4 * tail_.size());
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(head_ >> (8 * i)));
  const auto n = static_cast<std::uint32_t>(tail_.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  for (std::uint32_t w : tail_) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
  }
  return out;
}

namespace {

std::uint64_t read_le(std::span<const std::uint8_t> bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes[offset + i]} << (8 * i);
  return v;
}

}  // namespace

Message Message::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw FormatError("message: truncated header (" + std::to_string(bytes.size()) + " bytes)");
  const std::uint64_t head = read_le(bytes, 0, 8);
  const std::uint64_t n = read_le(bytes, 8, 4);
  if (bytes.size() != 12 + 4 * n) {
    throw FormatError("message: expected " + std::to_string(12 + 4 * n) + " bytes for " + std::to_string(n) +
                      " tail words, got " + std::to_string(bytes.size()));
  }
  if (head < kHeadLow) throw FormatError("message: head below 2^32 violates the renormalization invariant");
  std::vector<std::uint32_t> tail(n);
  for (std::size_t i = 0; i < n; ++i) tail[i] = static_cast<std::uint32_t>(read_le(bytes, 12 + 4 * i, 4));
  return Message(head, std::move(tail));
}

std::string describe(const Message& m) {
  std::ostringstream os;
  os << "Message{head=0x" << std::hex << m.head() << std::dec << ", tail_words=" << m.tail_words()
     << ", bits=" << m.length_bits() << "}";
  return os.str();
}

}  // namespace iconoclasm
