#include "iconoclasm/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "iconoclasm/errors.hpp"

namespace iconoclasm {

namespace {

constexpr double kSumTolerance = 1e-9;

// Index of the largest entry, lowest index on ties.
std::size_t argmax_lowest(const std::vector<std::uint64_t>& f) {
  return static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
}

}  // namespace

QuantizedCategorical::QuantizedCategorical(std::vector<std::uint32_t> freqs, unsigned precision)
    : freqs_(std::move(freqs)), cumfreqs_(freqs_.size() + 1, 0), precision_(precision) {
  std::partial_sum(freqs_.begin(), freqs_.end(), cumfreqs_.begin() + 1);
}

QuantizedCategorical QuantizedCategorical::quantize(std::span<const double> p, unsigned precision) {
  if (precision < 1 || precision > kMaxPrecision) {
    throw ContractViolation("quantize: precision " + std::to_string(precision) + " outside [1, 31]");
  }
  const std::size_t n = p.size();
  const std::uint64_t total = std::uint64_t{1} << precision;
  if (n == 0) throw ContractViolation("quantize: empty probability vector");
  if (n > total) {
    throw CapacityError("quantize: " + std::to_string(n) + " symbols do not fit in 2^" + std::to_string(precision) +
                        " frequency units");
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ContractViolation("quantize: negative or non-finite probability");
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= kSumTolerance)) {
    throw ContractViolation("quantize: probabilities sum to " + std::to_string(sum) + ", not 1");
  }

  const double scale = static_cast<double>(total) / sum;
  std::vector<std::uint64_t> f(n);
  std::vector<double> remainder(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = p[i] * scale;
    const double fl = std::floor(scaled);
    f[i] = static_cast<std::uint64_t>(fl);
    remainder[i] = scaled - fl;
    assigned += f[i];
  }

  // Largest remainder: hand the leftover units to the biggest remainders.
  if (assigned < total) {
    std::uint64_t leftover = total - assigned;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return remainder[a] != remainder[b] ? remainder[a] > remainder[b] : a < b;
    });
    const std::uint64_t rounds = leftover / n;
    for (auto& v : f) v += rounds;
    leftover -= rounds * n;
    for (std::size_t k = 0; k < leftover; ++k) ++f[order[k]];
  }

  for (auto& v : f) v = std::max<std::uint64_t>(v, 1);

  // Settle any surplus/deficit on the largest entry (lowest index on ties).
  std::uint64_t now = std::accumulate(f.begin(), f.end(), std::uint64_t{0});
  while (now > total) {
    const std::size_t i = argmax_lowest(f);
    const std::uint64_t take = std::min(now - total, f[i] - 1);
    f[i] -= take;
    now -= take;
  }
  if (now < total) f[argmax_lowest(f)] += total - now;

  std::vector<std::uint32_t> freqs(f.begin(), f.end());
  return QuantizedCategorical(std::move(freqs), precision);
}

FreqSpan QuantizedCategorical::span_of(std::size_t symbol) const {
  if (symbol >= freqs_.size()) {
    throw ContractViolation("span_of: symbol " + std::to_string(symbol) + " outside alphabet of size " +
                            std::to_string(freqs_.size()));
  }
  return FreqSpan{cumfreqs_[symbol], freqs_[symbol], precision_};
}

std::size_t QuantizedCategorical::symbol_of(std::uint32_t cum) const {
  if (std::uint64_t{cum} >= (std::uint64_t{1} << precision_)) {
    throw ContractViolation("symbol_of: cumulative value " + std::to_string(cum) + " out of range");
  }
  const auto it = std::upper_bound(cumfreqs_.begin(), cumfreqs_.end(), cum);
  return static_cast<std::size_t>(it - cumfreqs_.begin()) - 1;
}

double QuantizedCategorical::code_length_bits(std::size_t symbol) const {
  return static_cast<double>(precision_) - std::log2(static_cast<double>(span_of(symbol).width));
}

}  // namespace iconoclasm
