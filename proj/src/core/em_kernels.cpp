#include "iconoclasm/em_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "iconoclasm/errors.hpp"

namespace iconoclasm::kernels {

namespace {

// Time steps are split into fixed-size chunks, each with its own accumulator, and
// the partial sums are added in chunk order. The chunking does not depend on the
// thread count, so neither does the result.
constexpr std::size_t kChunk = 2048;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

Matrix sum_in_order(const std::vector<Matrix>& partial, std::size_t rows, std::size_t cols) {
  Matrix total(rows, cols);
  for (const Matrix& p : partial) {
    for (std::size_t i = 0; i < p.data().size(); ++i) total.data()[i] += p.data()[i];
  }
  return total;
}

}  // namespace

double ForwardBackward::log_likelihood() const {
  double ll = 0.0;
  for (double c : scale) ll += std::log(c);
  return ll;
}

ForwardBackward forward_backward(const Hmm& hmm, std::span<const Symbol> x) {
  const std::size_t n = x.size();
  const std::size_t k = hmm.states();
  ForwardBackward fb{Matrix(n, k), Matrix(n, k, 1.0), std::vector<double>(n)};

  std::vector<double> pred(k);
  for (std::size_t t = 0; t < n; ++t) {
    if (t == 0) {
      pred = hmm.initial;
    } else {
      std::fill(pred.begin(), pred.end(), 0.0);
      const auto prev = fb.forward.row(t - 1);
      for (std::size_t i = 0; i < k; ++i) {
        const double a = prev[i];
        const auto arow = hmm.transition.row(i);
        for (std::size_t j = 0; j < k; ++j) pred[j] += a * arow[j];
      }
    }
    auto cur = fb.forward.row(t);
    double c = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      cur[j] = pred[j] * hmm.emission(j, x[t]);
      c += cur[j];
    }
    if (!(c > 0.0)) {
      throw ZeroLikelihood("forward pass: observation at t=" + std::to_string(t + 1) + " has zero probability");
    }
    const double inv = 1.0 / c;
    for (std::size_t j = 0; j < k; ++j) cur[j] *= inv;
    fb.scale[t] = c;
  }

  std::vector<double> w(k);
  for (std::size_t t = n - 1; t-- > 0;) {
    const auto next = fb.backward.row(t + 1);
    const double inv = 1.0 / fb.scale[t + 1];
    for (std::size_t j = 0; j < k; ++j) w[j] = hmm.emission(j, x[t + 1]) * next[j] * inv;
    auto cur = fb.backward.row(t);
    for (std::size_t i = 0; i < k; ++i) {
      const auto arow = hmm.transition.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += arow[j] * w[j];
      cur[i] = s;
    }
  }
  return fb;
}

Matrix transition_counts_serial(const Hmm& hmm, const ForwardBackward& fb, std::span<const Symbol> x) {
  const std::size_t k = hmm.states();
  Matrix counts(k, k);
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        counts(i, j) += fb.forward(t, i) * hmm.transition(i, j) * hmm.emission(j, x[t + 1]) *
                        fb.backward(t + 1, j) / fb.scale[t + 1];
      }
    }
  }
  return counts;
}

Matrix transition_counts_parallel(const Hmm& hmm, const ForwardBackward& fb, std::span<const Symbol> x) {
  const std::size_t k = hmm.states();
  const std::size_t steps = x.empty() ? 0 : x.size() - 1;
  std::vector<Matrix> partial(chunk_count(steps), Matrix(k, k));

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(partial.size()); ++c) {
    Matrix& acc = partial[c];
    std::vector<double> w(k);
    const std::size_t end = std::min(steps, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < end; ++t) {
      const auto next = fb.backward.row(t + 1);
      const double inv = 1.0 / fb.scale[t + 1];
      for (std::size_t j = 0; j < k; ++j) w[j] = hmm.emission(j, x[t + 1]) * next[j] * inv;
      const auto cur = fb.forward.row(t);
      for (std::size_t i = 0; i < k; ++i) {
        const double a = cur[i];
        auto row = acc.row(i);
        for (std::size_t j = 0; j < k; ++j) row[j] += a * w[j];
      }
    }
  }

  Matrix counts = sum_in_order(partial, k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto arow = hmm.transition.row(i);
    auto row = counts.row(i);
    for (std::size_t j = 0; j < k; ++j) row[j] *= arow[j];
  }
  return counts;
}

Matrix emission_counts_serial(const ForwardBackward& fb, std::span<const Symbol> x, std::size_t symbols) {
  const std::size_t k = fb.forward.cols();
  Matrix counts(k, symbols);
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (std::size_t i = 0; i < k; ++i) counts(i, x[t]) += fb.forward(t, i) * fb.backward(t, i);
  }
  return counts;
}

Matrix emission_counts_parallel(const ForwardBackward& fb, std::span<const Symbol> x, std::size_t symbols) {
  const std::size_t k = fb.forward.cols();
  std::vector<Matrix> partial(chunk_count(x.size()), Matrix(k, symbols));

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(partial.size()); ++c) {
    Matrix& acc = partial[c];
    const std::size_t end = std::min(x.size(), (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < end; ++t) {
      const auto a = fb.forward.row(t);
      const auto b = fb.backward.row(t);
      for (std::size_t i = 0; i < k; ++i) acc(i, x[t]) += a[i] * b[i];
    }
  }
  return sum_in_order(partial, k, symbols);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace iconoclasm::kernels
