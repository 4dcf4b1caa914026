#pragma once

#include <span>
#include <vector>

#include "iconoclasm/hmm.hpp"

// E-step kernels for Baum-Welch. Each accumulator has an OpenMP version used by
// training and a serial textbook version kept as the reference in tests and the
// benchmark.
namespace iconoclasm::kernels {

// Scaled forward-backward messages for one sequence of length N.
//   forward(t, i)  = P(z_t = i | x_1..t)
//   backward(t, i) = P(x_t+1..N | z_t = i) / P(x_t+1..N | x_1..t)
//   scale[t]       = P(x_t | x_1..t-1)
// so forward(t, i) * backward(t, i) = P(z_t = i | x_1..N).
struct ForwardBackward {
  Matrix forward;
  Matrix backward;
  std::vector<double> scale;

  double log_likelihood() const;
};

// Throws ZeroLikelihood if some scale factor is 0.
ForwardBackward forward_backward(const Hmm& hmm, std::span<const Symbol> x);

// Expected transition counts sum_t P(z_t = i, z_t+1 = j | x), K x K.
Matrix transition_counts_serial(const Hmm& hmm, const ForwardBackward& fb, std::span<const Symbol> x);
Matrix transition_counts_parallel(const Hmm& hmm, const ForwardBackward& fb, std::span<const Symbol> x);

// Expected emission counts sum_t P(z_t = i | x) [x_t = v], K x V.
Matrix emission_counts_serial(const ForwardBackward& fb, std::span<const Symbol> x, std::size_t symbols);
Matrix emission_counts_parallel(const ForwardBackward& fb, std::span<const Symbol> x, std::size_t symbols);

// Threads OpenMP will use for the parallel kernels.
int max_threads();

}  // namespace iconoclasm::kernels
