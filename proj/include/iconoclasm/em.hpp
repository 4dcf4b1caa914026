#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iconoclasm/hmm.hpp"

namespace iconoclasm {

struct EmOptions {
  std::size_t states = 64;
  std::size_t iterations = 100;
  std::uint64_t seed = 0;
  // Added to every entry of pi, A and B after training, then rows renormalized.
  double smoothing = 1e-6;
  // Alphabet size; 0 means max(corpus) + 1.
  std::size_t symbols = 0;
};

struct EmResult {
  Hmm model;
  // ln P(corpus) under the parameters before iteration 1, after each iteration
  // (iterations + 1 entries, all before smoothing).
  std::vector<double> log_likelihood_trace;
  // ln P(corpus) under the returned (smoothed) model.
  double smoothed_log_likelihood = 0.0;
};

// Baum-Welch with scaled forward-backward messages, initialized from
// sample_hmm_params(states, symbols, 1.0, seed).
EmResult em_fit(std::span<const Symbol> corpus, const EmOptions& options);

// Adds delta to every entry and renormalizes each distribution.
Hmm smooth(const Hmm& hmm, double delta);

}  // namespace iconoclasm
