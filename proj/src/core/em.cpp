#include "iconoclasm/em.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "iconoclasm/em_kernels.hpp"
#include "iconoclasm/errors.hpp"

namespace iconoclasm {

namespace {

// Normalizes `counts` into `out`; leaves `out` alone when the counts carry no mass.
void renormalize_into(std::span<const double> counts, std::span<double> out) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(total > 0.0)) return;
  for (std::size_t j = 0; j < counts.size(); ++j) out[j] = counts[j] / total;
}

void smooth_in_place(std::span<double> p, double delta) {
  double total = 0.0;
  for (double& v : p) {
    v += delta;
    total += v;
  }
  for (double& v : p) v /= total;
}

}  // namespace

Hmm smooth(const Hmm& hmm, double delta) {
  if (!(delta >= 0.0)) throw ContractViolation("smooth: delta must be >= 0");
  Hmm out = hmm;
  smooth_in_place(out.initial, delta);
  for (std::size_t i = 0; i < out.states(); ++i) {
    smooth_in_place(out.transition.row(i), delta);
    smooth_in_place(out.emission.row(i), delta);
  }
  return out;
}

EmResult em_fit(std::span<const Symbol> corpus, const EmOptions& options) {
  if (options.states < 1) throw ContractViolation("em_fit: need at least one hidden state");
  if (corpus.size() < 2) throw ContractViolation("em_fit: corpus must hold at least 2 symbols");
  const std::size_t max_symbol = *std::max_element(corpus.begin(), corpus.end());
  const std::size_t symbols = options.symbols == 0 ? max_symbol + 1 : options.symbols;
  if (max_symbol >= symbols) {
    throw ContractViolation("em_fit: corpus symbol " + std::to_string(max_symbol) + " outside alphabet of size " +
                            std::to_string(symbols));
  }

  EmResult result;
  result.model = sample_hmm_params(options.states, symbols, 1.0, options.seed);
  Hmm& model = result.model;
  const std::size_t k = options.states;

  for (std::size_t it = 0;; ++it) {
    const kernels::ForwardBackward fb = kernels::forward_backward(model, corpus);
    result.log_likelihood_trace.push_back(fb.log_likelihood());
    if (it == options.iterations) break;

    std::vector<double> first(k);
    for (std::size_t i = 0; i < k; ++i) first[i] = fb.forward(0, i) * fb.backward(0, i);
    renormalize_into(first, model.initial);

    const Matrix trans = kernels::transition_counts_parallel(model, fb, corpus);
    const Matrix emit = kernels::emission_counts_parallel(fb, corpus, symbols);
    for (std::size_t i = 0; i < k; ++i) {
      renormalize_into(trans.row(i), model.transition.row(i));
      renormalize_into(emit.row(i), model.emission.row(i));
    }
  }

  result.model = smooth(model, options.smoothing);
  result.smoothed_log_likelihood = log_likelihood(result.model, corpus);
  return result;
}

}  // namespace iconoclasm
