#include "iconoclasm/hmm.hpp"

#include <algorithm>

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "iconoclasm/errors.hpp"
#include "iconoclasm/rng.hpp"

namespace iconoclasm {

namespace {

void check_distribution(std::span<const double> p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ContractViolation(std::string(what) + ": negative or non-finite entry");
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
    throw ContractViolation(std::string(what) + ": sums to " + std::to_string(sum));
  }
}

void dirichlet(std::span<double> out, double alpha, SplitMix64& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  double sum = 0.0;
  for (double& v : out) {
    v = gamma(rng);
    sum += v;
  }
  if (sum > 0.0) {
    for (double& v : out) v /= sum;
  } else {
    // Every variate underflowed (tiny alpha); the limit is a vertex of the simplex.
    std::fill(out.begin(), out.end(), 0.0);
    out[rng() % out.size()] = 1.0;
  }
}

Symbol sample_categorical(std::span<const double> p, SplitMix64& rng) {
  const double u = std::generate_canonical<double, 53>(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last_positive = i;
    if (u < acc) return static_cast<Symbol>(i);
  }
  return static_cast<Symbol>(last_positive);
}

void check_symbol(Symbol s, std::size_t bound, const char* what) {
  if (s >= bound) {
    throw ContractViolation(std::string(what) + " " + std::to_string(s) + " out of range [0, " +
                            std::to_string(bound) + ")");
  }
}

// Scales `unnormalized` to sum 1 and returns the normalizer.
double normalize(std::vector<double>& v) {
  const double c = std::accumulate(v.begin(), v.end(), 0.0);
  if (c > 0.0) {
    const double inv = 1.0 / c;
    for (double& e : v) e *= inv;
  }
  return c;
}

}  // namespace

void Hmm::validate() const {
  const std::size_t k = states();
  if (k == 0) throw ContractViolation("hmm: no hidden states");
  if (transition.rows() != k || transition.cols() != k) throw ContractViolation("hmm: transition matrix is not K x K");
  if (emission.rows() != k || emission.cols() == 0) throw ContractViolation("hmm: emission matrix is not K x V");
  check_distribution(initial, "hmm initial distribution");
  for (std::size_t i = 0; i < k; ++i) {
    check_distribution(transition.row(i), "hmm transition row");
    check_distribution(emission.row(i), "hmm emission row");
  }
}

Hmm sample_hmm_params(std::size_t states, std::size_t symbols, double alpha, std::uint64_t seed) {
  if (states < 1 || symbols < 1) throw ContractViolation("sample_hmm_params: K and V must be >= 1");
  if (!(alpha > 0.0)) throw ContractViolation("sample_hmm_params: concentration must be > 0");
  SplitMix64 rng(seed);
  Hmm hmm{std::vector<double>(states), Matrix(states, states), Matrix(states, symbols)};
  dirichlet(hmm.initial, alpha, rng);
  for (std::size_t i = 0; i < states; ++i) dirichlet(hmm.transition.row(i), alpha, rng);
  for (std::size_t i = 0; i < states; ++i) dirichlet(hmm.emission.row(i), alpha, rng);
  return hmm;
}

SampledSequence sample_sequence(const Hmm& hmm, std::size_t length, std::uint64_t seed) {
  if (length < 1) throw ContractViolation("sample_sequence: T must be >= 1");
  SplitMix64 rng(seed);
  SampledSequence out;
  out.observed.resize(length);
  out.latent.resize(length);
  Symbol z = sample_categorical(hmm.initial, rng);
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0) z = sample_categorical(hmm.transition.row(z), rng);
    out.latent[t] = z;
    out.observed[t] = sample_categorical(hmm.emission.row(z), rng);
  }
  return out;
}

FilterState filter_prior(const Hmm& hmm) { return FilterState{0, hmm.initial, 0.0}; }

FilterState filter_init(const Hmm& hmm, Symbol x1) { return filter_step(hmm, filter_prior(hmm), x1); }

FilterState filter_step(const Hmm& hmm, const FilterState& fs, Symbol x) {
  check_symbol(x, hmm.symbols(), "observation");
  std::vector<double> next = predicted_state(hmm, fs);
  for (std::size_t j = 0; j < next.size(); ++j) next[j] *= hmm.emission(j, x);
  const double c = normalize(next);
  if (!(c > 0.0)) {
    throw ZeroLikelihood("observation " + std::to_string(x) + " at t=" + std::to_string(fs.t + 1) +
                         " has zero probability under the model");
  }
  // c is a probability; rounding can push it a hair above 1 for certain events.
  return FilterState{fs.t + 1, std::move(next), fs.info_bits - std::log2(std::min(c, 1.0))};
}

std::vector<FilterState> filter_all(const Hmm& hmm, std::span<const Symbol> x) {
  std::vector<FilterState> out;
  out.reserve(x.size());
  FilterState fs = filter_prior(hmm);
  for (Symbol s : x) {
    fs = filter_step(hmm, fs, s);
    out.push_back(fs);
  }
  return out;
}

double info_content(const Hmm& hmm, std::span<const Symbol> x) {
  FilterState fs = filter_prior(hmm);
  for (Symbol s : x) fs = filter_step(hmm, fs, s);
  return fs.info_bits;
}

double log_likelihood(const Hmm& hmm, std::span<const Symbol> x) { return -info_content(hmm, x) * std::log(2.0); }

std::vector<double> predicted_state(const Hmm& hmm, const FilterState& fs) {
  if (fs.t == 0) return hmm.initial;
  const std::size_t k = hmm.states();
  std::vector<double> pred(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double a = fs.filtered[i];
    if (a == 0.0) continue;
    const auto row = hmm.transition.row(i);
    for (std::size_t j = 0; j < k; ++j) pred[j] += a * row[j];
  }
  return pred;
}

std::vector<double> predictive(const Hmm& hmm, const FilterState& fs) {
  const std::vector<double> pred = predicted_state(hmm, fs);
  std::vector<double> out(hmm.symbols(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double w = pred[i];
    if (w == 0.0) continue;
    const auto row = hmm.emission.row(i);
    for (std::size_t v = 0; v < out.size(); ++v) out[v] += w * row[v];
  }
  normalize(out);
  return out;
}

std::vector<double> posterior_last(const Hmm&, const FilterState& fs) { return fs.filtered; }

std::vector<double> posterior_step(const Hmm& hmm, const FilterState& fs, Symbol next) {
  check_symbol(next, hmm.states(), "latent");
  std::vector<double> out(fs.filtered);
  for (std::size_t z = 0; z < out.size(); ++z) out[z] *= hmm.transition(z, next);
  if (!(normalize(out) > 0.0)) {
    throw ZeroLikelihood("latent transition into state " + std::to_string(next) + " after t=" +
                         std::to_string(fs.t) + " has zero posterior probability");
  }
  return out;
}

}  // namespace iconoclasm
