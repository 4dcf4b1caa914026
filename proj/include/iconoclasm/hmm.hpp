#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace iconoclasm {

using Symbol = std::uint32_t;
using ObservedSequence = std::vector<Symbol>;
using LatentSequence = std::vector<Symbol>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Discrete HMM: P(z1) = initial, P(z_t = j | z_{t-1} = i) = transition(i, j),
// P(x_t = v | z_t = i) = emission(i, v).
struct Hmm {
  std::vector<double> initial;
  Matrix transition;
  Matrix emission;

  std::size_t states() const noexcept { return initial.size(); }
  std::size_t symbols() const noexcept { return emission.cols(); }

  // Shapes agree, entries are finite and >= 0, every distribution sums to 1 within 1e-9.
  // Throws ContractViolation otherwise.
  void validate() const;

  friend bool operator==(const Hmm&, const Hmm&) = default;
};

inline constexpr double kRowSumTolerance = 1e-9;

// pi, every row of A and every row of B drawn i.i.d. from Dirichlet(alpha * 1).
Hmm sample_hmm_params(std::size_t states, std::size_t symbols, double alpha, std::uint64_t seed);

struct SampledSequence {
  ObservedSequence observed;
  LatentSequence latent;
};

// Ancestral sampling of (x, z) with T steps.
SampledSequence sample_sequence(const Hmm& hmm, std::size_t length, std::uint64_t seed);

// Normalized forward message after t observations.
//
// t = 0 is the prior state (filtered = initial, info_bits = 0); filter_step()
// from it is filter_init().
struct FilterState {
  std::size_t t = 0;
  std::vector<double> filtered;  // P(z_t | x_1..t)
  double info_bits = 0.0;        // -sum_{s<=t} log2 P(x_s | x_1..s-1)
};

FilterState filter_prior(const Hmm& hmm);
FilterState filter_init(const Hmm& hmm, Symbol x1);
FilterState filter_step(const Hmm& hmm, const FilterState& fs, Symbol x);

// States for t = 1..T (index t-1).
std::vector<FilterState> filter_all(const Hmm& hmm, std::span<const Symbol> x);

// log2(1 / P(x)) in bits.
double info_content(const Hmm& hmm, std::span<const Symbol> x);
// ln P(x).
double log_likelihood(const Hmm& hmm, std::span<const Symbol> x);

// P(z_{t+1} | x_1..t): initial for t = 0, filtered^T A otherwise.
std::vector<double> predicted_state(const Hmm& hmm, const FilterState& fs);
// P(x_{t+1} = v | x_1..t).
std::vector<double> predictive(const Hmm& hmm, const FilterState& fs);
// P(z_T | x_1..T), given the final filter state.
std::vector<double> posterior_last(const Hmm& hmm, const FilterState& fs);
// P(z_t | x_1..t, z_{t+1} = next), proportional to filtered(z) * A(z, next).
std::vector<double> posterior_step(const Hmm& hmm, const FilterState& fs, Symbol next);

}  // namespace iconoclasm
