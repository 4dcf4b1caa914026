#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "iconoclasm/errors.hpp"
#include "iconoclasm/hmm.hpp"
#include "oracles.hpp"

using namespace iconoclasm;

namespace {

struct Instance {
  Hmm hmm;
  ObservedSequence x;
};

// Small random instance; alpha below 1 gives peaky rows so the posteriors are not flat.
Instance small_instance(std::uint64_t seed, std::size_t max_k, std::size_t max_t) {
  std::mt19937_64 rng(seed);
  const std::size_t k = 1 + rng() % max_k;
  const std::size_t v = 1 + rng() % 5;
  const std::size_t t = 1 + rng() % max_t;
  const double alpha = rng() % 2 ? 0.5 : 2.0;
  Instance in{sample_hmm_params(k, v, alpha, rng()), {}};
  in.x = sample_sequence(in.hmm, t, rng()).observed;
  return in;
}

Hmm permutation_chain() {
  Hmm h;
  h.initial = {1.0, 0.0, 0.0};
  h.transition = Matrix(3, 3);
  h.transition(0, 1) = h.transition(1, 2) = h.transition(2, 0) = 1.0;
  h.emission = Matrix(3, 3);
  h.emission(0, 2) = h.emission(1, 0) = h.emission(2, 1) = 1.0;
  return h;
}

}  // namespace

TEST(HmmParams, SampledModelsAreValidAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Hmm h = sample_hmm_params(5, 7, 1.0, seed);
    EXPECT_NO_THROW(h.validate());
    EXPECT_EQ(h.states(), 5u);
    EXPECT_EQ(h.symbols(), 7u);
    EXPECT_EQ(h, sample_hmm_params(5, 7, 1.0, seed));
  }
  EXPECT_NE(sample_hmm_params(3, 3, 1.0, 1), sample_hmm_params(3, 3, 1.0, 2));
}

TEST(HmmParams, ValidateRejectsBadModels) {
  Hmm h = sample_hmm_params(2, 2, 1.0, 0);
  h.transition(0, 0) += 1e-6;
  EXPECT_THROW(h.validate(), ContractViolation);
  h = sample_hmm_params(2, 2, 1.0, 0);
  h.emission = Matrix(3, 2, 0.5);
  EXPECT_THROW(h.validate(), ContractViolation);
  h = sample_hmm_params(2, 2, 1.0, 0);
  h.initial = {1.5, -0.5};
  EXPECT_THROW(h.validate(), ContractViolation);
}

TEST(HmmSample, SingleStateSingleSymbolIsAllZeros) {
  const Hmm h = sample_hmm_params(1, 1, 1.0, 0);
  const auto s = sample_sequence(h, 50, 3);
  EXPECT_EQ(s.observed, ObservedSequence(50, 0));
  EXPECT_EQ(s.latent, LatentSequence(50, 0));
}

TEST(HmmSample, DeterministicChainFollowsItsOrbit) {
  const auto s = sample_sequence(permutation_chain(), 7, 99);
  EXPECT_EQ(s.latent, (LatentSequence{0, 1, 2, 0, 1, 2, 0}));
  EXPECT_EQ(s.observed, (ObservedSequence{2, 0, 1, 2, 0, 1, 2}));
}

TEST(HmmSample, SameSeedSameSequence) {
  const Hmm h = sample_hmm_params(4, 6, 1.0, 5);
  const auto a = sample_sequence(h, 300, 11);
  const auto b = sample_sequence(h, 300, 11);
  EXPECT_EQ(a.observed, b.observed);
  EXPECT_EQ(a.latent, b.latent);
  EXPECT_NE(a.observed, sample_sequence(h, 300, 12).observed);
}

TEST(HmmSample, BigramFrequenciesMatchStationaryChain) {
  // Identity emissions so x is the chain itself.
  Hmm h;
  h.initial = {0.5, 0.5};
  h.transition = Matrix(2, 2);
  h.transition(0, 0) = 0.6, h.transition(0, 1) = 0.4;
  h.transition(1, 0) = 0.5, h.transition(1, 1) = 0.5;
  h.emission = Matrix(2, 2);
  h.emission(0, 0) = h.emission(1, 1) = 1.0;
  const std::size_t n = 1000000;
  const auto x = sample_sequence(h, n, 2024).observed;
  const auto pi = oracle::stationary(h.transition);
  // Second eigenvalue 0.1; widen sigma by the usual (1 + l) / (1 - l) autocorrelation factor.
  const double inflate = std::sqrt(1.1 / 0.9);
  double counts[2][2] = {};
  for (std::size_t t = 1; t < n; ++t) counts[x[t - 1]][x[t]] += 1.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double p = pi[i] * h.transition(i, j);
      const double sigma = inflate * std::sqrt(p * (1 - p) / (n - 1));
      EXPECT_NEAR(counts[i][j] / (n - 1), p, 3 * sigma) << i << "," << j;
    }
  }
}

TEST(Filter, InfoContentMatchesPathEnumeration) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto in = small_instance(seed, 4, 8);
    const double exact = -std::log2(oracle::marginal(in.hmm, in.x));
    const double got = info_content(in.hmm, in.x);
    ASSERT_LE(std::abs(got - exact), 1e-12 * std::max(1.0, std::abs(exact))) << "seed " << seed;
    EXPECT_NEAR(log_likelihood(in.hmm, in.x), -exact * std::log(2.0), 1e-10 * std::max(1.0, exact));
  }
}

TEST(Filter, StatesAreNormalizedAndInfoGrows) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto in = small_instance(seed, 6, 40);
    const auto states = filter_all(in.hmm, in.x);
    ASSERT_EQ(states.size(), in.x.size());
    double prev = 0.0;
    for (std::size_t t = 0; t < states.size(); ++t) {
      EXPECT_EQ(states[t].t, t + 1);
      double s = 0.0;
      for (double p : states[t].filtered) s += p;
      EXPECT_NEAR(s, 1.0, 1e-9);
      EXPECT_GE(states[t].info_bits, prev);
      prev = states[t].info_bits;
    }
  }
}

TEST(Filter, PriorStepEqualsInit) {
  const Hmm h = sample_hmm_params(3, 4, 1.0, 8);
  const auto a = filter_step(h, filter_prior(h), 2);
  const auto b = filter_init(h, 2);
  EXPECT_EQ(a.t, 1u);
  EXPECT_EQ(a.filtered, b.filtered);
  EXPECT_EQ(a.info_bits, b.info_bits);
}

TEST(Filter, ImpossibleSymbolIsZeroLikelihood) {
  EXPECT_THROW(filter_init(permutation_chain(), 0), ZeroLikelihood);
  EXPECT_THROW(filter_step(permutation_chain(), filter_init(permutation_chain(), 2), 2), ZeroLikelihood);
}

TEST(Predictive, SingleStateIsEmissionRow) {
  const Hmm h = sample_hmm_params(1, 5, 1.0, 4);
  auto fs = filter_prior(h);
  for (Symbol x : {0u, 3u, 1u}) {
    const auto p = predictive(h, fs);
    for (std::size_t v = 0; v < 5; ++v) EXPECT_NEAR(p[v], h.emission(0, v), 1e-15);
    fs = filter_step(h, fs, x);
  }
}

TEST(Predictive, UniformModelIsUniform) {
  Hmm h;
  h.initial = {0.5, 0.5};
  h.transition = Matrix(2, 2, 0.5);
  h.emission = Matrix(2, 4, 0.25);
  const auto fs = filter_step(h, filter_init(h, 1), 3);
  for (double p : predictive(h, fs)) EXPECT_NEAR(p, 0.25, 1e-15);
}

TEST(Predictive, MatchesPathEnumeration) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto in = small_instance(seed + 1000, 3, 5);
    auto fs = filter_prior(in.hmm);
    for (std::size_t t = 0; t <= in.x.size(); ++t) {
      const auto got = predictive(in.hmm, fs);
      const auto want = oracle::predictive(in.hmm, std::span(in.x).first(t));
      for (std::size_t v = 0; v < got.size(); ++v) ASSERT_NEAR(got[v], want[v], 1e-12) << "seed " << seed;
      if (t < in.x.size()) fs = filter_step(in.hmm, fs, in.x[t]);
    }
  }
}

TEST(Posterior, SingleStateIsPointMass) {
  const Hmm h = sample_hmm_params(1, 3, 1.0, 0);
  const auto fs = filter_init(h, 1);
  EXPECT_EQ(posterior_last(h, fs), std::vector<double>{1.0});
  EXPECT_EQ(posterior_step(h, fs, 0), std::vector<double>{1.0});
}

TEST(Posterior, OneStepUniformPriorIsProportionalToEmission) {
  Hmm h = sample_hmm_params(3, 4, 1.0, 6);
  h.initial = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto post = posterior_last(h, filter_init(h, 2));
  const double z = h.emission(0, 2) + h.emission(1, 2) + h.emission(2, 2);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(post[k], h.emission(k, 2) / z, 1e-15);
}

TEST(Posterior, UniformTransitionLeavesFilterUnchanged) {
  Hmm h = sample_hmm_params(4, 3, 1.0, 7);
  h.transition = Matrix(4, 4, 0.25);
  const auto fs = filter_step(h, filter_init(h, 0), 2);
  const auto post = posterior_step(h, fs, 1);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(post[k], fs.filtered[k], 1e-15);
}

TEST(Posterior, MatchesPathEnumeration) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto in = small_instance(seed + 2000, 3, 5);
    const auto states = filter_all(in.hmm, in.x);
    const std::size_t n = in.x.size();
    EXPECT_LE(oracle::total_variation(posterior_last(in.hmm, states.back()), oracle::posterior_last(in.hmm, in.x)),
              1e-12);
    for (std::size_t t = 1; t < n; ++t) {
      for (Symbol next = 0; next < in.hmm.states(); ++next) {
        const auto prefix = std::span(in.x).first(t);
        const auto want = oracle::posterior_step(in.hmm, prefix, next);
        if (!std::isfinite(want[0])) continue;  // z_{t+1} = next impossible given the prefix
        const auto got = posterior_step(in.hmm, states[t - 1], next);
        ASSERT_LE(oracle::total_variation(got, want), 1e-12) << "seed " << seed << " t " << t;
      }
    }
  }
}

TEST(Posterior, FactorsMultiplyToExactPathPosterior) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto in = small_instance(seed + 3000, 4, 6);
    const auto states = filter_all(in.hmm, in.x);
    const std::size_t n = in.x.size();
    const double px = oracle::marginal(in.hmm, in.x);
    double tv = 0.0;
    const auto last = posterior_last(in.hmm, states.back());
    oracle::for_each_path(in.hmm.states(), n, [&](const std::vector<Symbol>& z) {
      double q = last[z[n - 1]];
      for (std::size_t t = n - 1; t >= 1 && q > 0.0; --t) {
        q *= posterior_step(in.hmm, states[t - 1], z[t])[z[t - 1]];
      }
      tv += std::abs(q - oracle::joint(in.hmm, in.x, z) / px);
    });
    EXPECT_LE(0.5 * tv, 1e-10) << "seed " << seed;
  }
}
