#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rwpe/bayes_oracle.hpp"
#include "rwpe/errors.hpp"
#include "rwpe/gaussian.hpp"

using namespace rwpe;

TEST(BayesOracle, OptimalExperimentAgreesWithOptimalUpdate) {
  const GaussianState prior{0.0, 1.0};
  for (Datum d : {Datum::Zero, Datum::One}) {
    const GaussianState exact = bayes_oracle(prior, d, optimal_experiment(prior));
    const GaussianState fast = update_optimal(prior, d);
    EXPECT_NEAR(exact.mu, fast.mu, 1e-6);
    EXPECT_NEAR(exact.sigma, fast.sigma, 1e-6);
  }
}

// 30-digit reference moments (mpmath adaptive quadrature).
TEST(BayesOracle, MatchesHighPrecisionReference) {
  const GaussianState g = bayes_oracle({0.0, 1.0}, Datum::One, {3.0, 1.0});
  EXPECT_NEAR(g.mu, -0.0046519437876465309811, 1e-10);
  EXPECT_NEAR(g.sigma, 0.94977611985285485739, 1e-10);

  const GaussianState h = bayes_oracle({0.0, 1.0}, Datum::One, {2.0, 0.3});
  EXPECT_NEAR(h.mu, -0.17204951818701828642, 1e-10);
  EXPECT_NEAR(h.sigma, 1.2138233521204906336, 1e-10);
}

TEST(BayesOracle, TinySigmaKeepsPrecision) {
  const GaussianState prior{1.25, 1e-9};
  const GaussianState g = bayes_oracle(prior, Datum::Zero, optimal_experiment(prior));
  EXPECT_NEAR((g.mu - prior.mu) / prior.sigma, 1.0 / std::sqrt(std::numbers::e), 1e-6);
  EXPECT_NEAR(g.sigma / prior.sigma, kContraction, 1e-6);
}

TEST(BayesOracle, AgreesWithUpdateGeneralOnCoarseGrid) {
  for (double t : {0.1, 0.55, 1.0, 1.5}) {
    for (double w : {-3.0, -1.0, 0.0, 0.7, 2.9}) {
      for (Datum d : {Datum::Zero, Datum::One}) {
        const GaussianState prior{-0.4, 0.3};
        const ExperimentParams p{t / prior.sigma, prior.mu + w * prior.sigma};
        const GaussianState exact = bayes_oracle(prior, d, p);
        const GaussianState closed = update_general(prior, d, p);
        EXPECT_NEAR(exact.mu, closed.mu, 1e-7) << "t=" << t << " w=" << w;
        EXPECT_NEAR(exact.sigma, closed.sigma, 1e-7) << "t=" << t << " w=" << w;
      }
    }
  }
}

TEST(BayesOracle, ThrowsOnVanishingNormalizer) {
  EXPECT_THROW((void)bayes_oracle({0.0, 1.0}, Datum::One, {1e-9, 0.0}), QuadratureFailure);
}
