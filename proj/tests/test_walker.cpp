#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rwpe/errors.hpp"
#include "rwpe/measurement_oracle.hpp"
#include "rwpe/random_stream.hpp"
#include "rwpe/walker.hpp"

using namespace rwpe;

namespace {

const double kE = std::numbers::e;

// Returns a scripted sequence of outcomes, then zeros.
class ScriptedOracle final : public MeasurementOracle {
 public:
  explicit ScriptedOracle(std::deque<int> bits) : bits_(std::move(bits)) {}
  Datum measure(const ExperimentParams& params) override {
    queries.push_back(params);
    if (bits_.empty()) return Datum::Zero;
    const int b = bits_.front();
    bits_.pop_front();
    return datum_from_int(b);
  }
  std::vector<ExperimentParams> queries;

 private:
  std::deque<int> bits_;
};

WalkerConfig basic(std::int64_t n_unwind) {
  WalkerConfig c;
  c.n_unwind = n_unwind;
  return c;
}

}  // namespace

TEST(WalkerConfig, DefaultsAreValid) {
  const WalkerConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.n_exp, 100);
  EXPECT_EQ(c.n_unwind, 2);
  EXPECT_EQ(c.tau_check, 0.01);
  EXPECT_EQ(c.max_total_experiments, 100000);
}

TEST(WalkerConfig, RejectsBadFields) {
  auto key_of = [](WalkerConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  WalkerConfig c;
  c.sigma0 = 0.0;
  EXPECT_EQ(key_of(c), "sigma0");
  c = {};
  c.n_unwind = -1;
  EXPECT_EQ(key_of(c), "n_unwind");
  c = {};
  c.tau_check = -0.5;
  EXPECT_EQ(key_of(c), "tau_check");
  c = {};
  c.n_exp = -3;
  EXPECT_EQ(key_of(c), "n_exp");
  c = {};
  c.max_total_experiments = 10;
  EXPECT_EQ(key_of(c), "max_total_experiments");
}

TEST(Step, DatumZeroMovesUp) {
  WalkerState s = WalkerState::initial(basic(0));
  ScriptedOracle oracle({0});
  step(s, oracle, basic(0));
  EXPECT_NEAR(s.gaussian.mu, 1.0 / std::sqrt(kE), 1e-15);
  EXPECT_NEAR(s.gaussian.sigma, std::sqrt((kE - 1.0) / kE), 1e-15);
  EXPECT_EQ(s.datum_stack, std::vector<bool>{false});
  EXPECT_EQ(s.total_count, 1);
  ASSERT_EQ(oracle.queries.size(), 1u);
  EXPECT_EQ(oracle.queries[0], optimal_experiment({0.0, 1.0}));
}

TEST(Step, DatumOneMovesDown) {
  WalkerState s = WalkerState::initial(basic(0));
  ScriptedOracle oracle({1});
  step(s, oracle, basic(0));
  EXPECT_NEAR(s.gaussian.mu, -1.0 / std::sqrt(kE), 1e-15);
  EXPECT_EQ(s.datum_stack, std::vector<bool>{true});
}

TEST(Step, TwoZeros) {
  WalkerState s = WalkerState::initial(basic(0));
  ScriptedOracle oracle({0, 0});
  step(s, oracle, basic(0));
  step(s, oracle, basic(0));
  // (1/√e)(1 + √((e−1)/e)) and (e−1)/e.
  EXPECT_NEAR(s.gaussian.mu, 1.0887589852336771, 1e-14);
  EXPECT_NEAR(s.gaussian.sigma, 0.6321205588285577, 1e-14);
}

TEST(Step, BudgetCharged) {
  WalkerConfig c = basic(0);
  c.n_exp = 1;
  c.max_total_experiments = 1;
  WalkerState s = WalkerState::initial(c);
  ScriptedOracle oracle({});
  step(s, oracle, c);
  EXPECT_THROW(step(s, oracle, c), BudgetExhausted);
  EXPECT_EQ(oracle.queries.size(), 1u);
}

TEST(Unwind, PassingCheckLeavesStateUnchanged) {
  WalkerConfig c = basic(1);
  WalkerState s = WalkerState::initial(c);
  ScriptedOracle oracle({0, 0});
  step(s, oracle, c);
  const GaussianState before = s.gaussian;
  const UnwindOutcome out = consistency_check_and_unwind(s, oracle, c);
  EXPECT_EQ(out.checks_performed, 1);
  EXPECT_EQ(out.steps_unwound, 0);
  EXPECT_EQ(s.gaussian, before);
  EXPECT_EQ(s.total_count, 2);
  EXPECT_EQ(oracle.queries.back(), check_experiment(before, c.tau_check));
}

TEST(Unwind, RestoresPreStepState) {
  WalkerConfig c = basic(1);
  WalkerState s = WalkerState::initial(c);
  ScriptedOracle oracle({0, 1, 0});
  step(s, oracle, c);
  const UnwindOutcome out = consistency_check_and_unwind(s, oracle, c);
  EXPECT_EQ(out.checks_performed, 2);
  EXPECT_EQ(out.steps_unwound, 1);
  EXPECT_NEAR(s.gaussian.mu, 0.0, 1e-15);
  EXPECT_NEAR(s.gaussian.sigma, 1.0, 1e-15);
  EXPECT_TRUE(s.datum_stack.empty());
  EXPECT_EQ(s.total_count, 3);
}

TEST(Unwind, UnconstrainedGrowsPastPrior) {
  WalkerConfig c = basic(1);
  WalkerState s = WalkerState::initial(c);
  ScriptedOracle oracle({1, 0});
  const UnwindOutcome out = consistency_check_and_unwind(s, oracle, c);
  EXPECT_FALSE(out.aborted_on_empty_stack);
  EXPECT_EQ(s.gaussian.mu, 0.0);
  EXPECT_NEAR(s.gaussian.sigma, std::sqrt(kE / (kE - 1.0)), 1e-15);
  EXPECT_EQ(out.steps_unwound, 1);
}

TEST(Unwind, ConstrainedAbortsOnEmptyStack) {
  WalkerConfig c = basic(2);
  c.unwind_mode = UnwindMode::ConstrainedToPrior;
  WalkerState s = WalkerState::initial(c);
  ScriptedOracle oracle({0, 1});
  step(s, oracle, c);
  const UnwindOutcome out = consistency_check_and_unwind(s, oracle, c);
  EXPECT_TRUE(out.aborted_on_empty_stack);
  EXPECT_EQ(out.steps_unwound, 1);
  EXPECT_EQ(out.checks_performed, 1);
  EXPECT_NEAR(s.gaussian.mu, 0.0, 1e-15);
  EXPECT_NEAR(s.gaussian.sigma, 1.0, 1e-15);
}

TEST(Unwind, UnconstrainedStepsAreMultiplesOfNUnwind) {
  WalkerConfig c = basic(3);
  WalkerState s = WalkerState::initial(c);
  ScriptedOracle oracle({0, 1, 1, 0});
  step(s, oracle, c);
  const UnwindOutcome out = consistency_check_and_unwind(s, oracle, c);
  EXPECT_EQ(out.steps_unwound, 6);
  EXPECT_EQ(out.checks_performed, 3);
  EXPECT_NEAR(s.gaussian.sigma, std::pow(kE / (kE - 1.0), 2.5), 1e-12);
}

TEST(Unwind, RequiresPositiveNUnwind) {
  WalkerState s = WalkerState::initial(basic(0));
  ScriptedOracle oracle({});
  EXPECT_THROW(consistency_check_and_unwind(s, oracle, basic(0)), std::invalid_argument);
}

TEST(Unwind, InverseProperty) {
  RandomStream rng(99);
  WalkerConfig c = basic(1);
  for (int trial = 0; trial < 2000; ++trial) {
    WalkerState s = WalkerState::initial(c);
    s.gaussian = {5.0 * rng.normal(), std::exp(4.0 * rng.normal())};
    const int depth = 1 + static_cast<int>(rng.uniform() * 20);
    std::deque<int> bits;
    for (int i = 0; i < depth; ++i) bits.push_back(rng.uniform() < 0.5);
    ScriptedOracle pre(bits);
    for (int i = 0; i < depth - 1; ++i) step(s, pre, c);
    const GaussianState before = s.gaussian;
    ScriptedOracle oracle({bits.back(), 1, 0});
    step(s, oracle, c);
    (void)consistency_check_and_unwind(s, oracle, c);
    const double scale = std::max(std::abs(before.mu), before.sigma);
    ASSERT_NEAR(s.gaussian.mu, before.mu, 1e-12 * scale);
    ASSERT_NEAR(s.gaussian.sigma / before.sigma, 1.0, 1e-12);
  }
}

TEST(Run, ZeroExperimentsReturnsPriorMean) {
  WalkerConfig c;
  c.n_exp = 0;
  c.mu0 = 0.4;
  ScriptedOracle oracle({});
  const WalkResult r = run(c, oracle);
  EXPECT_EQ(r.estimate, 0.4);
  EXPECT_TRUE(r.data.empty());
  EXPECT_FALSE(r.budget_exhausted);
}

TEST(Run, VarianceLadderWithoutChecks) {
  WalkerConfig c = basic(0);
  SimulatedOracle oracle(0.3, 12);
  const WalkResult r = run(c, oracle);
  EXPECT_EQ(r.final_state.accepted_count(), 100);
  EXPECT_EQ(r.final_state.total_count, 100);
  EXPECT_NEAR(r.final_state.gaussian.sigma / std::pow((kE - 1.0) / kE, 50.0), 1.0, 1e-12);
  EXPECT_NEAR(r.final_state.gaussian.sigma, 1.0964675e-10, 1e-16);
}

TEST(Run, VarianceLadderEveryStep) {
  WalkerConfig c = basic(0);
  c.n_exp = 40;
  c.sigma0 = 0.25;
  WalkerState s = WalkerState::initial(c);
  SimulatedOracle oracle(0.0, 1);
  for (int k = 1; k <= 40; ++k) {
    step(s, oracle, c);
    ASSERT_NEAR(s.gaussian.sigma / (0.25 * std::pow(kContraction, k)), 1.0, 1e-13);
  }
}

TEST(Run, RangeBoundWithoutChecks) {
  WalkerConfig c = basic(0);
  c.mu0 = 1.0;
  c.sigma0 = 0.5;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SimulatedOracle oracle(100.0 * (seed % 2 ? 1 : -1), seed);
    const WalkResult r = run(c, oracle);
    ASSERT_LE(std::abs(r.estimate - c.mu0), c.sigma0 * walk_range() * (1 + 1e-12));
  }
  // All-zero data approaches the bound from below.
  ScriptedOracle zeros({});
  const WalkResult r = run(c, zeros);
  EXPECT_GT(r.estimate - c.mu0, 0.99999 * c.sigma0 * walk_range());
}

TEST(Run, WalkRangeValue) {
  EXPECT_NEAR(walk_range(), 1.0 / (std::sqrt(kE) - std::sqrt(kE - 1.0)), 1e-15);
  EXPECT_NEAR(walk_range(), 2.9595537651, 1e-9);
}

TEST(Run, RecordsEveryMeasurementInOrder) {
  WalkerConfig c = basic(1);
  c.n_exp = 2;
  // step 0 | check fails | check passes | step 0 | check passes | step 1 | check passes
  ScriptedOracle oracle({0, 1, 0, 0, 0, 1, 0});
  const WalkResult r = run(c, oracle);
  ASSERT_EQ(r.data.size(), 7u);
  const std::vector<DataRole> roles = {DataRole::Unwound, DataRole::Check,   DataRole::Check,
                                       DataRole::Accepted, DataRole::Check, DataRole::Accepted,
                                       DataRole::Check};
  for (std::size_t i = 0; i < roles.size(); ++i) {
    EXPECT_EQ(r.data[i].role, roles[i]) << i;
    EXPECT_EQ(r.data[i].params, oracle.queries[i]) << i;
  }
  EXPECT_EQ(r.final_state.total_count, 7);
  EXPECT_EQ(r.final_state.checks_performed, 4);
  EXPECT_EQ(r.final_state.steps_unwound, 1);
}

TEST(Run, ReplayReproducesBitForBit) {
  WalkerConfig c;
  c.tau_check = 1.0;
  SimulatedOracle sim(0.8, 31337);
  const WalkResult first = run(c, sim);
  std::vector<ReplayEntry> record;
  for (const RecordedDatum& e : first.data) record.push_back({e.params, e.datum});
  ReplayOracle replay(record);
  const WalkResult second = run(c, replay);
  EXPECT_EQ(first.final_state.gaussian, second.final_state.gaussian);
  EXPECT_EQ(first.estimate, second.estimate);
  EXPECT_EQ(replay.remaining(), 0u);
}

TEST(Run, BudgetExhaustionIsReported) {
  WalkerConfig c = basic(1);
  c.n_exp = 10;
  c.max_total_experiments = 15;
  // Every check fails, so the walker never gets past the prior.
  class AlwaysOne final : public MeasurementOracle {
    Datum measure(const ExperimentParams&) override { return Datum::One; }
  } oracle;
  const WalkResult r = run(c, oracle);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_EQ(r.final_state.total_count, 15);
  EXPECT_EQ(r.estimate, r.final_state.gaussian.mu);
}

TEST(Run, StackNeverExceedsNExp) {
  WalkerConfig c;
  c.tau_check = 1.0;
  c.n_exp = 30;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SimulatedOracle oracle(sample_true_omega({0.0, 1.0}, seed), seed + 1000);
    const WalkResult r = run(c, oracle);
    ASSERT_LE(r.final_state.datum_stack.size(), 30u);
  }
}
