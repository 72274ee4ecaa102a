#include "rwpe/walker.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rwpe/errors.hpp"

namespace rwpe {

std::string_view to_string(UnwindMode mode) noexcept {
  return mode == UnwindMode::Unconstrained ? "unconstrained" : "constrained";
}

std::string_view to_string(DataRole role) noexcept {
  switch (role) {
    case DataRole::Accepted:
      return "accepted";
    case DataRole::Check:
      return "check";
    case DataRole::Unwound:
      return "unwound";
  }
  return "accepted";
}

void WalkerConfig::validate() const {
  if (!std::isfinite(mu0)) throw ConfigError("mu0", "must be finite");
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throw ConfigError("sigma0", "must be finite and > 0");
  }
  if (n_exp < 0) throw ConfigError("n_exp", "must be >= 0");
  if (!(tau_check > 0.0) || !std::isfinite(tau_check)) {
    throw ConfigError("tau_check", "must be finite and > 0");
  }
  if (n_unwind < 0) throw ConfigError("n_unwind", "must be >= 0");
  if (max_total_experiments < 1) {
    throw ConfigError("max_total_experiments", "must be >= 1");
  }
  if (max_total_experiments < n_exp) {
    throw ConfigError("max_total_experiments", "must be >= n_exp");
  }
}

WalkerState WalkerState::initial(const WalkerConfig& config) {
  WalkerState state;
  state.gaussian = config.prior();
  state.datum_stack.reserve(static_cast<std::size_t>(config.n_exp));
  return state;
}

void DataLog::record_accepted(const ExperimentParams& params, Datum d) {
  open_accepted_.push_back(entries_.size());
  entries_.push_back({params, d, DataRole::Accepted});
}

void DataLog::record_check(const ExperimentParams& params, Datum d) {
  entries_.push_back({params, d, DataRole::Check});
}

void DataLog::mark_last_accepted_unwound() {
  if (open_accepted_.empty()) return;
  entries_[open_accepted_.back()].role = DataRole::Unwound;
  open_accepted_.pop_back();
}

namespace {

void charge_measurement(WalkerState& state, const WalkerConfig& config) {
  if (state.total_count >= config.max_total_experiments) {
    throw BudgetExhausted("measurement budget of " + std::to_string(config.max_total_experiments) +
                          " exhausted");
  }
  ++state.total_count;
}

Datum run_check(WalkerState& state, MeasurementOracle& oracle, const WalkerConfig& config,
                DataLog* log) {
  charge_measurement(state, config);
  const ExperimentParams params = check_experiment(state.gaussian, config.tau_check);
  const Datum d = oracle.measure(params);
  ++state.checks_performed;
  if (log != nullptr) log->record_check(params, d);
  return d;
}

}  // namespace

void step(WalkerState& state, MeasurementOracle& oracle, const WalkerConfig& config, DataLog* log) {
  charge_measurement(state, config);
  const ExperimentParams params = optimal_experiment(state.gaussian);
  const Datum d = oracle.measure(params);
  state.datum_stack.push_back(d == Datum::One);
  state.gaussian = update_optimal(state.gaussian, d);
  if (log != nullptr) log->record_accepted(params, d);
}

UnwindOutcome consistency_check_and_unwind(WalkerState& state, MeasurementOracle& oracle,
                                           const WalkerConfig& config, DataLog* log) {
  if (config.n_unwind <= 0) {
    throw std::invalid_argument("consistency_check_and_unwind requires n_unwind > 0");
  }
  const std::int64_t checks_before = state.checks_performed;
  const std::int64_t unwound_before = state.steps_unwound;
  UnwindOutcome outcome;

  Datum verdict = run_check(state, oracle, config, log);
  while (verdict == Datum::One) {
    for (std::int64_t i = 0; i < config.n_unwind; ++i) {
      if (state.datum_stack.empty() && config.unwind_mode == UnwindMode::ConstrainedToPrior) {
        outcome.aborted_on_empty_stack = true;
        break;
      }
      state.gaussian.sigma /= kContraction;
      if (!state.datum_stack.empty()) {
        const Datum d = state.datum_stack.back() ? Datum::One : Datum::Zero;
        state.datum_stack.pop_back();
        state.gaussian.mu -= parity(d) * state.gaussian.sigma * kMeanStep;
        if (log != nullptr) log->mark_last_accepted_unwound();
      }
      ++state.steps_unwound;
    }
    if (outcome.aborted_on_empty_stack) break;
    verdict = run_check(state, oracle, config, log);
  }

  outcome.checks_performed = state.checks_performed - checks_before;
  outcome.steps_unwound = state.steps_unwound - unwound_before;
  return outcome;
}

WalkResult run(const WalkerConfig& config, MeasurementOracle& oracle) {
  config.validate();
  WalkResult result;
  result.final_state = WalkerState::initial(config);
  WalkerState& state = result.final_state;
  DataLog log;
  try {
    while (state.accepted_count() < config.n_exp) {
      step(state, oracle, config, &log);
      if (config.n_unwind > 0) consistency_check_and_unwind(state, oracle, config, &log);
    }
  } catch (const BudgetExhausted&) {
    result.budget_exhausted = true;
  }
  result.estimate = state.gaussian.mu;
  result.data = std::move(log).entries();
  return result;
}

double walk_range() noexcept {
  return 1.0 / (std::sqrt(std::numbers::e) - std::sqrt(std::numbers::e - 1.0));
}

}  // namespace rwpe
