#include "rwpe/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iomanip>
#include <sstream>

#include "rwpe/errors.hpp"
#include "rwpe/parallel.hpp"
#include "rwpe/random_stream.hpp"
#include "rwpe/record_io.hpp"

#ifndef RWPE_VERSION_STRING
#define RWPE_VERSION_STRING "unknown"
#endif

namespace rwpe {

using nlohmann::ordered_json;

std::string code_version() { return RWPE_VERSION_STRING; }

std::vector<PfTrial> pf_replay(std::span<const TrialRecord> records, const GaussianState& prior,
                               const LiuWestConfig& pf, unsigned threads) {
  std::vector<PfTrial> out(records.size());
  parallel_for(records.size(), threads, [&](std::size_t i) {
    const TrialRecord& r = records[i];
    RandomStream rng(stream_seed(r.seed, TrialStream::ParticleFilter));
    const PfResult result = pf_run(r.data, prior, pf, rng);
    const double diff = result.estimate - r.true_omega;
    out[i] = {r.index, r.true_omega, result.estimate, diff * diff, result.failed, result.resamples};
  });
  return out;
}

namespace {

std::string format_tau(double tau) {
  std::ostringstream os;
  os << tau;
  return os.str();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

class SuiteRunner {
 public:
  SuiteRunner(const SuiteConfig& config, std::ostream& log) : config_(config), log_(log) {}

  void run() {
    std::filesystem::create_directories(config_.output_dir);
    switch (config_.suite) {
      case SuiteKind::SingleTrial:
        prior_ensemble("single", config_.walker, 1);
        break;
      case SuiteKind::LossHistogram:
        for (std::int64_t n_unwind : {0, 1, 2}) {
          WalkerConfig w = config_.walker;
          w.n_unwind = n_unwind;
          prior_ensemble("unwind" + std::to_string(n_unwind), w, config_.n_trials);
        }
        break;
      case SuiteKind::HeisenbergScaling:
        heisenberg_scaling();
        break;
      case SuiteKind::RiskProfile:
        risk_profile();
        break;
      case SuiteKind::PfComparison:
        pf_comparison();
        break;
    }
    write_metadata();
  }

 private:
  std::vector<TrialRecord> prior_ensemble(const std::string& tag, const WalkerConfig& walker,
                                          std::size_t n_trials, bool retain_data = false) {
    EnsembleOptions options;
    options.keep_data = config_.record_data || retain_data;
    return stream_ensemble(
        tag, walker, n_trials,
        [&](std::size_t i) { return run_trial(walker, config_.master_seed, i, options); }, retain_data);
  }

  // Runs the trials in chunks and appends each chunk to the record file as it
  // completes, so memory stays bounded even when every trial logs 10^5
  // measurements. Returned records keep their data only if `retain_data`.
  std::vector<TrialRecord> stream_ensemble(const std::string& tag, const WalkerConfig& walker,
                                           std::size_t n_trials,
                                           const std::function<TrialRecord(std::size_t)>& trial,
                                           bool retain_data) {
    constexpr std::size_t kChunk = 256;
    const std::string records_name = "records_" + tag + ".ndjson";
    const std::filesystem::path path = config_.output_dir / records_name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");

    std::vector<TrialRecord> records;
    records.reserve(n_trials);
    std::vector<TrialRecord> chunk;
    for (std::size_t start = 0; start < n_trials; start += kChunk) {
      chunk.assign(std::min(kChunk, n_trials - start), TrialRecord{});
      parallel_for(chunk.size(), config_.threads, [&](std::size_t i) { chunk[i] = trial(start + i); });
      for (TrialRecord& r : chunk) {
        if (config_.record_data) {
          out << to_json(r).dump() << '\n';
        } else {
          std::vector<RecordedDatum> data = std::move(r.data);
          r.data.clear();
          out << to_json(r).dump() << '\n';
          if (retain_data) r.data = std::move(data);
        }
        if (!retain_data) r.data = {};
        records.push_back(std::move(r));
      }
      if (!out) throw IoError("write failed for " + path.string());
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());

    const std::string summary_name = "summary_" + tag + ".json";
    const RiskSummary summary = summarize(records);
    write_json_file(config_.output_dir / summary_name, summary_document(summary, walker.n_exp));
    ensembles_.push_back({{"tag", tag},
                          {"records", records_name},
                          {"summary", summary_name},
                          {"n_trials", records.size()},
                          {"n_exp", walker.n_exp},
                          {"n_unwind", walker.n_unwind},
                          {"tau_check", walker.tau_check},
                          {"unwind_mode", std::string(to_string(walker.unwind_mode))}});
    log_ << tag << ": trials=" << records.size() << " mean_loss=" << sci(summary.bayes_risk)
         << " median_loss=" << sci(summary.median_loss)
         << " budget_exhausted=" << summary.budget_exhausted << '\n';
    return records;
  }

  void heisenberg_scaling() {
    ordered_json rows = ordered_json::array();
    for (std::int64_t n_unwind : {0, 1, 2, 3}) {
      for (std::int64_t n_exp : {25, 50, 75, 100}) {
        WalkerConfig w = config_.walker;
        w.n_unwind = n_unwind;
        w.n_exp = n_exp;
        const std::string tag = "unwind" + std::to_string(n_unwind) + "_nexp" + std::to_string(n_exp);
        const RiskSummary s = summarize(prior_ensemble(tag, w, config_.n_trials));
        const double bound = van_trees_bound(n_exp);
        rows.push_back({{"n_unwind", n_unwind},
                        {"n_exp", n_exp},
                        {"mean_loss", s.bayes_risk},
                        {"median_loss", s.median_loss},
                        {"van_trees_bound", bound},
                        {"mean_over_bound", s.bayes_risk / bound}});
      }
    }
    write_json_file(config_.output_dir / "scaling.json",
                    {{"schema", std::string(kSummarySchema) + "+scaling"}, {"rows", std::move(rows)}});
    extra_files_.push_back("scaling.json");
  }

  void risk_profile() {
    const auto grid = uniform_grid(config_.profile.max_abs_omega, config_.profile.points);
    const std::size_t per_point = config_.profile.trials_per_point;
    for (UnwindMode mode : {UnwindMode::Unconstrained, UnwindMode::ConstrainedToPrior}) {
      WalkerConfig w = config_.walker;
      w.unwind_mode = mode;
      stream_ensemble(
          std::string(to_string(mode)), w, grid.size() * per_point,
          [&](std::size_t i) {
            return run_trial_at(w, grid[i / per_point], config_.master_seed, i, config_.record_data);
          },
          false);
    }
  }

  void pf_comparison() {
    const LiuWestConfig& pf = *config_.pf;
    for (double tau : {0.01, 1.0}) {
      WalkerConfig w = config_.walker;
      w.tau_check = tau;
      const std::string tag = "tau" + format_tau(tau);
      const auto records = prior_ensemble(tag, w, config_.n_trials, /*retain_data=*/true);
      const auto pf_trials = pf_replay(records, w.prior(), pf, config_.threads);

      const std::string pf_name = "pf_" + tag + ".ndjson";
      std::vector<TrialRecord> as_records;
      as_records.reserve(pf_trials.size());
      {
        std::ofstream out(config_.output_dir / pf_name, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + (config_.output_dir / pf_name).string() + " for writing");
        for (std::size_t i = 0; i < pf_trials.size(); ++i) {
          const PfTrial& t = pf_trials[i];
          ordered_json line = {{"schema", std::string(kPfTrialSchema)},
                               {"index", t.index},
                               {"seed", records[i].seed},
                               {"true_omega", t.true_omega},
                               {"estimate", t.estimate},
                               {"quadratic_loss", t.quadratic_loss},
                               {"log10_loss", log10_loss(t.quadratic_loss)},
                               {"failed", t.failed},
                               {"resamples", t.resamples}};
          out << line.dump() << '\n';
          TrialRecord r;
          r.index = t.index;
          r.seed = records[i].seed;
          r.true_omega = t.true_omega;
          r.estimate = t.estimate;
          r.quadratic_loss = t.quadratic_loss;
          r.log10_loss = log10_loss(t.quadratic_loss);
          if (t.failed) r.error = "zero posterior";
          as_records.push_back(std::move(r));
        }
        if (!out) throw IoError("write failed for " + (config_.output_dir / pf_name).string());
      }
      const RiskSummary rwpe_summary = summarize(records);
      const RiskSummary pf_summary = summarize(as_records);
      const std::string pf_summary_name = "pf_summary_" + tag + ".json";
      ordered_json doc = summary_document(pf_summary, w.n_exp);
      doc["n_particles"] = pf.n_particles;
      doc["a"] = pf.a;
      doc["resample_threshold"] = pf.resample_threshold;
      doc["rwpe_median_loss"] = rwpe_summary.median_loss;
      doc["median_ratio_pf_over_rwpe"] = pf_summary.median_loss / rwpe_summary.median_loss;
      write_json_file(config_.output_dir / pf_summary_name, doc);
      extra_files_.push_back(pf_name);
      extra_files_.push_back(pf_summary_name);
      log_ << tag << ": pf median_loss=" << sci(pf_summary.median_loss)
           << " ratio pf/rwpe=" << sci(pf_summary.median_loss / rwpe_summary.median_loss) << '\n';
    }
  }

  void write_metadata() {
    ordered_json doc = {{"schema", std::string(kMetadataSchema)},
                        {"code_version", code_version()},
                        {"rng_algorithm", std::string(RandomStream::kAlgorithm)},
                        {"master_seed", config_.master_seed},
                        {"config", to_json(config_)},
                        {"ensembles", ensembles_},
                        {"extra_files", extra_files_}};
    write_json_file(config_.output_dir / "metadata.json", doc);
  }

  const SuiteConfig& config_;
  std::ostream& log_;
  ordered_json ensembles_ = ordered_json::array();
  std::vector<std::string> extra_files_;
};

/// Answers from a fixed bit pattern, cycling; isolates walker cost from
/// simulation cost.
class PatternOracle final : public MeasurementOracle {
 public:
  explicit PatternOracle(std::vector<Datum> bits) : bits_(std::move(bits)) {}
  Datum measure(const ExperimentParams&) override {
    const Datum d = bits_[cursor_];
    cursor_ = (cursor_ + 1) % bits_.size();
    return d;
  }

 private:
  std::vector<Datum> bits_;
  std::size_t cursor_ = 0;
};

template <typename Body>
double median_ns_per_call(std::size_t batches, std::size_t calls, Body&& body) {
  std::vector<double> per_call;
  per_call.reserve(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < calls; ++i) body(i);
    const auto stop = std::chrono::steady_clock::now();
    per_call.push_back(std::chrono::duration<double, std::nano>(stop - start).count() /
                       static_cast<double>(calls));
  }
  return median(std::move(per_call));
}

}  // namespace

int run_suite(const SuiteConfig& config, std::ostream& log) {
  try {
    config.validate();
    SuiteRunner(config, log).run();
    return 0;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

UpdateLatency bench_updates(std::size_t batches, std::size_t calls_per_batch) {
  UpdateLatency latency;
  latency.batches = batches;
  latency.calls_per_batch = calls_per_batch;

  RandomStream rng(0x5eed);
  std::vector<Datum> bits(4096);
  for (Datum& d : bits) d = rng.uniform() < 0.5 ? Datum::Zero : Datum::One;

  // Restart from the prior every 64 updates so σ stays well inside range.
  constexpr std::size_t kRestart = 64;
  GaussianState g{0.0, 1.0};
  volatile double sink = 0.0;
  latency.update_optimal_ns = median_ns_per_call(batches, calls_per_batch, [&](std::size_t i) {
    if (i % kRestart == 0) g = {0.0, 1.0};
    g = update_optimal(g, bits[i % bits.size()]);
    sink = g.mu;
  });

  WalkerConfig config;
  config.n_exp = static_cast<std::int64_t>(kRestart);
  config.max_total_experiments = std::numeric_limits<std::int64_t>::max();
  PatternOracle oracle(bits);
  WalkerState state = WalkerState::initial(config);
  latency.step_ns = median_ns_per_call(batches, calls_per_batch, [&](std::size_t) {
    if (state.accepted_count() == config.n_exp) {
      state.gaussian = config.prior();
      state.datum_stack.clear();
    }
    step(state, oracle, config);
    sink = state.gaussian.mu;
  });
  (void)sink;
  return latency;
}

}  // namespace rwpe
