// rwpe: random-walk phase estimation experiment runner.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rwpe/errors.hpp"
#include "rwpe/record_io.hpp"
#include "rwpe/risk.hpp"
#include "rwpe/suite.hpp"
#include "rwpe/suite_config.hpp"

namespace {

template <typename T>
void set_if(std::optional<T>& target, const CLI::Option* option, const T& value) {
  if (option->count() > 0) target = value;
}

int resummarize(const std::string& path, std::int64_t n_exp) {
  const auto records = rwpe::read_records_file(path);
  std::cout << rwpe::summary_document(rwpe::summarize(records), n_exp).dump(2) << '\n';
  return 0;
}

int bench(std::size_t batches) {
  const rwpe::UpdateLatency latency = rwpe::bench_updates(batches);
  std::printf("update_optimal: %.2f ns/update (median of %zu batches x %zu)\n",
              latency.update_optimal_ns, latency.batches, latency.calls_per_batch);
  std::printf("step:           %.2f ns/update (median of %zu batches x %zu)\n", latency.step_ns,
              latency.batches, latency.calls_per_batch);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-walk Bayesian phase estimation: simulation suites and benchmarks"};

  std::string suite;
  std::string config_path;
  std::int64_t n_trials = 0;
  std::int64_t n_exp = 0;
  std::int64_t n_unwind = 0;
  double tau_check = 0.0;
  std::string unwind_mode;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::int64_t pf_particles = 0;
  std::int64_t threads = 0;
  std::size_t bench_batches = 200;
  std::string resummarize_path;

  auto* o_suite = app.add_option("--suite", suite,
                                 "loss_histogram | pf_comparison | heisenberg_scaling | risk_profile | single_trial");
  app.add_option("--config", config_path, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  auto* o_trials = app.add_option("--n-trials", n_trials, "trials per ensemble");
  auto* o_nexp = app.add_option("--n-exp", n_exp, "accepted experiments per trial");
  auto* o_unwind = app.add_option("--n-unwind", n_unwind, "unwinding steps per failed check (0 disables checks)");
  auto* o_tau = app.add_option("--tau-check", tau_check, "consistency check scale");
  auto* o_mode = app.add_option("--unwind-mode", unwind_mode, "unconstrained | constrained");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_pf = app.add_option("--pf-particles", pf_particles, "particles for the Liu-West baseline");
  auto* o_threads = app.add_option("--threads", threads, "worker threads (0 = all cores)");
  auto* o_no_data = app.add_flag("--no-record-data", "omit per-measurement data from record files");
  auto* o_bench = app.add_flag("--bench-updates", "time update_optimal and step, then exit");
  app.add_option("--bench-batches", bench_batches, "timing batches for --bench-updates");
  auto* o_resum = app.add_option("--resummarize", resummarize_path,
                                 "recompute a summary document from a records file and print it");

  CLI11_PARSE(app, argc, argv);

  try {
    if (o_bench->count() > 0) return bench(bench_batches);
    if (o_resum->count() > 0) return resummarize(resummarize_path, o_nexp->count() > 0 ? n_exp : 100);

    nlohmann::json document = nlohmann::json::object();
    if (!config_path.empty()) document = rwpe::read_json_file(config_path);

    rwpe::ConfigOverrides overrides;
    set_if(overrides.suite, o_suite, suite);
    set_if(overrides.n_trials, o_trials, n_trials);
    set_if(overrides.n_exp, o_nexp, n_exp);
    set_if(overrides.n_unwind, o_unwind, n_unwind);
    set_if(overrides.tau_check, o_tau, tau_check);
    set_if(overrides.unwind_mode, o_mode, unwind_mode);
    set_if(overrides.seed, o_seed, seed);
    set_if(overrides.output_dir, o_out, out_dir);
    set_if(overrides.pf_particles, o_pf, pf_particles);
    set_if(overrides.threads, o_threads, threads);
    if (o_no_data->count() > 0) overrides.record_data = false;

    const rwpe::SuiteConfig config = rwpe::parse_config(rwpe::apply_overrides(document, overrides));
    return rwpe::run_suite(config, std::cerr);
  } catch (const rwpe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const rwpe::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
