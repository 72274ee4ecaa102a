#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwpe/record_io.hpp"
#include "rwpe/suite.hpp"

using namespace rwpe;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rwpe_suite_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(RunSuite, SingleTrialWritesAllFiles) {
  SuiteConfig c;
  c.output_dir = fresh_dir("single");
  c.master_seed = 5;
  std::ostringstream log;
  ASSERT_EQ(run_suite(c, log), 0) << log.str();
  for (const char* f : {"records_single.ndjson", "summary_single.json", "metadata.json"}) {
    EXPECT_TRUE(std::filesystem::exists(c.output_dir / f)) << f;
  }
  const auto meta = read_json_file(c.output_dir / "metadata.json");
  EXPECT_EQ(meta.at("schema"), kMetadataSchema);
  EXPECT_EQ(meta.at("master_seed"), 5);
  EXPECT_EQ(meta.at("code_version"), code_version());
  EXPECT_EQ(meta.at("config").at("walker").at("n_exp"), 100);
}

TEST(RunSuite, RecordFilesAreDeterministic) {
  SuiteConfig c;
  c.suite = SuiteKind::LossHistogram;
  c.n_trials = 20;
  c.master_seed = 8;
  c.output_dir = fresh_dir("det_a");
  std::ostringstream log;
  ASSERT_EQ(run_suite(c, log), 0);
  SuiteConfig d = c;
  d.output_dir = fresh_dir("det_b");
  d.threads = 3;
  ASSERT_EQ(run_suite(d, log), 0);
  for (const char* f : {"records_unwind0.ndjson", "records_unwind1.ndjson", "records_unwind2.ndjson",
                        "summary_unwind2.json"}) {
    EXPECT_EQ(slurp(c.output_dir / f), slurp(d.output_dir / f)) << f;
  }
}

TEST(RunSuite, SummariesRecomputeFromRecords) {
  SuiteConfig c;
  c.suite = SuiteKind::LossHistogram;
  c.n_trials = 15;
  c.output_dir = fresh_dir("recompute");
  std::ostringstream log;
  ASSERT_EQ(run_suite(c, log), 0);
  for (const char* tag : {"unwind0", "unwind1", "unwind2"}) {
    const auto records = read_records_file(c.output_dir / (std::string("records_") + tag + ".ndjson"));
    const auto emitted = read_json_file(c.output_dir / (std::string("summary_") + tag + ".json"));
    EXPECT_EQ(nlohmann::json::parse(summary_document(summarize(records), 100).dump()), emitted) << tag;
  }
}

TEST(RunSuite, PfComparisonSmall) {
  SuiteConfig c;
  c.suite = SuiteKind::PfComparison;
  c.pf = LiuWestConfig{};
  c.pf->n_particles = 200;
  c.n_trials = 4;
  c.walker.n_exp = 20;
  c.output_dir = fresh_dir("pf");
  std::ostringstream log;
  ASSERT_EQ(run_suite(c, log), 0) << log.str();
  for (const char* tag : {"tau0.01", "tau1"}) {
    const auto summary = read_json_file(c.output_dir / (std::string("pf_summary_") + tag + ".json"));
    EXPECT_EQ(summary.at("n_trials"), 4);
    EXPECT_EQ(summary.at("n_particles"), 200);
    EXPECT_TRUE(summary.contains("median_ratio_pf_over_rwpe"));
    EXPECT_TRUE(std::filesystem::exists(c.output_dir / (std::string("pf_") + tag + ".ndjson")));
  }
}

TEST(RunSuite, HeisenbergAndProfileSmall) {
  SuiteConfig c;
  c.suite = SuiteKind::HeisenbergScaling;
  c.n_trials = 3;
  c.output_dir = fresh_dir("heis");
  std::ostringstream log;
  ASSERT_EQ(run_suite(c, log), 0) << log.str();
  const auto scaling = read_json_file(c.output_dir / "scaling.json");
  EXPECT_EQ(scaling.at("rows").size(), 16u);

  SuiteConfig p;
  p.suite = SuiteKind::RiskProfile;
  p.profile = {3.0, 4, 2};
  p.walker.n_exp = 10;
  p.output_dir = fresh_dir("profile");
  ASSERT_EQ(run_suite(p, log), 0) << log.str();
  const auto s = read_json_file(p.output_dir / "summary_constrained.json");
  EXPECT_EQ(s.at("risk_profile").size(), 4u);
}

TEST(RunSuite, ConfigAndIoFailuresAreNonzero) {
  std::ostringstream log;
  SuiteConfig bad;
  bad.suite = SuiteKind::PfComparison;
  EXPECT_EQ(run_suite(bad, log), 2);
  EXPECT_NE(log.str().find("pf"), std::string::npos);

  const auto blocker = fresh_dir("blocker");
  std::ofstream(blocker) << "not a directory";
  SuiteConfig io;
  io.output_dir = blocker / "sub";
  log.str("");
  EXPECT_EQ(run_suite(io, log), 3);
  EXPECT_NE(log.str().find("rwpe_suite_blocker"), std::string::npos) << log.str();
}

TEST(BenchUpdates, ReportsPositiveLatencies) {
  const UpdateLatency l = bench_updates(5, 200);
  EXPECT_GT(l.update_optimal_ns, 0.0);
  EXPECT_GT(l.step_ns, 0.0);
  EXPECT_EQ(l.batches, 5u);
}

TEST(RunSuite, RecordDataSwitch) {
  SuiteConfig c;
  c.suite = SuiteKind::LossHistogram;
  c.n_trials = 10;
  c.output_dir = fresh_dir("with_data");
  std::ostringstream log;
  ASSERT_EQ(run_suite(c, log), 0);
  SuiteConfig slim = c;
  slim.record_data = false;
  slim.output_dir = fresh_dir("without_data");
  ASSERT_EQ(run_suite(slim, log), 0);

  const auto full = read_records_file(c.output_dir / "records_unwind2.ndjson");
  const auto bare = read_records_file(slim.output_dir / "records_unwind2.ndjson");
  ASSERT_EQ(full.size(), bare.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    EXPECT_FALSE(full[i].data.empty());
    EXPECT_TRUE(bare[i].data.empty());
    TrialRecord stripped = full[i];
    stripped.data.clear();
    EXPECT_EQ(stripped, bare[i]);
  }
  EXPECT_EQ(read_json_file(c.output_dir / "summary_unwind2.json"),
            read_json_file(slim.output_dir / "summary_unwind2.json"));
}

TEST(RunSuite, ChunkedWritesMatchInMemoryEnsemble) {
  SuiteConfig c;
  c.suite = SuiteKind::LossHistogram;
  c.n_trials = 600;  // spans several write chunks
  c.walker.n_exp = 15;
  c.output_dir = fresh_dir("chunks");
  std::ostringstream log;
  ASSERT_EQ(run_suite(c, log), 0);
  WalkerConfig w = c.walker;
  w.n_unwind = 1;
  EXPECT_EQ(read_records_file(c.output_dir / "records_unwind1.ndjson"), run_ensemble(w, 600, c.master_seed));
}
