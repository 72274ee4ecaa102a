#include "rwpe/record_io.hpp"

#include <fstream>
#include <string>

#include "rwpe/errors.hpp"

namespace rwpe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

DataRole role_from_string(const std::string& s) {
  if (s == "accepted") return DataRole::Accepted;
  if (s == "check") return DataRole::Check;
  if (s == "unwound") return DataRole::Unwound;
  throw FormatError("unknown data role '" + s + "'");
}

OmegaSource source_from_string(const std::string& s) {
  if (s == "prior") return OmegaSource::Prior;
  if (s == "grid") return OmegaSource::Grid;
  throw FormatError("unknown omega_source '" + s + "'");
}

void expect_schema(const json& j, std::string_view schema) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != schema) {
    throw FormatError("expected schema " + std::string(schema));
  }
}

}  // namespace

ordered_json to_json(const TrialRecord& r) {
  ordered_json data = ordered_json::array();
  for (const RecordedDatum& entry : r.data) {
    data.push_back({{"t", entry.params.t},
                    {"omega_inv", entry.params.omega_inv},
                    {"d", to_int(entry.datum)},
                    {"role", std::string(to_string(entry.role))}});
  }
  return {{"schema", std::string(kTrialSchema)},
          {"index", r.index},
          {"seed", r.seed},
          {"omega_source", std::string(to_string(r.omega_source))},
          {"true_omega", r.true_omega},
          {"estimate", r.estimate},
          {"quadratic_loss", r.quadratic_loss},
          {"log10_loss", r.log10_loss},
          {"accepted_count", r.accepted_count},
          {"total_count", r.total_count},
          {"checks_performed", r.checks_performed},
          {"steps_unwound", r.steps_unwound},
          {"budget_exhausted", r.budget_exhausted},
          {"error", r.error},
          {"data", std::move(data)}};
}

TrialRecord trial_from_json(const json& j) {
  expect_schema(j, kTrialSchema);
  try {
    TrialRecord r;
    r.index = j.at("index").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.omega_source = source_from_string(j.at("omega_source").get<std::string>());
    r.true_omega = j.at("true_omega").get<double>();
    r.estimate = j.at("estimate").get<double>();
    r.quadratic_loss = j.at("quadratic_loss").get<double>();
    r.log10_loss = j.at("log10_loss").get<double>();
    r.accepted_count = j.at("accepted_count").get<std::int64_t>();
    r.total_count = j.at("total_count").get<std::int64_t>();
    r.checks_performed = j.at("checks_performed").get<std::int64_t>();
    r.steps_unwound = j.at("steps_unwound").get<std::int64_t>();
    r.budget_exhausted = j.at("budget_exhausted").get<bool>();
    r.error = j.at("error").get<std::string>();
    for (const json& entry : j.at("data")) {
      const int bit = entry.at("d").get<int>();
      if (bit != 0 && bit != 1) throw FormatError("datum must be 0 or 1");
      r.data.push_back({{entry.at("t").get<double>(), entry.at("omega_inv").get<double>()},
                        datum_from_int(bit),
                        role_from_string(entry.at("role").get<std::string>())});
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed trial record: ") + e.what());
  }
}

void write_records(std::ostream& out, std::span<const TrialRecord> records) {
  for (const TrialRecord& r : records) out << to_json(r).dump() << '\n';
}

std::vector<TrialRecord> read_records(std::istream& in) {
  std::vector<TrialRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(trial_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

ordered_json summary_document(const RiskSummary& s, std::int64_t n_exp) {
  ordered_json profile = ordered_json::array();
  for (const ProfilePoint& p : s.risk_profile) {
    profile.push_back({{"abs_omega_lo", p.abs_omega_lo},
                       {"abs_omega_hi", p.abs_omega_hi},
                       {"n_trials", p.n_trials},
                       {"mean_loss", p.mean_loss},
                       {"median_loss", p.median_loss},
                       {"median_steps_unwound", p.median_steps_unwound}});
  }
  ordered_json doc = {{"schema", std::string(kSummarySchema)},
                      {"n_trials", s.n_trials},
                      {"budget_exhausted", s.budget_exhausted},
                      {"failed", s.failed},
                      {"bayes_risk", s.bayes_risk},
                      {"median_loss", s.median_loss},
                      {"median_steps_unwound", s.median_steps_unwound},
                      {"histogram",
                       {{"log10_low_edge", LossHistogram::kLowEdge},
                        {"log10_high_edge", LossHistogram::kHighEdge},
                        {"bin_width", LossHistogram::kBinWidth},
                        {"counts", s.histogram.counts},
                        {"underflow", s.histogram.underflow},
                        {"overflow", s.histogram.overflow}}},
                      {"risk_profile", std::move(profile)},
                      {"n_exp", n_exp}};
  doc["van_trees_bound"] = n_exp >= 1 ? ordered_json(van_trees_bound(n_exp)) : ordered_json(nullptr);
  return doc;
}

RiskSummary summary_from_json(const json& j) {
  expect_schema(j, kSummarySchema);
  try {
    RiskSummary s;
    s.n_trials = j.at("n_trials").get<std::size_t>();
    s.budget_exhausted = j.at("budget_exhausted").get<std::size_t>();
    s.failed = j.at("failed").get<std::size_t>();
    s.bayes_risk = j.at("bayes_risk").get<double>();
    s.median_loss = j.at("median_loss").get<double>();
    s.median_steps_unwound = j.at("median_steps_unwound").get<double>();
    const json& h = j.at("histogram");
    s.histogram.counts = h.at("counts").get<std::vector<std::size_t>>();
    s.histogram.underflow = h.at("underflow").get<std::size_t>();
    s.histogram.overflow = h.at("overflow").get<std::size_t>();
    for (const json& p : j.at("risk_profile")) {
      s.risk_profile.push_back({p.at("abs_omega_lo").get<double>(), p.at("abs_omega_hi").get<double>(),
                                p.at("n_trials").get<std::size_t>(), p.at("mean_loss").get<double>(),
                                p.at("median_loss").get<double>(),
                                p.at("median_steps_unwound").get<double>()});
    }
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed summary: ") + e.what());
  }
}

void write_records_file(const std::filesystem::path& path, std::span<const TrialRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_records(out, records);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<TrialRecord> read_records_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  try {
    return read_records(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const ordered_json& document) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << document.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace rwpe
