#pragma once

// Experiment orchestration: configs, result records, CSV/JSON emission and
// the verification battery behind the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "torlab/serialize.hpp"

namespace torlab {

enum class Experiment {
  TheoremVerify,
  Scaling,
  Lemma4Verify,
  MorreyVerify,
  BoundsTable,
  Osc,
  Battery,
};

const char* to_string(Experiment e) noexcept;
Experiment parse_experiment(const std::string& name);

/// Every sweep parameter of every experiment; each experiment reads the
/// fields it needs and validate() rejects configs missing them.
struct ExperimentConfig {
  Experiment experiment = Experiment::TheoremVerify;
  std::vector<Json> functions;  // function records, see instantiate_function
  std::vector<std::uint64_t> n_values;
  std::vector<double> log_n_values;  // bounds-table only: n given through log n
  std::vector<std::size_t> k_values;
  std::vector<double> eps = {0.2};
  std::vector<double> alpha = {1.0};
  std::vector<double> p_values;  // lemma4-verify
  std::size_t trials = 100;
  std::size_t samples = 10000;
  std::uint64_t master_seed = 0;
  std::size_t grid_m = 32;
  bool refine = true;
  double target_gap = 1e-3;
  std::size_t budget = 200000;
  bool normalize = true;
  std::string path_mode = "equal";
  Json subtorus = "random";  // osc only
  unsigned threads = 1;
  std::string output;  // empty: stdout
  std::string format = "csv";
  bool timing = true;  // false zeroes duration_ms and blanks timestamp
  bool inject_delta_bug = false;

  /// Throws Error(Config) naming the first problem.
  void validate() const;
};

Json to_json(const ExperimentConfig& c);
/// Unknown keys are rejected; absent keys take the defaults above.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);
/// Canonical text form; serialize(parse(serialize(c))) is byte-identical.
std::string serialize_config(const ExperimentConfig& c);

struct ResultRecord {
  std::string experiment;
  std::string function_family;
  std::string n;  // decimal, or "log:<value>" for symbolic n
  std::optional<std::size_t> k;
  std::optional<double> eps;
  std::optional<double> alpha;
  std::string metric;
  double value = 0.0;
  std::optional<double> std_error;
  std::optional<std::size_t> success;
  std::optional<std::size_t> failure;
  std::optional<std::size_t> undecided;
  std::optional<std::size_t> trials;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  double duration_ms = 0.0;
  std::string timestamp;

  bool operator==(const ResultRecord&) const = default;
};

/// Copy with duration_ms and timestamp cleared.
ResultRecord without_timing(ResultRecord r);

inline constexpr const char* kCsvHeader =
    "experiment,function_family,n,k,eps,alpha,metric,value,std_error,success,failure,"
    "undecided,trials,master_seed,stream_id,duration_ms,timestamp";

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records);
void write_json(std::ostream& os, const std::vector<ResultRecord>& records);
Json to_json(const ResultRecord& r);

std::vector<ResultRecord> run_theorem_verify(const ExperimentConfig& config);
std::vector<ResultRecord> run_scaling(const ExperimentConfig& config);
std::vector<ResultRecord> run_lemma4_verify(const ExperimentConfig& config);
std::vector<ResultRecord> run_morrey_verify(const ExperimentConfig& config);
std::vector<ResultRecord> run_bounds_table(const ExperimentConfig& config);

struct BatteryCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct BatteryReport {
  std::vector<BatteryCheck> checks;
  std::vector<ResultRecord> records;
  bool passed() const noexcept;
};

/// Projection moments, hypergeometric chain, lemma chain, density identity
/// and chord verification. Honours master_seed, threads and inject_delta_bug.
BatteryReport run_battery(const ExperimentConfig& config);

/// Runs any experiment except Osc and Battery.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

}  // namespace torlab
