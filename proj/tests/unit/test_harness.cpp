#include <doctest.h>

#include <sstream>

#include "torlab/error.hpp"
#include "torlab/harness.hpp"
#include "torlab/stats.hpp"

using namespace torlab;

namespace {

ExperimentConfig theorem_config() {
  ExperimentConfig c;
  c.experiment = Experiment::TheoremVerify;
  c.functions = {Json{{"family", "coordinate-sawtooth"}, {"axis", 0}}};
  c.n_values = {16};
  c.k_values = {1};
  c.eps = {0.4};
  c.trials = 200;
  c.timing = false;
  return c;
}

std::string csv(const std::vector<ResultRecord>& rs) {
  std::ostringstream os;
  write_csv(os, rs);
  return os.str();
}

}  // namespace

TEST_CASE("config round trip is byte identical") {
  ExperimentConfig c = theorem_config();
  c.functions.push_back(Json{{"family", "trig-poly"}, {"random_terms", {{"terms", 3}}}});
  c.alpha = {0.25, 1.0};
  const std::string once = serialize_config(c);
  const std::string twice = serialize_config(config_from_json(Json::parse(once)));
  CHECK(once == twice);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json(Json::object()), Error);
  CHECK_THROWS_AS(config_from_json(Json{{"experiment", "theorem-verify"}, {"bogus", 1}}), Error);
  CHECK_THROWS_AS(config_from_json(Json{{"experiment", "nope"}}), Error);
  CHECK_THROWS_AS(config_from_json(Json{{"experiment", "scaling"}, {"trials", "many"}}), Error);

  ExperimentConfig c = theorem_config();
  CHECK_NOTHROW(c.validate());
  c.k_values = {5};
  CHECK_THROWS_AS(c.validate(), Error);
  c = theorem_config();
  c.functions.clear();
  CHECK_THROWS_AS(c.validate(), Error);
  c = theorem_config();
  c.eps = {1.5};
  CHECK_THROWS_AS(c.validate(), Error);
  c = theorem_config();
  c.grid_m = 4000;
  c.k_values = {3};
  CHECK_THROWS_AS(c.validate(), Error);
  try {
    config_from_json(Json::object());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}

TEST_CASE("csv schema") {
  const auto rs = run_theorem_verify(theorem_config());
  const std::string text = csv(rs);
  CHECK(text.substr(0, text.find('\n')) == kCsvHeader);
  CHECK(text.find("success_fraction") != std::string::npos);
  std::ostringstream js;
  write_json(js, rs);
  const Json parsed = Json::parse(js.str());
  CHECK(parsed.size() == rs.size());
  CHECK(parsed[0]["experiment"] == "theorem-verify");
}

TEST_CASE("theorem-verify: constant function always succeeds") {
  ExperimentConfig c = theorem_config();
  c.functions = {Json{{"family", "trig-poly"}}};
  c.n_values = {8, 32};
  c.k_values = {1, 2, 3};
  c.trials = 20;
  for (const auto& r : run_theorem_verify(c)) {
    CHECK(r.value == 1.0);
    CHECK(*r.success + *r.failure + *r.undecided == *r.trials);
  }
}

TEST_CASE("theorem-verify: sawtooth success rate 1 - k/n") {
  const auto rs = run_theorem_verify(theorem_config());
  REQUIRE(rs.size() == 2);
  const auto& r = rs[0];
  CHECK(r.metric == "success_fraction");
  CHECK(*r.success + *r.failure + *r.undecided == 200);
  const auto ci = wilson_interval(*r.success, 200, 0.99);
  CHECK(ci.low <= 15.0 / 16.0);
  CHECK(ci.high >= 15.0 / 16.0);
}

TEST_CASE("reproducibility across thread counts") {
  ExperimentConfig c = theorem_config();
  c.functions.push_back(Json{{"family", "trig-poly"}, {"random_terms", {{"terms", 3}, {"support", 2}}}});
  c.k_values = {1, 2};
  c.trials = 50;
  c.threads = 1;
  const std::string one = csv(run_theorem_verify(c));
  c.threads = 4;
  CHECK(csv(run_theorem_verify(c)) == one);
}

TEST_CASE("scaling experiment") {
  ExperimentConfig c;
  c.experiment = Experiment::Scaling;
  c.functions = {Json{{"family", "trig-poly"}}};
  c.n_values = {8, 16};
  c.k_values = {1, 2, 3};
  c.eps = {0.2};
  c.trials = 10;
  c.timing = false;
  for (const auto& r : run_scaling(c))
    if (r.metric == "k_star") CHECK(r.value == 3.0);

  c.functions = {Json{{"family", "coordinate-sawtooth"}, {"axis", 0}}};
  c.n_values = {6};
  c.k_values = {1, 2, 4};
  c.trials = 41;
  bool seen = false;
  for (const auto& r : run_scaling(c)) {
    if (r.metric == "k_star") {
      CHECK(r.value == 2.0);
      seen = true;
    }
    if (r.metric == "theorem1_k") CHECK(r.value == 0.0);
  }
  CHECK(seen);
}

TEST_CASE("lemma4-verify records") {
  ExperimentConfig c;
  c.experiment = Experiment::Lemma4Verify;
  c.n_values = {10};
  c.k_values = {2};
  c.p_values = {2.0, 4.0};
  c.trials = 3;
  c.samples = 20000;
  c.timing = false;
  const auto rs = run_lemma4_verify(c);
  int exact = 0;
  for (const auto& r : rs) {
    if (r.metric.rfind("moment_exact", 0) == 0) ++exact;
    CHECK(r.stream_id != 0);
  }
  CHECK(exact == 6);
}

TEST_CASE("bounds-table and delta mutation") {
  ExperimentConfig c;
  c.experiment = Experiment::BoundsTable;
  c.n_values = {1000};
  c.log_n_values = {5000.0};
  c.eps = {0.3};
  c.alpha = {0.5};
  c.timing = false;
  auto holds = [](const std::vector<ResultRecord>& rs) {
    int checked = 0;
    for (const auto& r : rs)
      if (r.metric == "lemma1_holds" && r.trials) {
        ++checked;
        if (*r.failure != 0) return -1;
      }
    return checked;
  };
  CHECK(holds(run_bounds_table(c)) == 1);
  c.inject_delta_bug = true;
  CHECK(holds(run_bounds_table(c)) == -1);
}

TEST_CASE("battery") {
  ExperimentConfig c;
  c.experiment = Experiment::Battery;
  const auto ok = run_battery(c);
  CHECK(ok.passed());
  c.inject_delta_bug = true;
  const auto bad = run_battery(c);
  CHECK_FALSE(bad.passed());
}
