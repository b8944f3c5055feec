// Command-line front end for the torlab experiment harness.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or config error, 3 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "torlab/bounds.hpp"
#include "torlab/error.hpp"
#include "torlab/harness.hpp"
#include "torlab/oscillation.hpp"
#include "torlab/zoo.hpp"

namespace {

using namespace torlab;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string out;
  std::string format;
  unsigned threads = 0;
  bool no_timing = false;
};

struct Sweep {
  std::vector<std::string> functions;
  std::vector<std::string> n;
  std::vector<std::size_t> k;
  std::vector<double> eps;
  std::vector<double> alpha;
  std::vector<double> p;
  std::size_t trials = 0;
  std::size_t samples = 0;
  std::size_t m = 0;
  bool refine = false;
  bool no_refine = false;
  double gap = 0.0;
  std::size_t budget = 0;
  std::string mode;
  std::string subtorus;
  bool inject_delta_bug = false;
};

// Accepts inline JSON, @path, or a bare family name.
Json parse_function_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open function file '" + arg.substr(1) + "'");
    try {
      return Json::parse(in);
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::Config, std::string("function file is not valid JSON: ") + e.what());
    }
  }
  if (!arg.empty() && arg.front() == '{') {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::Config, std::string("function spec is not valid JSON: ") + e.what());
    }
  }
  parse_family(arg);
  return Json{{"family", arg}};
}

Json parse_subtorus_arg(const std::string& arg) {
  if (arg == "random") return arg;
  try {
    return Json::parse(arg);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Config, std::string("subtorus spec is not valid JSON: ") + e.what());
  }
}

void add_globals(CLI::App& app, Globals& g) {
  app.add_option("--seed", g.seed, "Master seed")->group("Global");
  app.add_option("--config", g.config_path, "JSON experiment config")->group("Global");
  app.add_option("--out", g.out, "Output path (default stdout)")->group("Global");
  app.add_option("--format", g.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->group("Global");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->group("Global");
  app.add_flag("--no-timing", g.no_timing, "Zero durations and blank timestamps")->group("Global");
}

void add_sweep(CLI::App* sub, Sweep& s, Experiment e) {
  const bool function_based = e == Experiment::TheoremVerify || e == Experiment::Scaling ||
                              e == Experiment::MorreyVerify || e == Experiment::Osc;
  if (function_based)
    sub->add_option("--function", s.functions, "Family name, inline JSON record or @file");
  sub->add_option("--n", s.n, "Ambient dimension (integer, or log:<value> for bounds)");
  sub->add_option("--k", s.k, "Subtorus dimension");
  if (e != Experiment::MorreyVerify && e != Experiment::Lemma4Verify)
    sub->add_option("--eps", s.eps, "Oscillation threshold");
  if (e != Experiment::Osc) sub->add_option("--alpha", s.alpha, "Exponent slack alpha");
  if (e == Experiment::Lemma4Verify) {
    sub->add_option("--p", s.p, "Moment exponent");
    sub->add_option("--eps", s.eps, "Epsilon entering the lemma bound");
  }
  if (e == Experiment::TheoremVerify || e == Experiment::Scaling || e == Experiment::Lemma4Verify ||
      e == Experiment::MorreyVerify)
    sub->add_option("--trials", s.trials, "Trials per parameter tuple");
  if (e != Experiment::BoundsTable && e != Experiment::Osc)
    sub->add_option("--samples", s.samples, "Monte Carlo samples");
  if (e == Experiment::TheoremVerify || e == Experiment::Scaling || e == Experiment::Osc) {
    sub->add_option("--m", s.m, "Grid resolution per axis");
    sub->add_flag("--refine", s.refine, "Run branch and bound refinement");
    sub->add_flag("--no-refine", s.no_refine, "Grid certificate only");
    sub->add_option("--gap", s.gap, "Target certificate gap");
    sub->add_option("--budget", s.budget, "Refinement evaluation budget");
  }
  if (e == Experiment::MorreyVerify)
    sub->add_option("--mode", s.mode, "Path mode")->check(CLI::IsMember({"equal", "paper"}));
  if (e == Experiment::Osc)
    sub->add_option("--subtorus", s.subtorus, "Subtorus JSON record or 'random'");
  if (e == Experiment::BoundsTable || e == Experiment::Battery)
    sub->add_flag("--inject-delta-bug", s.inject_delta_bug, "Perturb the delta formula by 10%");
}

bool given(const CLI::App* app, const char* name) {
  const CLI::Option* opt = app->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

ExperimentConfig build_config(Experiment e, const CLI::App* sub, const Globals& g, const Sweep& s) {
  ExperimentConfig c;
  if (!g.config_path.empty()) {
    c = load_config(g.config_path);
    require(c.experiment == e, ErrorCode::Config,
            std::string("config is for experiment ") + to_string(c.experiment) + ", not " + to_string(e));
  } else {
    c.experiment = e;
  }
  const CLI::App* root = sub->get_parent();
  auto global_given = [&](const char* name) { return given(root, name) || given(sub, name); };
  if (global_given("--seed")) c.master_seed = g.seed;
  if (global_given("--out")) c.output = g.out;
  if (global_given("--format")) c.format = g.format;
  if (global_given("--threads")) c.threads = g.threads;
  if (g.no_timing) c.timing = false;

  if (given(sub, "--function")) {
    c.functions.clear();
    for (const auto& f : s.functions) c.functions.push_back(parse_function_arg(f));
  }
  if (given(sub, "--n")) {
    c.n_values.clear();
    c.log_n_values.clear();
    for (const auto& text : s.n) {
      const Dimension d = Dimension::parse(text);
      if (text.rfind("log:", 0) == 0) {
        require(e == Experiment::BoundsTable, ErrorCode::Config,
                "symbolic n (log:<value>) is only accepted by 'bounds'");
        c.log_n_values.push_back(static_cast<double>(d.log_n()));
      } else {
        c.n_values.push_back(std::stoull(text));
      }
    }
  }
  if (given(sub, "--k")) c.k_values = s.k;
  if (given(sub, "--eps")) c.eps = s.eps;
  if (given(sub, "--alpha")) c.alpha = s.alpha;
  if (given(sub, "--p")) c.p_values = s.p;
  if (given(sub, "--trials")) c.trials = s.trials;
  if (given(sub, "--samples")) c.samples = s.samples;
  if (given(sub, "--m")) c.grid_m = s.m;
  if (s.refine) c.refine = true;
  if (s.no_refine) c.refine = false;
  if (given(sub, "--gap")) c.target_gap = s.gap;
  if (given(sub, "--budget")) c.budget = s.budget;
  if (given(sub, "--mode")) c.path_mode = s.mode;
  if (given(sub, "--subtorus")) c.subtorus = parse_subtorus_arg(s.subtorus);
  if (s.inject_delta_bug) c.inject_delta_bug = true;
  c.validate();
  return c;
}

// Opens the configured output, falling back to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    require(static_cast<bool>(file_), ErrorCode::Io, "cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish(const std::string& path) {
    stream().flush();
    require(static_cast<bool>(stream()), ErrorCode::Io, "failed writing output '" + path + "'");
  }

 private:
  std::ofstream file_;
};

void emit(const ExperimentConfig& c, const std::vector<ResultRecord>& records) {
  Output out(c.output);
  if (c.format == "json")
    write_json(out.stream(), records);
  else
    write_csv(out.stream(), records);
  out.finish(c.output);
}

bool any_failure(const std::vector<ResultRecord>& records, Experiment e) {
  if (e == Experiment::TheoremVerify || e == Experiment::Scaling) return false;
  for (const auto& r : records) {
    if (r.metric.rfind("agreement_z", 0) == 0) continue;
    if (r.failure && *r.failure > 0) return true;
  }
  return false;
}

void print_bounds_table(const std::vector<ResultRecord>& records) {
  std::ostringstream os;
  os << "n\teps\talpha\tk\tmetric\tvalue\n";
  for (const auto& r : records)
    os << r.n << '\t' << *r.eps << '\t' << *r.alpha << '\t' << (r.k ? std::to_string(*r.k) : "-")
       << '\t' << r.metric << '\t' << r.value << '\n';
  std::cerr << os.str();
}

int run_osc(const ExperimentConfig& c) {
  require(!c.n_values.empty(), ErrorCode::Config, "osc needs --n");
  const std::size_t n = c.n_values.front();
  SampleRng rng(SeedSpec{c.master_seed, stream_id_for("function", std::array<std::uint64_t, 2>{0, n}), 0});
  const FunctionSpec f = instantiate_function(c.functions.front(), n, rng);

  const std::uint64_t stream = stream_id_for("osc", std::array<std::uint64_t, 1>{n});
  SubtorusSpec sub = SubtorusSpec::full(n);
  if (c.subtorus.is_string()) {
    require(c.subtorus.get<std::string>() == "random", ErrorCode::Config,
            "subtorus must be a record or \"random\"");
    require(!c.k_values.empty(), ErrorCode::Config, "a random subtorus needs --k");
    sub = sample_subtorus(n, c.k_values.front(), SeedSpec{c.master_seed, stream, 0});
  } else {
    sub = subtorus_from_json(c.subtorus);
    require(sub.ambient_dim() == n, ErrorCode::Config, "subtorus dimension does not match --n");
  }
  require(sub.dim() <= 4, ErrorCode::Config, "osc supports k <= 4");

  OscCertificate cert = grid_osc(f, sub, c.grid_m, c.threads);
  if (c.refine && cert.gap() > c.target_gap)
    cert = intersect(cert, refine_osc(f, sub, c.target_gap, c.budget));
  const OscDecision decision = decide(cert, c.eps.front());

  Output out(c.output);
  if (c.format == "json") {
    Json j = to_json(cert);
    j["family"] = family_name(f.family());
    j["subtorus"] = to_json(sub);
    j["eps"] = c.eps.front();
    j["decision"] = to_string(decision);
    j["master_seed"] = c.master_seed;
    j["stream_id"] = stream;
    out.stream() << j.dump(2) << '\n';
  } else {
    out.stream() << "family,n,k,osc_lower,osc_upper,gap,evaluations,mesh,lipschitz_used,exhausted,eps,"
                    "decision,master_seed,stream_id\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.17g,%.17g,%.17g,%zu,%.17g,%.17g,%d,%.17g,%s,%llu,%llu\n",
                  std::string(family_name(f.family())).c_str(), n, sub.dim(), cert.osc_lower,
                  cert.osc_upper, cert.gap(), cert.evaluations, cert.mesh, cert.lipschitz_used,
                  cert.exhausted ? 1 : 0, c.eps.front(), to_string(decision),
                  static_cast<unsigned long long>(c.master_seed),
                  static_cast<unsigned long long>(stream));
    out.stream() << buf;
  }
  out.finish(c.output);
  return kExitOk;
}

int run_battery_cli(const ExperimentConfig& c) {
  const BatteryReport report = run_battery(c);
  for (const auto& check : report.checks)
    std::cerr << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
  std::cerr << (report.passed() ? "battery passed" : "battery FAILED") << '\n';
  emit(c, report.records);
  return report.passed() ? kExitOk : kExitVerification;
}

int dispatch(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::Osc: return run_osc(c);
    case Experiment::Battery: return run_battery_cli(c);
    default: break;
  }
  const auto records = run_experiment(c);
  if (c.experiment == Experiment::BoundsTable) print_bounds_table(records);
  emit(c, records);
  return any_failure(records, c.experiment) ? kExitVerification : kExitOk;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::Io ? kExitIo : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for oscillation of functions on coordinate subtori of T^n"};
  app.require_subcommand(0, 1);
  Globals globals;
  add_globals(app, globals);

  struct Entry {
    const char* name;
    Experiment experiment;
    const char* help;
  };
  const Entry entries[] = {
      {"bounds", Experiment::BoundsTable, "Evaluate the dimension bounds and the lemma inequality chain"},
      {"osc", Experiment::Osc, "Certify the oscillation of a function on a subtorus"},
      {"theorem-verify", Experiment::TheoremVerify, "Success fractions over random subtori"},
      {"scaling", Experiment::Scaling, "Empirical k*(n, eps) sweep"},
      {"lemma4-verify", Experiment::Lemma4Verify, "Projection moment checks"},
      {"morrey-verify", Experiment::MorreyVerify, "Chord and chained Morrey bound checks"},
      {"battery", Experiment::Battery, "Run the verification battery"},
  };

  std::vector<Sweep> sweeps(std::size(entries));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(entries); ++i) {
    CLI::App* sub = app.add_subcommand(entries[i].name, entries[i].help);
    sub->fallthrough();
    add_sweep(sub, sweeps[i], entries[i].experiment);
    subs.push_back(sub);
  }
  CLI::App* zoo = app.add_subcommand("zoo", "Function zoo utilities");
  zoo->require_subcommand(1);
  CLI::App* zoo_list = zoo->add_subcommand("list", "List function families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (zoo_list->parsed()) {
      for (Family f : all_families()) {
        const bool scalable = f == Family::TrigPoly || f == Family::SmoothedDistance;
        std::cout << family_name(f) << "\tscalable=" << (scalable ? "yes" : "no") << '\n';
      }
      return kExitOk;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed())
        return dispatch(build_config(entries[i].experiment, subs[i], globals, sweeps[i]));
    }
    if (!globals.config_path.empty()) {
      ExperimentConfig c = load_config(globals.config_path);
      if (given(&app, "--seed")) c.master_seed = globals.seed;
      if (given(&app, "--out")) c.output = globals.out;
      if (given(&app, "--format")) c.format = globals.format;
      if (given(&app, "--threads")) c.threads = globals.threads;
      if (globals.no_timing) c.timing = false;
      c.validate();
      return dispatch(c);
    }
    std::cerr << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "torlab: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "torlab: " << e.what() << '\n';
    return kExitUsage;
  }
}
