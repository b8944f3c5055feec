#include "torlab/serialize.hpp"

#include <set>
#include <string>

#include "torlab/error.hpp"

namespace torlab {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const char* what) {
  require(j.is_object(), ErrorCode::Config, std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    require(allowed.count(key) > 0, ErrorCode::Config,
            std::string("unknown key '") + key + "' in " + what);
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::Config, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<int> frequency_from_json(const Json& j, std::size_t n) {
  std::vector<int> m(n, 0);
  if (j.is_array()) {
    require(j.size() == n, ErrorCode::Config, "frequency vector must have length n");
    for (std::size_t i = 0; i < n; ++i) m[i] = j[i].get<int>();
  } else if (j.is_object()) {
    for (const auto& [axis, v] : j.items()) {
      const std::size_t a = std::stoul(axis);
      require(a < n, ErrorCode::Config, "frequency axis out of range");
      m[a] = v.get<int>();
    }
  } else {
    fail(ErrorCode::Config, "frequency must be an array or an {axis: value} object");
  }
  return m;
}

const std::set<std::string> kFunctionKeys = {
    "family", "n", "center", "axis", "axes", "terms", "random_terms", "smoothing",
    "scale", "lipschitz_constant", "has_analytic_gradient"};

}  // namespace

Json to_json(const TorusPoint& x) { return Json(std::vector<double>(x.coords().begin(), x.coords().end())); }

TorusPoint torus_point_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::Config, "torus point must be an array of reals");
  return TorusPoint::wrap(j.get<std::vector<double>>());
}

Json to_json(const SubtorusSpec& s) {
  return Json{{"n", s.ambient_dim()},
              {"free_axes", std::vector<std::size_t>(s.free_axes().begin(), s.free_axes().end())},
              {"base", to_json(s.base())}};
}

SubtorusSpec subtorus_from_json(const Json& j) {
  reject_unknown(j, {"n", "free_axes", "base"}, "subtorus record");
  const auto n = j.at("n").get<std::size_t>();
  const TorusPoint base = j.contains("base") ? torus_point_from_json(j.at("base")) : TorusPoint::origin(n);
  return SubtorusSpec::make(n, j.at("free_axes").get<std::vector<std::size_t>>(), base);
}

Json to_json(const FunctionSpec& f) {
  Json j;
  j["family"] = std::string(family_name(f.family()));
  j["n"] = f.ambient_dim();
  const auto& p = f.params();
  switch (f.family()) {
    case Family::DistToPoint: j["center"] = to_json(*p.center); break;
    case Family::SmoothedDistance:
      j["center"] = to_json(*p.center);
      j["smoothing"] = p.smoothing;
      j["scale"] = f.scale();
      break;
    case Family::CoordinateSawtooth: j["axis"] = p.axis; break;
    case Family::MaxSawtooth: j["axes"] = p.axes; break;
    case Family::TrigPoly: {
      Json terms = Json::array();
      for (const auto& t : p.terms) {
        Json sparse = Json::object();
        for (std::size_t i = 0; i < t.frequency.size(); ++i)
          if (t.frequency[i] != 0) sparse[std::to_string(i)] = t.frequency[i];
        terms.push_back({{"amplitude", t.amplitude}, {"phase", t.phase}, {"frequency", sparse}});
      }
      j["terms"] = terms;
      j["scale"] = f.scale();
      break;
    }
  }
  j["lipschitz_constant"] = f.lipschitz_constant();
  j["has_analytic_gradient"] = f.has_analytic_gradient();
  return j;
}

FunctionSpec instantiate_function(const Json& j, std::size_t n, SampleRng& rng) {
  reject_unknown(j, kFunctionKeys, "function record");
  require(j.contains("family"), ErrorCode::Config, "function record needs a 'family'");
  const Family family = parse_family(j.at("family").get<std::string>());
  if (j.contains("n"))
    require(j.at("n").get<std::size_t>() == n, ErrorCode::Config,
            "function record dimension does not match the requested n");

  ZooParams params;
  if (j.contains("center")) {
    const Json& c = j.at("center");
    if (c.is_string()) {
      require(c.get<std::string>() == "random", ErrorCode::Config, "center must be an array or \"random\"");
      params.center = sample_torus_point(n, rng);
    } else {
      params.center = torus_point_from_json(c);
    }
  }
  params.axis = get_or<std::size_t>(j, "axis", 0);
  params.axes = get_or<std::vector<std::size_t>>(j, "axes", {});
  params.smoothing = get_or<double>(j, "smoothing", 0.05);

  FunctionSpec f;
  if (family == Family::TrigPoly && j.contains("random_terms")) {
    const Json& r = j.at("random_terms");
    reject_unknown(r, {"terms", "support", "max_frequency"}, "random_terms");
    f = random_trig_poly(n, get_or<std::size_t>(r, "terms", 3),
                         std::min<std::size_t>(n, get_or<std::size_t>(r, "support", 2)),
                         get_or<int>(r, "max_frequency", 2), rng);
  } else {
    if (family == Family::TrigPoly) {
      for (const auto& t : j.value("terms", Json::array())) {
        reject_unknown(t, {"amplitude", "phase", "frequency"}, "trig term");
        TrigTerm term;
        term.amplitude = get_or<double>(t, "amplitude", 0.0);
        term.phase = get_or<double>(t, "phase", 0.0);
        require(t.contains("frequency"), ErrorCode::Config, "trig term needs a frequency");
        term.frequency = frequency_from_json(t.at("frequency"), n);
        params.terms.push_back(std::move(term));
      }
    }
    f = zoo_construct(family, params, n);
  }
  const double scale = get_or<double>(j, "scale", 1.0);
  if (scale != 1.0) f = f.scaled(scale);
  return f;
}

FunctionSpec function_from_json(const Json& j) {
  require(j.is_object() && j.contains("n"), ErrorCode::Config, "function record needs 'n'");
  SampleRng unused(SeedSpec{});
  return instantiate_function(j, j.at("n").get<std::size_t>(), unused);
}

Json to_json(const OscCertificate& c) {
  return Json{{"osc_lower", c.osc_lower},         {"osc_upper", c.osc_upper},
              {"evaluations", c.evaluations},     {"mesh", c.mesh},
              {"lipschitz_used", c.lipschitz_used}, {"argmax", to_json(c.argmax)},
              {"argmin", to_json(c.argmin)},      {"max_value", c.max_value},
              {"min_value", c.min_value},         {"exhausted", c.exhausted}};
}

Json to_json(const MorreyBoundReport& r) {
  return Json{{"k", r.k},
              {"alpha", r.alpha},
              {"p", r.p},
              {"R", r.radius},
              {"c_alpha_k", r.c_alpha_k},
              {"rho_qnorm", r.rho_qnorm},
              {"ball_pnorm", r.ball_pnorm},
              {"ball_pnorm_std_error", r.ball_pnorm_std_error},
              {"half_bound", r.half_bound},
              {"bound_value", r.bound_value},
              {"lhs_start", r.lhs_start},
              {"lhs_end", r.lhs_end},
              {"empirical_lhs", r.empirical_lhs},
              {"std_error", r.std_error},
              {"endpoint_diff", r.endpoint_diff},
              {"triangle_sum", r.triangle_sum},
              {"satisfied", r.satisfied}};
}

Json to_json(const PathPolyline& p) {
  Json verts = Json::array();
  for (const auto& v : p.vertices) verts.push_back(to_json(v));
  return Json{{"mode", to_string(p.mode)}, {"vertices", verts}, {"segment_lengths", p.segment_lengths}};
}

}  // namespace torlab
