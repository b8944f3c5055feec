#pragma once

// JSON records for the library's value types. Schema: docs/schema.md.

#include "json.hpp"
#include "torlab/morrey.hpp"
#include "torlab/oscillation.hpp"
#include "torlab/sampling.hpp"
#include "torlab/torus.hpp"
#include "torlab/zoo.hpp"

namespace torlab {

using Json = nlohmann::json;

Json to_json(const TorusPoint& x);
TorusPoint torus_point_from_json(const Json& j);

Json to_json(const SubtorusSpec& s);
SubtorusSpec subtorus_from_json(const Json& j);

/// Fully specified function record (includes "n"). Informational keys
/// "lipschitz_constant" and "has_analytic_gradient" are emitted and accepted
/// but recomputed on read.
Json to_json(const FunctionSpec& f);
FunctionSpec function_from_json(const Json& j);

/// A function record whose dimension-dependent parts may be left open:
/// "n" is optional, "center" may be omitted (origin) or "random", and
/// trig-polys may give "random_terms": {"terms", "support", "max_frequency"}
/// instead of explicit terms. Random parts draw from `rng`.
FunctionSpec instantiate_function(const Json& record, std::size_t n, SampleRng& rng);

Json to_json(const OscCertificate& c);
Json to_json(const MorreyBoundReport& r);
Json to_json(const PathPolyline& p);

}  // namespace torlab
