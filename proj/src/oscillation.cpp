#include "torlab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"

namespace torlab {

namespace {

struct Extremes {
  double max_value = -INFINITY;
  double min_value = INFINITY;
  std::vector<double> argmax;
  std::vector<double> argmin;

  // Strict comparisons keep the first point in scan order, which is
  // lexicographic order on the parameters.
  void offer(double v, const std::vector<double>& u) {
    if (v > max_value) {
      max_value = v;
      argmax = u;
    }
    if (v < min_value) {
      min_value = v;
      argmin = u;
    }
  }

  void offer_tiebreak(double v, const std::vector<double>& u) {
    if (v > max_value || (v == max_value && u < argmax)) {
      max_value = v;
      argmax = u;
    }
    if (v < min_value || (v == min_value && u < argmin)) {
      min_value = v;
      argmin = u;
    }
  }
};

void check_inputs(const FunctionSpec& f, const SubtorusSpec& sub) {
  require(sub.ambient_dim() == f.ambient_dim(), ErrorCode::InvalidInput,
          "subtorus and function live on different tori");
  require(std::isfinite(f.lipschitz_constant()) && f.lipschitz_constant() >= 0.0,
          ErrorCode::InvalidInput, "function carries no usable Lipschitz constant");
}

}  // namespace

double lattice_covering_radius(std::size_t k, std::size_t m) {
  return std::sqrt(static_cast<double>(k)) / (2.0 * static_cast<double>(m));
}

OscCertificate grid_osc(const FunctionSpec& f, const SubtorusSpec& sub, std::size_t m,
                        unsigned threads) {
  check_inputs(f, sub);
  require(m >= 2, ErrorCode::InvalidInput, "grid needs at least 2 points per axis");
  const std::size_t k = sub.dim();
  const double total_d = std::pow(static_cast<double>(m), static_cast<double>(k));
  require(total_d <= static_cast<double>(kOscGridBudget), ErrorCode::BudgetExceeded,
          "grid m^k exceeds the evaluation budget");
  const auto total = static_cast<std::size_t>(total_d);

  const std::size_t chunks = std::min<std::size_t>(total, 64);
  const auto partial = parallel_map(chunks, threads, [&](std::size_t c) {
    Extremes e;
    std::vector<double> u(k);
    for (std::size_t flat = total * c / chunks; flat < total * (c + 1) / chunks; ++flat) {
      std::size_t rest = flat;
      for (std::size_t j = k; j-- > 0;) {
        u[j] = static_cast<double>(rest % m) / static_cast<double>(m);
        rest /= m;
      }
      e.offer(f.eval(embed(sub, u)), u);
    }
    return e;
  });
  // Chunks are combined in scan order with strict comparisons.
  Extremes best;
  for (const auto& e : partial) {
    if (e.max_value > best.max_value) {
      best.max_value = e.max_value;
      best.argmax = e.argmax;
    }
    if (e.min_value < best.min_value) {
      best.min_value = e.min_value;
      best.argmin = e.argmin;
    }
  }

  OscCertificate cert;
  cert.max_value = best.max_value;
  cert.min_value = best.min_value;
  cert.argmax = embed(sub, best.argmax);
  cert.argmin = embed(sub, best.argmin);
  cert.osc_lower = best.max_value - best.min_value;
  cert.lipschitz_used = f.lipschitz_constant();
  cert.mesh = 1.0 / static_cast<double>(m);
  cert.osc_upper = cert.osc_lower + 2.0 * cert.lipschitz_used * lattice_covering_radius(k, m);
  cert.evaluations = total;
  return cert;
}

OscCertificate refine_osc(const FunctionSpec& f, const SubtorusSpec& sub, double target_gap,
                          std::size_t budget) {
  check_inputs(f, sub);
  require(target_gap > 0.0, ErrorCode::InvalidInput, "target gap must be positive");
  const std::size_t k = sub.dim();
  const double lip = f.lipschitz_constant();
  std::vector<double> partial(k);
  {
    const auto all = f.partial_bounds();
    for (std::size_t j = 0; j < k; ++j) partial[j] = all[sub.free_axes()[j]];
  }

  struct Box {
    std::vector<double> lo;
    std::vector<double> width;
    double value = 0.0;
    double variation = 0.0;  // bound on |f - value| over the box
    bool split = false;
  };
  std::vector<Box> boxes;
  Extremes ext;
  std::size_t evaluations = 0;

  struct Entry {
    double bound;
    std::size_t id;
  };
  // Ties resolved by box id, so the search order is fully deterministic.
  auto hi_less = [](const Entry& a, const Entry& b) {
    return a.bound < b.bound || (a.bound == b.bound && a.id > b.id);
  };
  auto lo_less = [](const Entry& a, const Entry& b) {
    return a.bound > b.bound || (a.bound == b.bound && a.id > b.id);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(hi_less)> upper(hi_less);
  std::priority_queue<Entry, std::vector<Entry>, decltype(lo_less)> lower(lo_less);

  auto add_box = [&](std::vector<double> lo, std::vector<double> width) {
    Box b{std::move(lo), std::move(width)};
    std::vector<double> centre(k);
    double r2 = 0.0, axis_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      centre[j] = b.lo[j] + 0.5 * b.width[j];
      r2 += 0.25 * b.width[j] * b.width[j];
      axis_sum += 0.5 * partial[j] * b.width[j];
    }
    // the smaller of the isotropic and the per-axis variation bound
    b.variation = std::min(lip * std::sqrt(r2), axis_sum);
    b.value = f.eval(embed(sub, centre));
    ++evaluations;
    ext.offer_tiebreak(b.value, centre);
    const std::size_t id = boxes.size();
    upper.push({b.value + b.variation, id});
    lower.push({b.value - b.variation, id});
    boxes.push_back(std::move(b));
  };

  // Level 0: the 2^k boxes of side 1/2.
  const std::size_t initial = std::size_t{1} << k;
  for (std::size_t mask = 0; mask < initial; ++mask) {
    std::vector<double> lo(k), width(k, 0.5);
    for (std::size_t j = 0; j < k; ++j) lo[j] = (mask >> (k - 1 - j)) & 1U ? 0.5 : 0.0;
    add_box(std::move(lo), std::move(width));
  }

  bool exhausted = false;
  double sup_ub = 0.0, inf_lb = 0.0;
  for (;;) {
    while (!upper.empty() && boxes[upper.top().id].split) upper.pop();
    while (!lower.empty() && boxes[lower.top().id].split) lower.pop();
    sup_ub = upper.empty() ? ext.max_value : std::max(ext.max_value, upper.top().bound);
    inf_lb = lower.empty() ? ext.min_value : std::min(ext.min_value, lower.top().bound);
    const double upper_slack = sup_ub - ext.max_value;
    const double lower_slack = ext.min_value - inf_lb;
    if (upper_slack + lower_slack <= target_gap) break;
    if (evaluations + 2 > budget) {
      exhausted = true;
      break;
    }
    const std::size_t id = upper_slack >= lower_slack ? upper.top().id : lower.top().id;
    boxes[id].split = true;
    const auto& parent = boxes[id];
    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double w = parent.width[j] * std::max(partial[j], 1e-300);
      if (w > widest) {
        widest = w;
        axis = j;
      }
    }
    std::vector<double> lo = parent.lo, width = parent.width;
    width[axis] *= 0.5;
    std::vector<double> lo2 = lo;
    lo2[axis] += width[axis];
    add_box(std::move(lo), width);
    add_box(std::move(lo2), std::move(width));
  }

  OscCertificate cert;
  cert.max_value = ext.max_value;
  cert.min_value = ext.min_value;
  cert.argmax = embed(sub, ext.argmax);
  cert.argmin = embed(sub, ext.argmin);
  cert.osc_lower = ext.max_value - ext.min_value;
  cert.osc_upper = std::max(cert.osc_lower, sup_ub - inf_lb);
  cert.evaluations = evaluations;
  cert.lipschitz_used = lip;
  double finest = 1.0;
  for (const auto& b : boxes)
    for (double w : b.width) finest = std::min(finest, w);
  cert.mesh = finest;
  cert.exhausted = exhausted;
  return cert;
}

OscCertificate intersect(const OscCertificate& a, const OscCertificate& b) {
  OscCertificate c = a;
  if (b.max_value > a.max_value) {
    c.max_value = b.max_value;
    c.argmax = b.argmax;
  }
  if (b.min_value < a.min_value) {
    c.min_value = b.min_value;
    c.argmin = b.argmin;
  }
  c.osc_lower = c.max_value - c.min_value;
  c.osc_upper = std::max(c.osc_lower, std::min(a.osc_upper, b.osc_upper));
  c.evaluations = a.evaluations + b.evaluations;
  c.mesh = std::min(a.mesh, b.mesh);
  c.exhausted = a.exhausted || b.exhausted;
  return c;
}

const char* to_string(OscDecision d) noexcept {
  switch (d) {
    case OscDecision::Success: return "success";
    case OscDecision::Failure: return "failure";
    case OscDecision::Undecided: return "undecided";
  }
  return "undecided";
}

OscDecision decide(const OscCertificate& cert, double eps) noexcept {
  if (cert.osc_upper <= eps) return OscDecision::Success;
  if (cert.osc_lower > eps) return OscDecision::Failure;
  return OscDecision::Undecided;
}

OscIndicator osc_success_indicator(const FunctionSpec& f, const SubtorusSpec& sub, double eps,
                                   const GapPolicy& policy, unsigned threads) {
  OscIndicator out;
  out.certificate = grid_osc(f, sub, policy.grid_m, threads);
  out.decision = decide(out.certificate, eps);
  if (out.decision != OscDecision::Undecided || !policy.refine) return out;
  const auto refined = refine_osc(f, sub, policy.target_gap, policy.budget);
  out.certificate = intersect(out.certificate, refined);
  out.decision = decide(out.certificate, eps);
  return out;
}

}  // namespace torlab
