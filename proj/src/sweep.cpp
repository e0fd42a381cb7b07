#include "curvedcomb/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curvedcomb/transduction.hpp"

namespace curvedcomb {

namespace {

void check_range(const Range& range, const char* name) {
  std::ostringstream msg;
  if (!std::isfinite(range.min) || !std::isfinite(range.max) ||
      !(range.min < range.max)) {
    msg << name << ": min must be < max (got [" << range.min << ", "
        << range.max << "])";
    throw PlanError(msg.str());
  }
  if (range.count < 2) {
    msg << name << ": point count must be >= 2 (got " << range.count << ")";
    throw PlanError(msg.str());
  }
}

std::string reason_of(const std::exception& e) { return e.what(); }

// Valid at both ends of the displacement envelope.
std::optional<std::string> envelope_violation(const ElectrodeConfig& config,
                                              double gap_m, double delta_max) {
  for (double delta : {delta_max, -delta_max}) {
    const GeometryReport report =
        validate_geometry(config, GapState{gap_m, delta});
    if (!report.ok()) return report.describe();
  }
  return std::nullopt;
}

double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.variant != b.variant) return a.variant < b.variant;
                     if (a.arc_length_m != b.arc_length_m)
                       return a.arc_length_m < b.arc_length_m;
                     return a.accel_g < b.accel_g;
                   });
}

}  // namespace

std::string_view to_string(ArcMode mode) {
  return mode == ArcMode::VaryPhiFixedR ? "vary_phi_fixed_r"
                                        : "vary_r_fixed_arc";
}

std::optional<ArcMode> parse_arc_mode(std::string_view name) {
  if (name == "vary_phi_fixed_r") return ArcMode::VaryPhiFixedR;
  if (name == "vary_r_fixed_arc") return ArcMode::VaryRFixedArc;
  return std::nullopt;
}

std::vector<double> Range::points() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  if (count == 1) {
    out[0] = min;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] = min + t * (max - min);
  }
  if (count >= 2) out.back() = max;
  return out;
}

void validate_plan(const SweepPlan& plan) {
  if (plan.variants.empty()) throw PlanError("plan has no variants");
  check_range(plan.arc_range_m, "arc range");
  check_range(plan.accel_range_g, "acceleration range");
  if (!(plan.arc_range_m.min > 0)) throw PlanError("arc range must be > 0");
  if (!(plan.gap_m > 0)) throw PlanError("gap must be > 0");
  if (plan.arc_mode == ArcMode::VaryRFixedArc &&
      !(plan.base_profile.angular_extent_rad() > 0)) {
    throw PlanError("vary_r_fixed_arc needs a base angular extent > 0");
  }
  for (Variant v : plan.variants) {
    const GeometryReport report = validate_geometry(
        ElectrodeConfig(v, plan.base_profile), GapState{plan.gap_m, 0.0});
    if (!report.ok()) {
      throw PlanError(std::string(to_string(v)) +
                      ": base geometry invalid: " + report.describe());
    }
  }
}

ArcProfile profile_for_arc(const ArcProfile& base, ArcMode mode,
                           double arc_length_m) {
  if (mode == ArcMode::VaryPhiFixedR) {
    return ArcProfile::from_arc_length(base.radius_m(), arc_length_m,
                                       base.thickness_m());
  }
  const double phi = base.angular_extent_rad();
  return ArcProfile(arc_length_m / phi, phi, base.thickness_m());
}

double max_displacement(const SweepPlan& plan) {
  const double a = std::max(std::abs(plan.accel_range_g.min),
                            std::abs(plan.accel_range_g.max));
  return std::abs(displacement(plan.mech, a * kStandardGravity));
}

SweepResult gain_curve(const SweepPlan& plan) {
  validate_plan(plan);
  SweepResult result{
      .rows = {}, .plan = plan, .version = kVersion, .skipped = {}, .slopes = {}};
  const std::vector<double> accels = plan.accel_range_g.points();
  const ArcProfile& arc = plan.base_profile;

  for (Variant v : plan.variants) {
    const ElectrodeConfig config(v, arc);
    std::vector<double> xs;
    std::vector<double> ys;
    for (double a_g : accels) {
      try {
        const TransductionPoint p = gain(config, plan.gap_m, plan.mech,
                                         plan.drive, a_g * kStandardGravity);
        const double s = sensitivity(config, plan.gap_m, plan.mech,
                                     plan.drive, a_g * kStandardGravity);
        result.rows.push_back(SweepRow{
            v, arc.arc_length(), arc.radius_m(), arc.angular_extent_rad(), a_g,
            p.displacement_m, p.bridge.c1_f, p.bridge.c2_f, p.gain,
            p.v_out_volts, s * 1e3, net_sensitivity(s, plan.mech) * 1e3});
        xs.push_back(a_g);
        ys.push_back(p.v_out_volts);
      } catch (const DomainError& e) {
        result.skipped.push_back({v, arc.arc_length(), a_g, reason_of(e)});
      }
    }
    if (xs.size() >= 2) {
      const double analytic =
          sensitivity(config, plan.gap_m, plan.mech, plan.drive, 0.0);
      result.slopes.push_back(VariantSlope{
          v, least_squares_slope(xs, ys) * 1e3, analytic * 1e3,
          static_cast<int>(xs.size())});
    }
  }
  sort_rows(result.rows);
  return result;
}

SweepResult sensitivity_sweep(const SweepPlan& plan) {
  validate_plan(plan);
  SweepResult result{
      .rows = {}, .plan = plan, .version = kVersion, .skipped = {}, .slopes = {}};
  const double delta_max = max_displacement(plan);

  for (Variant v : plan.variants) {
    for (double arc_length : plan.arc_range_m.points()) {
      try {
        const ArcProfile arc =
            profile_for_arc(plan.base_profile, plan.arc_mode, arc_length);
        const ElectrodeConfig config(v, arc);
        if (auto bad = envelope_violation(config, plan.gap_m, delta_max)) {
          result.skipped.push_back({v, arc_length, 0.0, *bad});
          continue;
        }
        const TransductionPoint p =
            gain(config, plan.gap_m, plan.mech, plan.drive, 0.0);
        const double s = sensitivity(config, plan.gap_m, plan.mech, plan.drive);
        result.rows.push_back(SweepRow{
            v, arc_length, arc.radius_m(), arc.angular_extent_rad(), 0.0,
            p.displacement_m, p.bridge.c1_f, p.bridge.c2_f, p.gain,
            p.v_out_volts, s * 1e3, net_sensitivity(s, plan.mech) * 1e3});
      } catch (const DomainError& e) {
        result.skipped.push_back({v, arc_length, 0.0, reason_of(e)});
      }
    }
  }
  sort_rows(result.rows);
  return result;
}

bool arc_is_feasible(Variant variant, double arc_length_m,
                     const OptimizerParams& params) {
  if (!(arc_length_m > 0)) return false;
  try {
    const ArcProfile arc =
        profile_for_arc(params.base_profile, params.arc_mode, arc_length_m);
    const ElectrodeConfig config(variant, arc);
    const double delta_max = std::abs(
        displacement(params.mech, params.max_accel_g * kStandardGravity));
    for (double delta : {delta_max, -delta_max}) {
      const GapState state{params.gap_m, delta};
      const GeometryReport report = validate_geometry(config, state);
      if (!report.ok()) return false;
      for (const SideReport& side : report.sides) {
        if (side.min_gap_m < params.min_edge_gap_fraction * side.gap_m &&
            side.kind == FaceKind::Concave) {
          return false;
        }
      }
    }
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

double sensitivity_at_arc(Variant variant, double arc_length_m,
                          const OptimizerParams& params) {
  const ArcProfile arc =
      profile_for_arc(params.base_profile, params.arc_mode, arc_length_m);
  return sensitivity(ElectrodeConfig(variant, arc), params.gap_m, params.mech,
                     params.drive, 0.0);
}

Optimum maximize_sensitivity(Variant variant, double arc_min_m,
                             double arc_max_m, const OptimizerParams& params) {
  if (!(arc_min_m <= arc_max_m)) {
    throw PlanError("optimizer bounds: min must be <= max");
  }
  auto feasible = [&](double L) { return arc_is_feasible(variant, L, params); };

  // Locate the feasible sub-interval on a coarse grid, then bisect its edges.
  constexpr int kGrid = 256;
  double lo = arc_min_m;
  double hi = arc_max_m;
  if (arc_min_m == arc_max_m) {
    if (!feasible(arc_min_m)) {
      throw PlanError(std::string(to_string(variant)) +
                      ": optimizer bounds entirely invalid");
    }
  } else {
    int first = -1;
    int last = -1;
    auto at = [&](int i) {
      return i == kGrid ? arc_max_m
                        : arc_min_m + (arc_max_m - arc_min_m) * i / kGrid;
    };
    for (int i = 0; i <= kGrid; ++i) {
      if (feasible(at(i))) {
        if (first < 0) first = i;
        last = i;
      } else if (first >= 0) {
        break;
      }
    }
    if (first < 0) {
      throw PlanError(std::string(to_string(variant)) +
                      ": optimizer bounds entirely invalid");
    }
    auto refine = [&](double good, double bad) {
      for (int k = 0; k < 200 && std::abs(good - bad) > 1e-15 * std::abs(good);
           ++k) {
        const double mid = 0.5 * (good + bad);
        if (mid == good || mid == bad) break;
        (feasible(mid) ? good : bad) = mid;
      }
      return good;
    };
    lo = first == 0 ? arc_min_m : refine(at(first), at(first - 1));
    hi = last == kGrid ? arc_max_m : refine(at(last), at(last + 1));
  }

  // Every evaluated point is a candidate, including both clipped ends.
  int evaluations = 0;
  double best_x = lo;
  double best_f = -1.0;
  auto objective = [&](double L) {
    ++evaluations;
    const double f = std::abs(sensitivity_at_arc(variant, L, params));
    if (f > best_f) {
      best_f = f;
      best_x = L;
    }
    return f;
  };

  objective(lo);
  if (hi > lo) {
    objective(hi);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > params.tolerance_m) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = objective(d);
      }
    }
    objective(0.5 * (a + b));
  }
  return Optimum{best_x, sensitivity_at_arc(variant, best_x, params), lo, hi,
                 evaluations};
}

}  // namespace curvedcomb
