#pragma once

// Design-space sweeps over acceleration and arc length, and a bounded
// one-dimensional maximization of sensitivity over arc length.

#include <stdexcept>
#include <string>
#include <vector>

#include "curvedcomb/model.hpp"

namespace curvedcomb {

inline constexpr const char* kVersion = "1.0.0";

/// How an arc length L maps to (R, phi) during a sweep.
enum class ArcMode {
  VaryPhiFixedR,  // R from the base profile, phi = L / R
  VaryRFixedArc,  // phi from the base profile, R = L / phi
};

std::string_view to_string(ArcMode mode);
std::optional<ArcMode> parse_arc_mode(std::string_view name);

struct Range {
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  /// Evenly spaced, endpoints exact.
  std::vector<double> points() const;
};

class PlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SweepPlan {
  std::vector<Variant> variants;
  ArcProfile base_profile;  // geometry of gain curves; supplies R or phi
  ArcMode arc_mode = ArcMode::VaryPhiFixedR;
  Range arc_range_m;
  Range accel_range_g;
  double gap_m;
  MechanicalModel mech;
  DriveModel drive;
};

/// Structural checks (non-empty variant list, ordered ranges, counts >= 2,
/// positive gap, valid base geometry at zero displacement). Throws PlanError.
void validate_plan(const SweepPlan& plan);

ArcProfile profile_for_arc(const ArcProfile& base, ArcMode mode,
                           double arc_length_m);

/// Largest |delta| produced by the plan's acceleration range.
double max_displacement(const SweepPlan& plan);

struct SweepRow {
  Variant variant;
  double arc_length_m;
  double radius_m;
  double phi_rad;
  double accel_g;
  double displacement_m;
  double c1_f;
  double c2_f;
  double gain;
  double v_out_v;
  double s_mv_per_g;
  double s_net_mv_per_g;  // paper-scaling N * S
};

struct SkippedPoint {
  Variant variant;
  double arc_length_m;
  double accel_g;
  std::string reason;
};

struct VariantSlope {
  Variant variant;
  double fitted_mv_per_g;    // least-squares slope of V_out vs a
  double analytic_mv_per_g;  // exact derivative at a = 0
  int points;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (variant, arc length, accel)
  SweepPlan plan;
  std::string version = kVersion;
  std::vector<SkippedPoint> skipped;
  std::vector<VariantSlope> slopes;  // gain curves only
};

/// V_out against acceleration at the base geometry, one curve per variant.
SweepResult gain_curve(const SweepPlan& plan);

/// Per-comb and net sensitivity at a = 0 across the arc-length grid.
SweepResult sensitivity_sweep(const SweepPlan& plan);

struct OptimizerParams {
  ArcProfile base_profile;
  ArcMode arc_mode = ArcMode::VaryPhiFixedR;
  double gap_m;
  MechanicalModel mech;
  DriveModel drive;
  double max_accel_g = 0.0;            // displacement envelope to keep valid
  double min_edge_gap_fraction = 1e-3;  // concave edge gap / side gap
  double tolerance_m = 1e-10;
};

struct Optimum {
  double arc_length_m;
  double sensitivity_v_per_g;  // signed S at the optimum
  double feasible_min_m;       // bounds actually searched
  double feasible_max_m;
  int evaluations;
};

/// Does arc length L keep every side valid (with the edge-gap margin)?
bool arc_is_feasible(Variant variant, double arc_length_m,
                     const OptimizerParams& params);

/// Golden-section search of |S(L)| on [arc_min, arc_max] clipped to the
/// feasible region; the clipped endpoints are also candidates, so monotone
/// objectives return a boundary. Throws PlanError when nothing is feasible.
Optimum maximize_sensitivity(Variant variant, double arc_min_m,
                             double arc_max_m, const OptimizerParams& params);

/// Signed S at arc length L (volts per g), a = 0. The search maximizes |S|.
double sensitivity_at_arc(Variant variant, double arc_length_m,
                          const OptimizerParams& params);

}  // namespace curvedcomb
