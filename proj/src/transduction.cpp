#include "curvedcomb/transduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "curvedcomb/capacitance.hpp"

namespace curvedcomb {

namespace {

GeometryRule first_rule(const GeometryReport& report) {
  return report.violations.empty() ? GeometryRule::InvalidParameter
                                   : report.violations.front().rule;
}

std::string over_range_message(const GeometryReport& report, double accel,
                               double limit) {
  std::ostringstream msg;
  msg.precision(10);
  msg << "acceleration " << accel << " m/s^2 is over range (first invalid "
      << "acceleration " << limit << " m/s^2): " << report.describe();
  return msg.str();
}

void require_valid(const ElectrodeConfig& config, const GapState& gap) {
  GeometryReport report = validate_geometry(config, gap);
  if (!report.ok()) {
    std::string what = std::string(to_string(config.variant())) +
                       ": invalid geometry: " + report.describe();
    throw GeometryError(std::move(report), what);
  }
}

// Feedback capacitance for the chosen mode.
double feedback_capacitance(const ElectrodeConfig& config, double gap_nominal,
                            const BridgeState& bridge, const DriveModel& drive) {
  if (drive.feedback_mode() == FeedbackMode::MatchedSum) {
    return bridge.c1_f + bridge.c2_f;
  }
  // 2 C0 with C0 the mean of the two sides at zero displacement.
  const double eps = drive.permittivity();
  return capacitance(config.face(Side::One), gap_nominal, eps) +
         capacitance(config.face(Side::Two), gap_nominal, eps);
}

}  // namespace

GeometryError::GeometryError(GeometryReport report, const std::string& what)
    : DomainError(first_rule(report), what), report_(std::move(report)) {}

OverRangeError::OverRangeError(GeometryReport report, double accel_m_s2,
                               double limit_accel_m_s2)
    : GeometryError(report, over_range_message(report, accel_m_s2,
                                               limit_accel_m_s2)),
      accel_(accel_m_s2),
      limit_(limit_accel_m_s2) {}

BridgeState bridge_capacitances(const ElectrodeConfig& config,
                                const GapState& gap, const DriveModel& drive) {
  require_valid(config, gap);
  const double eps = drive.permittivity();
  BridgeState bridge;
  bridge.c1_f = capacitance(config.face(Side::One), gap.side_gap(Side::One), eps);
  bridge.c2_f = capacitance(config.face(Side::Two), gap.side_gap(Side::Two), eps);
  bridge.c_fb_f = feedback_capacitance(config, gap.gap_m, bridge, drive);
  return bridge;
}

double displacement_limit(const ElectrodeConfig& config, double gap_m,
                          double direction) {
  // Positive direction narrows side 1 and widens side 2.
  const Side narrowing = direction >= 0 ? Side::One : Side::Two;
  const Side widening = direction >= 0 ? Side::Two : Side::One;

  double limit = gap_m;
  const Face near = config.face(narrowing);
  if (near.kind == FaceKind::Concave) {
    limit = gap_m - near.arc.sagitta() / (1.0 - kContactTolerance);
  }
  const Face far = config.face(widening);
  if (far.kind == FaceKind::Concave) {
    limit = std::min(limit, 2.0 * far.arc.radius_m() - gap_m);
  }
  return std::max(limit, 0.0);
}

TransductionPoint gain(const ElectrodeConfig& config, double gap_nominal_m,
                       const MechanicalModel& mech, const DriveModel& drive,
                       double accel_m_s2) {
  require_valid(config, GapState{gap_nominal_m, 0.0});

  TransductionPoint point;
  point.accel_m_s2 = accel_m_s2;
  point.displacement_m = displacement(mech, accel_m_s2);

  const GapState state{gap_nominal_m, point.displacement_m};
  GeometryReport report = validate_geometry(config, state);
  if (!report.ok()) {
    const double dir = accel_m_s2 >= 0 ? 1.0 : -1.0;
    const double limit = dir * displacement_limit(config, gap_nominal_m, dir) *
                         mech.spring_n_per_m() / mech.mass_kg();
    throw OverRangeError(std::move(report), accel_m_s2, limit);
  }

  point.bridge = bridge_capacitances(config, state, drive);
  point.gain = (point.bridge.c1_f - point.bridge.c2_f) / point.bridge.c_fb_f;
  point.v_out_volts = drive.v_in_volts() * point.gain;
  return point;
}

double gain_slope(const ElectrodeConfig& config, double gap_nominal_m,
                  double displacement_m, const DriveModel& drive) {
  const GapState state{gap_nominal_m, displacement_m};
  const BridgeState bridge = bridge_capacitances(config, state, drive);
  const double eps = drive.permittivity();

  // d(C1)/d(delta) = -C1'(d - delta), d(C2)/d(delta) = +C2'(d + delta)
  const double dc1 =
      -dcap_dgap(config.face(Side::One), state.side_gap(Side::One), eps);
  const double dc2 =
      dcap_dgap(config.face(Side::Two), state.side_gap(Side::Two), eps);

  if (drive.feedback_mode() == FeedbackMode::MatchedSum) {
    const double sum = bridge.c1_f + bridge.c2_f;
    return 2.0 * (dc1 * bridge.c2_f - dc2 * bridge.c1_f) / (sum * sum);
  }
  return (dc1 - dc2) / bridge.c_fb_f;
}

double sensitivity(const ElectrodeConfig& config, double gap_nominal_m,
                   const MechanicalModel& mech, const DriveModel& drive,
                   double accel_m_s2) {
  const TransductionPoint point =
      gain(config, gap_nominal_m, mech, drive, accel_m_s2);
  const double slope =
      gain_slope(config, gap_nominal_m, point.displacement_m, drive);
  return drive.v_in_volts() * (mech.mass_kg() / mech.spring_n_per_m()) *
         slope * kStandardGravity;
}

double net_sensitivity(double s_per_comb, const MechanicalModel& mech) noexcept {
  return static_cast<double>(mech.comb_count()) * s_per_comb;
}

}  // namespace curvedcomb
