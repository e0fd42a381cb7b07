#pragma once

// Differential bridge readout: C1 (gap d - delta) and C2 (gap d + delta)
// drive a charge amplifier with feedback C_fb, giving
//   G = V_out / V_in = -(C2 - C1) / C_fb.

#include <string>
#include <vector>

#include "curvedcomb/model.hpp"

namespace curvedcomb {

struct BridgeState {
  double c1_f = 0.0;
  double c2_f = 0.0;
  double c_fb_f = 0.0;
};

struct TransductionPoint {
  double accel_m_s2 = 0.0;
  double displacement_m = 0.0;
  BridgeState bridge;
  double gain = 0.0;
  double v_out_volts = 0.0;
};

/// Geometry failure while assembling the bridge; carries the side report.
class GeometryError : public DomainError {
 public:
  GeometryError(GeometryReport report, const std::string& what);
  const GeometryReport& report() const noexcept { return report_; }

 private:
  GeometryReport report_;
};

/// Acceleration pushes the movable electrode past the valid domain.
class OverRangeError : public GeometryError {
 public:
  OverRangeError(GeometryReport report, double accel_m_s2,
                 double limit_accel_m_s2);
  double accel_m_s2() const noexcept { return accel_; }
  /// First acceleration (same sign as accel_m_s2) at which a side fails.
  double limit_accel_m_s2() const noexcept { return limit_; }

 private:
  double accel_;
  double limit_;
};

BridgeState bridge_capacitances(const ElectrodeConfig& config,
                                const GapState& gap, const DriveModel& drive);

/// Largest |delta| in the given direction (sign of `direction`) before a side
/// of the configuration leaves its domain.
double displacement_limit(const ElectrodeConfig& config, double gap_m,
                          double direction);

TransductionPoint gain(const ElectrodeConfig& config, double gap_nominal_m,
                       const MechanicalModel& mech, const DriveModel& drive,
                       double accel_m_s2);

/// dG/d(delta) at the operating point, from the exact gap derivatives.
double gain_slope(const ElectrodeConfig& config, double gap_nominal_m,
                  double displacement_m, const DriveModel& drive);

/// dV_out/da in volts per g (g0 = 9.80665 m/s^2).
double sensitivity(const ElectrodeConfig& config, double gap_nominal_m,
                   const MechanicalModel& mech, const DriveModel& drive,
                   double accel_m_s2 = 0.0);

/// N * S: scaling by comb count (paper-scaling; note N cancels in the
/// ratio readout itself).
double net_sensitivity(double s_per_comb, const MechanicalModel& mech) noexcept;

}  // namespace curvedcomb
