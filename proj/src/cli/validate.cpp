#include "curvedcomb/cli/validate.hpp"

#include <cmath>
#include <sstream>

#include "curvedcomb/capacitance.hpp"
#include "curvedcomb/oracles.hpp"
#include "curvedcomb/transduction.hpp"

namespace curvedcomb::cli {

namespace {

double rel_error(double value, double reference) {
  if (reference == 0.0) return std::abs(value);
  return std::abs(value - reference) / std::abs(reference);
}

void record(SuiteResult& suite, double error, const std::string& where) {
  if (std::isnan(error)) error = INFINITY;
  if (suite.checks == 0 || error > suite.max_error) {
    suite.max_error = error;
    suite.worst_case = where;
  }
  ++suite.checks;
}

std::string describe_face(FaceKind kind, const ArcProfile& arc, double gap) {
  std::ostringstream s;
  s.precision(6);
  s << to_string(kind) << " R=" << arc.radius_m() << " phi="
    << arc.angular_extent_rad() << " gap=" << gap;
  return s.str();
}

std::string describe_point(Variant v, const ArcProfile& arc, double accel) {
  std::ostringstream s;
  s.precision(6);
  s << to_string(v) << " arc=" << arc.arc_length() << " a=" << accel;
  return s.str();
}

// Geometries exercised by the suites: the base profile plus the sweep grid.
std::vector<ArcProfile> profiles_under_test(const RunConfig& config) {
  std::vector<ArcProfile> out = {base_profile(config)};
  try {
    const SweepPlan plan = sweep_plan(config);
    for (double arc : plan.arc_range_m.points()) {
      try {
        out.push_back(profile_for_arc(plan.base_profile, plan.arc_mode, arc));
      } catch (const DomainError&) {
      }
    }
  } catch (const PlanError&) {
  }
  return out;
}

}  // namespace

bool ValidationSummary::passed() const {
  for (const auto& s : suites) {
    if (!s.passed()) return false;
  }
  return !suites.empty();
}

nlohmann::json ValidationSummary::to_json() const {
  nlohmann::json doc;
  doc["passed"] = passed();
  doc["suites"] = nlohmann::json::array();
  for (const auto& s : suites) {
    doc["suites"].push_back({{"name", s.name},
                             {"max_error", s.max_error},
                             {"tolerance", s.tolerance},
                             {"checks", s.checks},
                             {"worst_case", s.worst_case},
                             {"passed", s.passed()}});
  }
  return doc;
}

ValidationSummary run_validation(const RunConfig& config,
                                 const ValidationOptions& options) {
  const ArcProfile base = base_profile(config);
  const MechanicalModel mech = mechanics(config);
  const DriveModel drv = drive(config);
  const double gap = config.gap_um * 1e-6;
  const double eps = drv.permittivity();
  const double a_lo = config.sweep.accel_min_g * kStandardGravity;
  const double a_hi = config.sweep.accel_max_g * kStandardGravity;
  const double delta_max =
      std::max(std::abs(displacement(mech, a_lo)), std::abs(displacement(mech, a_hi)));

  // Contact anywhere in the configured envelope stops the run up front.
  for (Variant v : variants(config)) {
    const ElectrodeConfig ec(v, base);
    for (double delta : {0.0, delta_max, -delta_max}) {
      GeometryReport report = validate_geometry(ec, GapState{gap, delta});
      if (!report.ok()) {
        throw GeometryError(report, std::string(to_string(v)) +
                                        ": invalid geometry: " +
                                        report.describe());
      }
    }
  }

  const std::vector<ArcProfile> profiles = profiles_under_test(config);
  ValidationSummary summary;

  SuiteResult quad{"quadrature", 0.0, kQuadratureTolerance, 0, ""};
  SuiteResult deriv{"derivative", 0.0, kDerivativeTolerance, 0, ""};
  SuiteResult sym{"symmetry", 0.0, kSymmetryTolerance, 0, ""};

  const double scale = 1.0 + options.closed_form_perturbation;
  oracles::FiniteDiffSpec gap_fd;
  gap_fd.scale = gap;

  for (const ArcProfile& arc : profiles) {
    const PlanarProfile flat(arc.arc_length(), arc.thickness_m());
    for (FaceKind kind : {FaceKind::Convex, FaceKind::Concave, FaceKind::Flat}) {
      const Face face{kind, arc, flat};
      for (double g : {gap, gap - delta_max, gap + delta_max}) {
        if (!(g > 0)) continue;
        if (kind == FaceKind::Concave &&
            !(face_min_gap(face, g) > 1e-3 * g && g < 2.0 * arc.radius_m())) {
          continue;
        }
        const double closed = capacitance(face, g, eps) * scale;
        const double numeric = oracles::quad_capacitance(face, g, eps).value;
        record(quad, rel_error(closed, numeric), describe_face(kind, arc, g));

        if (kind == FaceKind::Flat) continue;
        const double analytic = dcap_dgap(face, g, eps);
        const auto fd = oracles::fd_derivative(
            [&](double x) { return capacitance(face, x, eps); }, g, gap_fd);
        record(deriv, rel_error(analytic, fd.derivative),
               "dC/dd " + describe_face(kind, arc, g));
      }
    }
  }

  oracles::FiniteDiffSpec accel_fd;
  accel_fd.scale = gap * mech.spring_n_per_m() / mech.mass_kg();
  for (const ArcProfile& arc : profiles) {
    for (Variant v : kAllVariants) {
      const ElectrodeConfig ec(v, arc);
      const bool base_geometry = &arc == &profiles.front();
      std::vector<double> accels = {0.0};
      if (base_geometry) accels = {a_lo, 0.0, a_hi};
      for (double a : accels) {
        try {
          const double s = sensitivity(ec, gap, mech, drv, a);
          const auto fd = oracles::fd_derivative(
              [&](double x) {
                return gain(ec, gap, mech, drv, x).v_out_volts;
              },
              a, accel_fd);
          record(deriv, rel_error(s, fd.derivative * kStandardGravity),
                 "S " + describe_point(v, arc, a));
        } catch (const DomainError&) {
          // Off-domain grid points are not part of the suite.
        }
      }
    }
  }

  const std::vector<double> accel_grid = [&] {
    std::vector<double> out;
    for (double a_g : Range{config.sweep.accel_min_g, config.sweep.accel_max_g,
                            std::max(config.sweep.accel_points, 2)}
                          .points()) {
      if (a_g != 0.0) out.push_back(a_g * kStandardGravity);
    }
    return out;
  }();
  const ElectrodeConfig cc(Variant::ConcavoConvex, base);
  const ElectrodeConfig vc(Variant::ConvexoConcave, base);
  for (double a : accel_grid) {
    for (Variant v : {Variant::Planar, Variant::Biconvex, Variant::Biconcave}) {
      const ElectrodeConfig ec(v, base);
      const double g_pos = gain(ec, gap, mech, drv, a).gain;
      const double g_neg = gain(ec, gap, mech, drv, -a).gain;
      record(sym, std::abs(g_pos + g_neg) / std::abs(g_pos),
             "odd gain " + describe_point(v, base, a));
    }
    const double g_cc = gain(cc, gap, mech, drv, a).gain;
    const double g_vc = gain(vc, gap, mech, drv, -a).gain;
    record(sym, std::abs(g_cc + g_vc) / std::abs(g_cc),
           "polarity " + describe_point(Variant::ConcavoConvex, base, a));

    if (drv.feedback_mode() == FeedbackMode::MatchedSum) {
      const ElectrodeConfig planar(Variant::Planar, base);
      const TransductionPoint p = gain(planar, gap, mech, drv, a);
      record(sym, rel_error(p.gain, p.displacement_m / gap),
             "planar gain " + describe_point(Variant::Planar, base, a));
      const double s = sensitivity(planar, gap, mech, drv, a);
      const double exact = drv.v_in_volts() * mech.mass_kg() * kStandardGravity /
                           (mech.spring_n_per_m() * gap);
      record(sym, rel_error(s, exact),
             "planar S " + describe_point(Variant::Planar, base, a));
    }
  }

  summary.suites = {quad, deriv, sym};
  return summary;
}

}  // namespace curvedcomb::cli
