#include "curvedcomb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace curvedcomb {

namespace {

void require(bool condition, const char* what) {
  if (!condition) throw DomainError(GeometryRule::InvalidParameter, what);
}

constexpr std::array<std::string_view, 7> kVariantNames = {
    "planar",          "biconvex",     "biconcave",     "concavo_convex",
    "convexo_concave", "plano_convex", "plano_concave",
};

}  // namespace

std::string_view to_string(FaceKind kind) {
  switch (kind) {
    case FaceKind::Convex: return "convex";
    case FaceKind::Concave: return "concave";
    case FaceKind::Flat: return "flat";
  }
  return "?";
}

std::string_view to_string(Side side) {
  return side == Side::One ? "side1" : "side2";
}

std::string_view to_string(Variant variant) {
  return kVariantNames[static_cast<std::size_t>(variant)];
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
    if (kVariantNames[i] == name) return kAllVariants[i];
  }
  return std::nullopt;
}

std::optional<FaceKind> parse_face_kind(std::string_view name) {
  if (name == "convex") return FaceKind::Convex;
  if (name == "concave") return FaceKind::Concave;
  if (name == "flat" || name == "planar") return FaceKind::Flat;
  return std::nullopt;
}

std::string_view to_string(GeometryRule rule) {
  switch (rule) {
    case GeometryRule::NonPositiveGap: return "non-positive gap";
    case GeometryRule::DisplacementExceedsGap: return "displacement exceeds gap";
    case GeometryRule::EdgeContact: return "edge contact";
    case GeometryRule::BeyondDiameter: return "gap beyond arc diameter";
    case GeometryRule::InvalidParameter: return "invalid parameter";
  }
  return "?";
}

std::string_view to_string(FeedbackMode mode) {
  return mode == FeedbackMode::MatchedSum ? "matched_sum" : "nominal";
}

std::optional<FeedbackMode> parse_feedback_mode(std::string_view name) {
  if (name == "matched_sum") return FeedbackMode::MatchedSum;
  if (name == "nominal") return FeedbackMode::Nominal;
  return std::nullopt;
}

ArcProfile::ArcProfile(double radius_m, double angular_extent_rad,
                       double thickness_m)
    : radius_(radius_m), phi_(angular_extent_rad), thickness_(thickness_m) {
  require(std::isfinite(radius_m) && radius_m > 0, "arc radius must be > 0");
  require(std::isfinite(thickness_m) && thickness_m > 0,
          "arc thickness must be > 0");
  require(angular_extent_rad >= 0 && angular_extent_rad < std::numbers::pi,
          "arc angular extent must lie in [0, pi)");
}

ArcProfile ArcProfile::from_arc_length(double radius_m, double arc_length_m,
                                       double thickness_m) {
  require(std::isfinite(radius_m) && radius_m > 0, "arc radius must be > 0");
  return ArcProfile(radius_m, arc_length_m / radius_m, thickness_m);
}

double ArcProfile::sagitta() const noexcept {
  const double s = std::sin(phi_ / 4.0);
  return 2.0 * radius_ * s * s;
}

double ArcProfile::half_tan() const noexcept { return std::tan(phi_ / 4.0); }

PlanarProfile::PlanarProfile(double length_m, double thickness_m)
    : length_(length_m), thickness_(thickness_m) {
  require(std::isfinite(length_m) && length_m >= 0,
          "planar length must be >= 0");
  require(std::isfinite(thickness_m) && thickness_m > 0,
          "planar thickness must be > 0");
}

ElectrodeConfig::ElectrodeConfig(Variant variant, const ArcProfile& arc)
    : variant_(variant),
      arc_(arc),
      flat_(arc.arc_length(), arc.thickness_m()) {}

ElectrodeConfig::ElectrodeConfig(Variant variant, const ArcProfile& arc,
                                 const PlanarProfile& flat)
    : variant_(variant), arc_(arc), flat_(flat) {
  if (variant == Variant::PlanoConvex || variant == Variant::PlanoConcave) {
    const double rel = std::abs(flat.length_m() - arc.arc_length()) /
                       std::max(arc.arc_length(), 1e-300);
    require(rel <= 1e-12,
            "mixed planar/curved variants need planar length == arc length");
  }
}

FaceKind ElectrodeConfig::side_kind(Side side) const noexcept {
  const bool one = side == Side::One;
  switch (variant_) {
    case Variant::Planar: return FaceKind::Flat;
    case Variant::Biconvex: return FaceKind::Convex;
    case Variant::Biconcave: return FaceKind::Concave;
    case Variant::ConcavoConvex: return one ? FaceKind::Convex : FaceKind::Concave;
    case Variant::ConvexoConcave: return one ? FaceKind::Concave : FaceKind::Convex;
    case Variant::PlanoConvex: return one ? FaceKind::Convex : FaceKind::Flat;
    case Variant::PlanoConcave: return one ? FaceKind::Concave : FaceKind::Flat;
  }
  return FaceKind::Flat;
}

MechanicalModel::MechanicalModel(double mass_kg, double spring_n_per_m,
                                 int comb_count)
    : mass_(mass_kg), spring_(spring_n_per_m), combs_(comb_count) {
  require(std::isfinite(mass_kg) && mass_kg > 0, "mass must be > 0");
  require(std::isfinite(spring_n_per_m) && spring_n_per_m > 0,
          "spring constant must be > 0");
  require(comb_count >= 1, "comb count must be >= 1");
}

DriveModel::DriveModel(double v_in_volts, FeedbackMode mode,
                       double permittivity_f_per_m)
    : v_in_(v_in_volts), mode_(mode), permittivity_(permittivity_f_per_m) {
  require(std::isfinite(v_in_volts) && v_in_volts > 0, "V_in must be > 0");
  require(std::isfinite(permittivity_f_per_m) && permittivity_f_per_m > 0,
          "permittivity must be > 0");
}

double displacement(const MechanicalModel& mech, double accel_m_s2) noexcept {
  return mech.mass_kg() * accel_m_s2 / mech.spring_n_per_m();
}

double estimate_plate_mass(double length_m, double width_m, double thickness_m,
                           double density_kg_m3) {
  require(length_m > 0 && width_m > 0 && thickness_m > 0 && density_kg_m3 > 0,
          "plate dimensions and density must be > 0");
  return length_m * width_m * thickness_m * density_kg_m3;
}

double face_min_gap(const Face& face, double gap_m) noexcept {
  if (face.kind == FaceKind::Concave) return gap_m - face.arc.sagitta();
  return gap_m;
}

GeometryReport validate_geometry(const ElectrodeConfig& config,
                                 const GapState& gap) {
  GeometryReport report{};
  const bool nominal_ok = gap.gap_m > 0;

  for (Side side : {Side::One, Side::Two}) {
    const Face face = config.face(side);
    const double g = gap.side_gap(side);
    SideReport& sr = report.sides[side == Side::One ? 0 : 1];
    sr = SideReport{side, face.kind, g, face_min_gap(face, g), std::nullopt};

    if (g <= 0) {
      const auto rule = nominal_ok ? GeometryRule::DisplacementExceedsGap
                                   : GeometryRule::NonPositiveGap;
      report.violations.push_back({side, rule, g});
      continue;
    }
    if (face.kind != FaceKind::Concave) continue;

    const double two_r = 2.0 * face.arc.radius_m();
    if (g < two_r) {
      sr.atanh_argument =
          face.arc.half_tan() * std::sqrt((two_r - g) / g);
    } else {
      report.violations.push_back(
          {side, GeometryRule::BeyondDiameter, two_r - g});
    }
    const double edge = sr.min_gap_m;
    if (!(edge > kContactTolerance * g)) {
      report.violations.push_back({side, GeometryRule::EdgeContact, edge});
    }
  }
  return report;
}

std::string GeometryReport::describe() const {
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (const auto& v : violations) {
    if (!first) out << "; ";
    first = false;
    out << to_string(v.side) << ": " << to_string(v.rule)
        << " (margin " << v.margin_m << " m)";
  }
  return out.str();
}

}  // namespace curvedcomb
