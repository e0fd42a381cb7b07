#pragma once

// Domain types for a 1-axis capacitive accelerometer with curved fixed
// electrodes. Everything is SI: meters, kilograms, farads, volts, m/s^2.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curvedcomb {

inline constexpr double kStandardGravity = 9.80665;      // m/s^2, exact
inline constexpr double kVacuumPermittivity = 8.854e-12;  // F/m
inline constexpr double kPolysiliconDensity = 2320.0;     // kg/m^3

/// Relative edge-gap margin below which a concave face counts as touching.
inline constexpr double kContactTolerance = 1e-12;

enum class FaceKind { Convex, Concave, Flat };

enum class Side { One, Two };

enum class Variant {
  Planar,
  Biconvex,
  Biconcave,
  ConcavoConvex,
  ConvexoConcave,
  PlanoConvex,
  PlanoConcave,
};

inline constexpr std::array<Variant, 7> kAllVariants = {
    Variant::Planar,        Variant::Biconvex,       Variant::Biconcave,
    Variant::ConcavoConvex, Variant::ConvexoConcave, Variant::PlanoConvex,
    Variant::PlanoConcave,
};

std::string_view to_string(FaceKind kind);
std::string_view to_string(Side side);
std::string_view to_string(Variant variant);
std::optional<Variant> parse_variant(std::string_view name);
std::optional<FaceKind> parse_face_kind(std::string_view name);

enum class GeometryRule {
  NonPositiveGap,
  DisplacementExceedsGap,
  EdgeContact,
  BeyondDiameter,
  InvalidParameter,
};

std::string_view to_string(GeometryRule rule);

/// Thrown when an evaluation leaves the physical domain of a closed form.
class DomainError : public std::domain_error {
 public:
  DomainError(GeometryRule rule, const std::string& what)
      : std::domain_error(what), rule_(rule) {}
  GeometryRule rule() const noexcept { return rule_; }

 private:
  GeometryRule rule_;
};

/// Circular-arc electrode face. The arc subtends the full angle phi and is
/// integrated symmetrically over [-phi/2, +phi/2].
class ArcProfile {
 public:
  ArcProfile(double radius_m, double angular_extent_rad, double thickness_m);

  static ArcProfile from_arc_length(double radius_m, double arc_length_m,
                                    double thickness_m);

  double radius_m() const noexcept { return radius_; }
  double angular_extent_rad() const noexcept { return phi_; }
  double thickness_m() const noexcept { return thickness_; }

  double arc_length() const noexcept { return radius_ * phi_; }
  /// Bow depth R(1 - cos(phi/2)), evaluated as 2R sin^2(phi/4).
  double sagitta() const noexcept;
  /// tan(phi/4); the T of the closed forms.
  double half_tan() const noexcept;

 private:
  double radius_;
  double phi_;
  double thickness_;
};

class PlanarProfile {
 public:
  PlanarProfile(double length_m, double thickness_m);

  double length_m() const noexcept { return length_; }
  double thickness_m() const noexcept { return thickness_; }

 private:
  double length_;
  double thickness_;
};

/// One fixed-electrode face as seen by the capacitance formulas.
struct Face {
  FaceKind kind;
  ArcProfile arc;
  PlanarProfile flat;
};

/// Side 1 sees gap d - delta, side 2 sees d + delta.
class ElectrodeConfig {
 public:
  /// Flat faces get length arc.arc_length() and the arc's thickness.
  ElectrodeConfig(Variant variant, const ArcProfile& arc);
  /// Explicit flat face. Mixed variants require its length to match the arc.
  ElectrodeConfig(Variant variant, const ArcProfile& arc,
                  const PlanarProfile& flat);

  Variant variant() const noexcept { return variant_; }
  const ArcProfile& profile() const noexcept { return arc_; }
  const PlanarProfile& planar_face() const noexcept { return flat_; }

  FaceKind side_kind(Side side) const noexcept;
  Face face(Side side) const { return Face{side_kind(side), arc_, flat_}; }

 private:
  Variant variant_;
  ArcProfile arc_;
  PlanarProfile flat_;
};

struct GapState {
  double gap_m = 0.0;           // nominal apex-to-plane gap d
  double displacement_m = 0.0;  // signed delta; positive narrows side 1

  double side_gap(Side side) const noexcept {
    return side == Side::One ? gap_m - displacement_m : gap_m + displacement_m;
  }
};

class MechanicalModel {
 public:
  MechanicalModel(double mass_kg, double spring_n_per_m, int comb_count);

  double mass_kg() const noexcept { return mass_; }
  double spring_n_per_m() const noexcept { return spring_; }
  int comb_count() const noexcept { return combs_; }

 private:
  double mass_;
  double spring_;
  int combs_;
};

enum class FeedbackMode { MatchedSum, Nominal };

std::string_view to_string(FeedbackMode mode);
std::optional<FeedbackMode> parse_feedback_mode(std::string_view name);

class DriveModel {
 public:
  DriveModel(double v_in_volts, FeedbackMode mode,
             double permittivity_f_per_m = kVacuumPermittivity);

  double v_in_volts() const noexcept { return v_in_; }
  FeedbackMode feedback_mode() const noexcept { return mode_; }
  double permittivity() const noexcept { return permittivity_; }

 private:
  double v_in_;
  FeedbackMode mode_;
  double permittivity_;
};

/// Proof-mass displacement m*a/k (sign follows the acceleration).
double displacement(const MechanicalModel& mech, double accel_m_s2) noexcept;

/// Estimate only: solid plate of the given footprint at polysilicon density.
/// Ignores etch holes, fingers and springs.
double estimate_plate_mass(double length_m, double width_m, double thickness_m,
                           double density_kg_m3 = kPolysiliconDensity);

struct GeometryViolation {
  Side side;
  GeometryRule rule;
  double margin_m;  // <= 0 means the rule is violated by |margin|
};

struct SideReport {
  Side side;
  FaceKind kind;
  double gap_m;          // gap at the apex/centre for this side
  double min_gap_m;      // smallest gap along the face
  std::optional<double> atanh_argument;  // concave faces with gap < 2R
};

struct GeometryReport {
  std::array<SideReport, 2> sides;
  std::vector<GeometryViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string describe() const;
};

/// Checks both displaced gaps. Never throws for a bad state.
GeometryReport validate_geometry(const ElectrodeConfig& config,
                                 const GapState& gap);

/// Minimum gap along a face held at apex gap `gap_m`.
double face_min_gap(const Face& face, double gap_m) noexcept;

}  // namespace curvedcomb
