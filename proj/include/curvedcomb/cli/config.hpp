#pragma once

// Run configuration for the command-line tool. Lengths are micrometers here
// and converted to SI when building model types.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvedcomb/model.hpp"
#include "curvedcomb/sweep.hpp"

namespace curvedcomb::cli {

/// Schema or value problem; the message starts with the JSON field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeometryConfig {
  double radius_um = 100.0;
  std::optional<double> phi_rad;
  std::optional<double> arc_um;  // used when phi_rad is absent; default 20
  double thickness_um = 2.0;
  std::optional<double> planar_length_um;  // flat-face length, default = arc
};

struct MechanicsConfig {
  double mass_kg = 2.6e-10;
  double spring_n_per_m = 1.0;
  int combs = 21;
};

struct DriveConfig {
  double v_in_v = 1.0;
  std::string feedback_mode = "matched_sum";
  double permittivity_f_per_m = kVacuumPermittivity;
};

struct SweepConfig {
  std::string arc_mode = "vary_phi_fixed_r";
  double arc_min_um = 5.0;
  double arc_max_um = 60.0;
  int arc_points = 20;
  double accel_min_g = -10.0;
  double accel_max_g = 10.0;
  int accel_points = 21;
};

struct OptimizerConfig {
  double min_edge_gap_fraction = 1e-3;
  double tolerance_um = 1e-4;
};

// Reference layout values. Only the proof-mass footprint feeds the mass
// estimate; the rest is carried for documentation.
struct LayoutConfig {
  double proof_mass_length_um = 565.0;
  double proof_mass_width_um = 100.0;
  double electrode_length_um = 120.0;
  double finger_width_um = 4.0;
};

struct OutputConfig {
  std::optional<std::string> csv;
  std::optional<std::string> svg;
};

struct RunConfig {
  GeometryConfig geometry;
  double gap_um = 2.0;
  MechanicsConfig mechanics;
  DriveConfig drive;
  std::vector<std::string> variants = {
      "planar",          "biconvex",     "biconcave",     "concavo_convex",
      "convexo_concave", "plano_convex", "plano_concave",
  };
  SweepConfig sweep;
  OptimizerConfig optimizer;
  LayoutConfig layout;
  OutputConfig output;
};

/// Strict parse: unknown keys and wrong types raise ConfigError with the
/// offending field path. Missing keys keep their defaults.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

/// Default template, one key per field.
std::string default_template();

// Conversions to model types. Throw ConfigError on invalid values.
ArcProfile base_profile(const RunConfig& config);
MechanicalModel mechanics(const RunConfig& config);
DriveModel drive(const RunConfig& config);
std::vector<Variant> variants(const RunConfig& config);
ArcMode arc_mode(const RunConfig& config);
SweepPlan sweep_plan(const RunConfig& config);
OptimizerParams optimizer_params(const RunConfig& config);

/// Plate-volume mass estimate from the layout block (estimate only).
double estimated_mass_kg(const RunConfig& config);

}  // namespace curvedcomb::cli
