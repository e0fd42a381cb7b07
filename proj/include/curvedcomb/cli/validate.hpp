#pragma once

// Oracle suite: closed forms against quadrature, analytic sensitivities
// against finite differences, and the exact symmetry identities.

#include <string>
#include <vector>

#include <json.hpp>

#include "curvedcomb/cli/config.hpp"

namespace curvedcomb::cli {

inline constexpr double kQuadratureTolerance = 1e-9;
inline constexpr double kDerivativeTolerance = 1e-6;
inline constexpr double kSymmetryTolerance = 1e-12;

struct SuiteResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  int checks = 0;
  std::string worst_case;

  bool passed() const { return checks > 0 && max_error < tolerance; }
};

struct ValidationOptions {
  /// Test hook: closed-form capacitances are scaled by (1 + this) before
  /// being compared with quadrature.
  double closed_form_perturbation = 0.0;
};

struct ValidationSummary {
  std::vector<SuiteResult> suites;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Throws GeometryError (before any suite runs) if the configured geometry
/// is invalid for one of the variants over the acceleration range.
ValidationSummary run_validation(const RunConfig& config,
                                 const ValidationOptions& options = {});

}  // namespace curvedcomb::cli
