#pragma once

// Numerical ground truth for the closed forms: adaptive quadrature of the
// gap-profile integrands and finite-difference differentiation. Nothing in
// here calls into the capacitance closed forms.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "curvedcomb/model.hpp"

namespace curvedcomb::oracles {

struct QuadratureSpec {
  double rel_tol = 1e-12;
  double abs_tol = 1e-30;  // farads
  int max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, QuadratureResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const QuadratureResult& partial() const noexcept { return partial_; }

 private:
  QuadratureResult partial_;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. Splits the
/// interval with the largest error estimate first; the refinement order is
/// deterministic. Throws ConvergenceError past spec.max_subdivisions.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureSpec& spec = {});

/// Integral of eps*h*R/d(theta) over [theta_lo, theta_hi] for curved faces,
/// or eps*h/d over a length window for flat faces (theta taken as position
/// along the plate in meters).
QuadratureResult integrate_face(const Face& face, double gap_m,
                                double permittivity, double lo, double hi,
                                const QuadratureSpec& spec = {});

/// Capacitance of one face by quadrature over its full extent.
QuadratureResult quad_capacitance(const Face& face, double gap_m,
                                  double permittivity,
                                  const QuadratureSpec& spec = {});

enum class FdScheme { Central2, Central4, RichardsonCentral };

struct FiniteDiffSpec {
  FdScheme scheme = FdScheme::RichardsonCentral;
  /// Step is rel_step * max(|x|, scale).
  double rel_step = std::cbrt(std::numeric_limits<double>::epsilon());
  double scale = 1.0;
  int max_shrink = 40;
};

struct FdResult {
  double derivative = 0.0;
  double error_estimate = 0.0;
  double step = 0.0;
};

/// Central-difference derivative of f at x. If f throws DomainError at a
/// stencil point the step is halved (up to spec.max_shrink times); after that
/// a DomainError is thrown.
FdResult fd_derivative(const std::function<double(double)>& f, double x,
                       const FiniteDiffSpec& spec = {});

}  // namespace curvedcomb::oracles
