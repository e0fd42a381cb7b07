#include "curvedcomb/oracles.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cstdint>
#include <queue>
#include <sstream>
#include <vector>

namespace curvedcomb::oracles {

namespace {

// Kronrod 15-point nodes/weights and the embedded Gauss 7-point weights
// (abscissae on [-1, 1], non-negative half listed).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  std::uint64_t order;  // insertion order, tie-breaker for determinism
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.order > y.order;
  }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a,
                      double b, std::uint64_t order) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);
  // Raw Kronrod-Gauss difference, floored by the rounding level of the sum.
  const double roundoff =
      50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  const double error = std::max(std::abs(kronrod - gauss), roundoff);
  return Segment{a, b, kronrod, error, order};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0) || spec.max_subdivisions < 1) {
    throw std::invalid_argument("quadrature spec: rel_tol > 0 and "
                                "max_subdivisions >= 1 required");
  }
  if (a == b) return {};

  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  std::uint64_t order = 0;
  Segment first = gauss_kronrod(f, a, b, order++);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  int subdivisions = 1;

  auto tolerance = [&] {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };

  while (total_error > tolerance()) {
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature did not converge in " << spec.max_subdivisions
          << " subdivisions (error estimate " << total_error << ")";
      throw ConvergenceError(msg.str(),
                             QuadratureResult{total, total_error, subdivisions});
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod(f, worst.a, mid, order++);
    const Segment right = gauss_kronrod(f, mid, worst.b, order++);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // Re-sum from the leaves to drop the drift of the running updates.
  double value = 0.0;
  double error = 0.0;
  std::vector<Segment> leaves;
  leaves.reserve(heap.size());
  while (!heap.empty()) {
    leaves.push_back(heap.top());
    heap.pop();
  }
  std::sort(leaves.begin(), leaves.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : leaves) {
    value += s.value;
    error += s.error;
  }
  return QuadratureResult{value, error, subdivisions};
}

QuadratureResult integrate_face(const Face& face, double gap_m,
                                double permittivity, double lo, double hi,
                                const QuadratureSpec& spec) {
  if (!(gap_m > 0)) {
    throw DomainError(GeometryRule::NonPositiveGap, "quadrature: gap must be > 0");
  }
  switch (face.kind) {
    case FaceKind::Flat: {
      const double w = permittivity * face.flat.thickness_m() / gap_m;
      return integrate([w](double) { return w; }, lo, hi, spec);
    }
    case FaceKind::Convex: {
      const double r = face.arc.radius_m();
      const double w = permittivity * face.arc.thickness_m() * r;
      // d + R - R cos(theta) = d + 2R sin^2(theta/2)
      return integrate(
          [=](double theta) {
            const double s = std::sin(0.5 * theta);
            return w / (gap_m + 2.0 * r * s * s);
          },
          lo, hi, spec);
    }
    case FaceKind::Concave: {
      const double r = face.arc.radius_m();
      const double w = permittivity * face.arc.thickness_m() * r;
      const double s_max =
          std::sin(0.5 * std::max(std::abs(lo), std::abs(hi)));
      if (!(gap_m - 2.0 * r * s_max * s_max > 0)) {
        throw DomainError(GeometryRule::EdgeContact,
                          "quadrature: concave integrand is singular on the "
                          "interval");
      }
      // d + R cos(theta) - R = d - 2R sin^2(theta/2)
      return integrate(
          [=](double theta) {
            const double s = std::sin(0.5 * theta);
            return w / (gap_m - 2.0 * r * s * s);
          },
          lo, hi, spec);
    }
  }
  return {};
}

QuadratureResult quad_capacitance(const Face& face, double gap_m,
                                  double permittivity,
                                  const QuadratureSpec& spec) {
  if (face.kind == FaceKind::Flat) {
    const double half = 0.5 * face.flat.length_m();
    return integrate_face(face, gap_m, permittivity, -half, half, spec);
  }
  const double half = 0.5 * face.arc.angular_extent_rad();
  return integrate_face(face, gap_m, permittivity, -half, half, spec);
}

namespace {

double central2(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double central4(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
         (12.0 * h);
}

FdResult evaluate(const std::function<double(double)>& f, double x, double h,
                  FdScheme scheme) {
  switch (scheme) {
    case FdScheme::Central2: {
      const double coarse = central2(f, x, h);
      const double fine = central2(f, x, 0.5 * h);
      return {coarse, std::abs(coarse - fine), h};
    }
    case FdScheme::Central4: {
      const double d4 = central4(f, x, h);
      const double d2 = central2(f, x, h);
      return {d4, std::abs(d4 - d2), h};
    }
    case FdScheme::RichardsonCentral: {
      const double coarse = central2(f, x, h);
      const double fine = central2(f, x, 0.5 * h);
      const double extrapolated = (4.0 * fine - coarse) / 3.0;
      return {extrapolated, std::abs(extrapolated - fine), h};
    }
  }
  return {};
}

}  // namespace

FdResult fd_derivative(const std::function<double(double)>& f, double x,
                       const FiniteDiffSpec& spec) {
  if (!(spec.rel_step > 0) || !(spec.scale > 0)) {
    throw std::invalid_argument("finite-difference step must be > 0");
  }
  double h = spec.rel_step * std::max(std::abs(x), spec.scale);
  for (int attempt = 0; attempt <= spec.max_shrink; ++attempt) {
    try {
      return evaluate(f, x, h, spec.scheme);
    } catch (const DomainError&) {
      h *= 0.5;
    }
  }
  std::ostringstream msg;
  msg << "finite difference: no admissible step around x = " << x;
  throw DomainError(GeometryRule::InvalidParameter, msg.str());
}

}  // namespace curvedcomb::oracles
