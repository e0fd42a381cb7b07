#include "curvedcomb/capacitance.hpp"

#include <cmath>
#include <sstream>

namespace curvedcomb {

namespace {

void require_positive_gap(double gap_m) {
  if (!(gap_m > 0)) {
    std::ostringstream msg;
    msg << "gap must be > 0 (got " << gap_m << " m)";
    throw DomainError(GeometryRule::NonPositiveGap, msg.str());
  }
}

// Quantities shared by the concave closed form and its derivative.
struct ConcaveTerms {
  double t;              // tan(phi/4)
  double u;              // atanh argument T sqrt((2R-d)/d)
  double one_minus_u2;   // 1 - u^2, from the edge gap
  double product;        // d (2R - d)
};

ConcaveTerms concave_terms(const ArcProfile& profile, double gap_m) {
  require_positive_gap(gap_m);
  const double r = profile.radius_m();
  const double two_r = 2.0 * r;
  if (!(gap_m < two_r)) {
    std::ostringstream msg;
    msg << "concave face: gap " << gap_m << " m must be below 2R = " << two_r
        << " m";
    throw DomainError(GeometryRule::BeyondDiameter, msg.str());
  }
  const double edge = gap_m - profile.sagitta();
  if (!(edge > kContactTolerance * gap_m)) {
    std::ostringstream msg;
    msg << "concave face: edge contact, gap " << gap_m
        << " m does not exceed sagitta " << profile.sagitta()
        << " m (edge gap " << edge << " m)";
    throw DomainError(GeometryRule::EdgeContact, msg.str());
  }
  const double t = profile.half_tan();
  ConcaveTerms terms{};
  terms.t = t;
  terms.u = t * std::sqrt((two_r - gap_m) / gap_m);
  // 1 - u^2 = (d(1+T^2) - 2R T^2)/d = e (1+T^2)/d with e the edge gap.
  terms.one_minus_u2 = edge * (1.0 + t * t) / gap_m;
  terms.product = gap_m * (two_r - gap_m);
  if (!(terms.u < 1.0) || !(terms.one_minus_u2 > 0)) {
    throw DomainError(GeometryRule::EdgeContact,
                      "concave face: atanh argument reached 1");
  }
  return terms;
}

// atanh(u) = 0.5 log((1+u)/(1-u)), with 1-u taken from 1-u^2 to keep the
// relative precision of the edge gap near contact.
double atanh_from(double u, double one_minus_u2) {
  const double one_minus_u = one_minus_u2 / (1.0 + u);
  return 0.5 * std::log1p(2.0 * u / one_minus_u);
}

}  // namespace

double cap_convex(const ArcProfile& profile, double gap_m,
                  double permittivity) {
  require_positive_gap(gap_m);
  const double r = profile.radius_m();
  const double q = (2.0 * r + gap_m) / gap_m;
  const double u = profile.half_tan() * std::sqrt(q);
  const double scale = 4.0 * permittivity * profile.thickness_m() * r;
  return scale / std::sqrt(gap_m * (2.0 * r + gap_m)) * std::atan(u);
}

double cap_concave(const ArcProfile& profile, double gap_m,
                   double permittivity) {
  const ConcaveTerms c = concave_terms(profile, gap_m);
  const double scale =
      4.0 * permittivity * profile.thickness_m() * profile.radius_m();
  return scale / std::sqrt(c.product) * atanh_from(c.u, c.one_minus_u2);
}

double cap_planar(const PlanarProfile& face, double gap_m,
                  double permittivity) {
  require_positive_gap(gap_m);
  return permittivity * face.thickness_m() * face.length_m() / gap_m;
}

double dcap_dgap_convex(const ArcProfile& profile, double gap_m,
                        double permittivity) {
  require_positive_gap(gap_m);
  // C = K P^{-1/2} atan(u), P = d(2R+d), u = T sqrt((2R+d)/d)
  const double r = profile.radius_m();
  const double t = profile.half_tan();
  const double p = gap_m * (2.0 * r + gap_m);
  const double q = (2.0 * r + gap_m) / gap_m;
  const double u = t * std::sqrt(q);
  const double du = t / (2.0 * std::sqrt(q)) * (-2.0 * r / (gap_m * gap_m));
  const double k = 4.0 * permittivity * profile.thickness_m() * r;
  const double sqrt_p = std::sqrt(p);
  return k * (-0.5 * (2.0 * r + 2.0 * gap_m) / (p * sqrt_p) * std::atan(u) +
              du / ((1.0 + u * u) * sqrt_p));
}

double dcap_dgap_concave(const ArcProfile& profile, double gap_m,
                         double permittivity) {
  // C = K P^{-1/2} atanh(u), P = d(2R-d), u = T sqrt((2R-d)/d)
  const ConcaveTerms c = concave_terms(profile, gap_m);
  const double r = profile.radius_m();
  const double q = (2.0 * r - gap_m) / gap_m;
  const double du = c.t / (2.0 * std::sqrt(q)) * (-2.0 * r / (gap_m * gap_m));
  const double k = 4.0 * permittivity * profile.thickness_m() * r;
  const double sqrt_p = std::sqrt(c.product);
  return k * (-0.5 * (2.0 * r - 2.0 * gap_m) / (c.product * sqrt_p) *
                  atanh_from(c.u, c.one_minus_u2) +
              du / (c.one_minus_u2 * sqrt_p));
}

double dcap_dgap_planar(const PlanarProfile& face, double gap_m,
                        double permittivity) {
  require_positive_gap(gap_m);
  return -permittivity * face.thickness_m() * face.length_m() /
         (gap_m * gap_m);
}

double capacitance(const Face& face, double gap_m, double permittivity) {
  switch (face.kind) {
    case FaceKind::Convex: return cap_convex(face.arc, gap_m, permittivity);
    case FaceKind::Concave: return cap_concave(face.arc, gap_m, permittivity);
    case FaceKind::Flat: return cap_planar(face.flat, gap_m, permittivity);
  }
  return 0.0;
}

double dcap_dgap(const Face& face, double gap_m, double permittivity) {
  switch (face.kind) {
    case FaceKind::Convex:
      return dcap_dgap_convex(face.arc, gap_m, permittivity);
    case FaceKind::Concave:
      return dcap_dgap_concave(face.arc, gap_m, permittivity);
    case FaceKind::Flat:
      return dcap_dgap_planar(face.flat, gap_m, permittivity);
  }
  return 0.0;
}

}  // namespace curvedcomb
