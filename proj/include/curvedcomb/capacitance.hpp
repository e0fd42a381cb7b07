#pragma once

// Closed-form capacitance between a planar movable electrode and a fixed
// face (convex arc, concave arc, or flat plate), plus the exact derivative
// with respect to the apex gap. Ideal-gap model, no fringing.

#include "curvedcomb/model.hpp"

namespace curvedcomb {

/// 4 eps h R / sqrt(d(2R+d)) * atan(T sqrt((2R+d)/d)). Throws DomainError
/// for gap <= 0.
double cap_convex(const ArcProfile& profile, double gap_m, double permittivity);

/// 4 eps h R / sqrt(d(2R-d)) * atanh(T sqrt((2R-d)/d)). Throws DomainError
/// when the arc edges touch the plate (gap <= sagitta) or gap >= 2R.
double cap_concave(const ArcProfile& profile, double gap_m,
                   double permittivity);

/// eps h b / d.
double cap_planar(const PlanarProfile& face, double gap_m, double permittivity);

double dcap_dgap_convex(const ArcProfile& profile, double gap_m,
                        double permittivity);
double dcap_dgap_concave(const ArcProfile& profile, double gap_m,
                         double permittivity);
double dcap_dgap_planar(const PlanarProfile& face, double gap_m,
                        double permittivity);

// Dispatch on the face kind. Curved kinds read face.arc, Flat reads face.flat.
double capacitance(const Face& face, double gap_m, double permittivity);
double dcap_dgap(const Face& face, double gap_m, double permittivity);

}  // namespace curvedcomb
