#include <doctest.h>

#include <cmath>

#include "curvedcomb/model.hpp"

using namespace curvedcomb;

namespace {
const ArcProfile kArc(100e-6, 0.2, 2e-6);
const MechanicalModel kMech(2.6e-10, 1.0, 21);
}  // namespace

TEST_CASE("displacement follows m a / k") {
  CHECK(displacement(kMech, 0.0) == 0.0);
  const double one_g = displacement(kMech, kStandardGravity);
  CHECK(one_g == doctest::Approx(2.5497e-9).epsilon(1e-4));
  CHECK(one_g == doctest::Approx(2.6e-10 * 9.80665).epsilon(1e-15));
  const MechanicalModel stiff(2.6e-10, 2.0, 21);
  CHECK(displacement(stiff, kStandardGravity) == doctest::Approx(one_g / 2).epsilon(1e-15));
  CHECK(displacement(kMech, -kStandardGravity) == -one_g);
}

TEST_CASE("arc profile geometry") {
  CHECK(kArc.arc_length() == doctest::Approx(20e-6).epsilon(1e-15));
  // 0.4996 um bow depth at R = 100 um, phi = 0.2
  CHECK(kArc.sagitta() == doctest::Approx(100e-6 * (1 - std::cos(0.1))).epsilon(1e-9));
  CHECK(kArc.sagitta() == doctest::Approx(0.4996e-6).epsilon(1e-4));
  CHECK(kArc.half_tan() == doctest::Approx(std::tan(0.05)).epsilon(1e-15));

  const ArcProfile from_len = ArcProfile::from_arc_length(100e-6, 20e-6, 2e-6);
  CHECK(from_len.angular_extent_rad() == doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS(ArcProfile(0.0, 0.2, 2e-6), DomainError);
  CHECK_THROWS_AS(ArcProfile(100e-6, -0.1, 2e-6), DomainError);
  CHECK_THROWS_AS(ArcProfile(100e-6, 3.2, 2e-6), DomainError);
  CHECK_THROWS_AS(ArcProfile(100e-6, 0.2, 0.0), DomainError);
  CHECK_NOTHROW(ArcProfile(100e-6, 0.0, 2e-6));
  CHECK_THROWS_AS(PlanarProfile(-1e-6, 2e-6), DomainError);
  CHECK_THROWS_AS(MechanicalModel(2.6e-10, 1.0, 0), DomainError);
  CHECK_THROWS_AS(MechanicalModel(0.0, 1.0, 1), DomainError);
}

TEST_CASE("face kinds per variant") {
  struct Row {
    Variant v;
    FaceKind one, two;
  };
  const Row rows[] = {
      {Variant::Planar, FaceKind::Flat, FaceKind::Flat},
      {Variant::Biconvex, FaceKind::Convex, FaceKind::Convex},
      {Variant::Biconcave, FaceKind::Concave, FaceKind::Concave},
      {Variant::ConcavoConvex, FaceKind::Convex, FaceKind::Concave},
      {Variant::ConvexoConcave, FaceKind::Concave, FaceKind::Convex},
      {Variant::PlanoConvex, FaceKind::Convex, FaceKind::Flat},
      {Variant::PlanoConcave, FaceKind::Concave, FaceKind::Flat},
  };
  for (const Row& r : rows) {
    const ElectrodeConfig ec(r.v, kArc);
    CHECK(ec.side_kind(Side::One) == r.one);
    CHECK(ec.side_kind(Side::Two) == r.two);
  }
  const ElectrodeConfig ec(Variant::PlanoConvex, kArc);
  CHECK(ec.planar_face().length_m() == kArc.arc_length());
  CHECK(ec.planar_face().thickness_m() == kArc.thickness_m());
  CHECK_THROWS_AS(ElectrodeConfig(Variant::PlanoConvex, kArc, PlanarProfile(30e-6, 2e-6)),
                  DomainError);
  CHECK_NOTHROW(ElectrodeConfig(Variant::Planar, kArc, PlanarProfile(30e-6, 2e-6)));
}

TEST_CASE("names round-trip") {
  for (Variant v : kAllVariants) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  CHECK_FALSE(parse_variant("trapezoid").has_value());
  CHECK(parse_face_kind("concave") == FaceKind::Concave);
  CHECK(parse_feedback_mode("nominal") == FeedbackMode::Nominal);
  CHECK_FALSE(parse_feedback_mode("sum").has_value());
}

TEST_CASE("geometry validation") {
  SUBCASE("biconcave at rest is valid") {
    const auto r = validate_geometry(ElectrodeConfig(Variant::Biconcave, kArc), {2e-6, 0.0});
    CHECK(r.ok());
    REQUIRE(r.sides[0].atanh_argument.has_value());
    CHECK(*r.sides[0].atanh_argument < 1.0);
    CHECK(r.sides[0].min_gap_m == doctest::Approx(2e-6 - kArc.sagitta()).epsilon(1e-12));
  }
  SUBCASE("gap equal to the sagitta is edge contact with atanh argument 1") {
    const double s = 2 * 100e-6 * std::pow(std::sin(0.05), 2);
    const auto r = validate_geometry(ElectrodeConfig(Variant::Biconcave, kArc), {s, 0.0});
    CHECK_FALSE(r.ok());
    REQUIRE(r.sides[0].atanh_argument.has_value());
    CHECK(*r.sides[0].atanh_argument == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.violations.front().rule == GeometryRule::EdgeContact);
  }
  SUBCASE("planar displacement equal to the gap") {
    const auto r = validate_geometry(ElectrodeConfig(Variant::Planar, kArc), {2e-6, 2e-6});
    CHECK_FALSE(r.ok());
    CHECK(r.violations.size() == 1);
    CHECK(r.violations[0].side == Side::One);
    CHECK(r.violations[0].rule == GeometryRule::DisplacementExceedsGap);
    CHECK(r.describe().find("displacement exceeds gap") != std::string::npos);
  }
  SUBCASE("non-positive nominal gap") {
    const auto r = validate_geometry(ElectrodeConfig(Variant::Biconvex, kArc), {0.0, 0.0});
    CHECK(r.violations.size() == 2);
    CHECK(r.violations[0].rule == GeometryRule::NonPositiveGap);
  }
  SUBCASE("concave gap beyond the diameter") {
    const ArcProfile small(1e-6, 0.2, 2e-6);
    const auto r = validate_geometry(ElectrodeConfig(Variant::PlanoConcave, small), {3e-6, 0.0});
    CHECK_FALSE(r.ok());
    CHECK(r.violations[0].rule == GeometryRule::BeyondDiameter);
  }
  SUBCASE("convex faces never lose the edge") {
    const auto r = validate_geometry(ElectrodeConfig(Variant::Biconvex, kArc), {0.1e-6, 0.0});
    CHECK(r.ok());
    CHECK(r.sides[0].min_gap_m == 0.1e-6);
  }
}

TEST_CASE("plate mass estimate") {
  const double m = estimate_plate_mass(565e-6, 100e-6, 2e-6);
  CHECK(m == doctest::Approx(565e-6 * 100e-6 * 2e-6 * 2320.0).epsilon(1e-15));
}
