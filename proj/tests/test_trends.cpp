// Claimed qualitative trends for curved electrodes, asserted as stated.
// Several of them do not hold for the ideal-gap closed forms; see README.

#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "curvedcomb/sweep.hpp"
#include "curvedcomb/transduction.hpp"

using namespace curvedcomb;

namespace {

SweepPlan default_plan() {
  return SweepPlan{
      .variants = {kAllVariants.begin(), kAllVariants.end()},
      .base_profile = ArcProfile::from_arc_length(100e-6, 20e-6, 2e-6),
      .arc_mode = ArcMode::VaryPhiFixedR,
      .arc_range_m = Range{5e-6, 60e-6, 20},
      .accel_range_g = Range{-10.0, 10.0, 21},
      .gap_m = 2e-6,
      .mech = MechanicalModel(2.6e-10, 1.0, 21),
      .drive = DriveModel(1.0, FeedbackMode::MatchedSum, kVacuumPermittivity),
  };
}

std::map<Variant, std::vector<double>> sweep_by_variant() {
  std::map<Variant, std::vector<double>> out;
  for (const SweepRow& r : sensitivity_sweep(default_plan()).rows) {
    out[r.variant].push_back(r.s_mv_per_g);
  }
  return out;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return v.size() >= 2;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.size() >= 2;
}

}  // namespace

TEST_CASE("biconvex sensitivity rises with arc length") {
  CHECK(strictly_increasing(sweep_by_variant()[Variant::Biconvex]));
}

TEST_CASE("plano-convex sensitivity rises with arc length") {
  CHECK(strictly_increasing(sweep_by_variant()[Variant::PlanoConvex]));
}

TEST_CASE("biconcave sensitivity falls with arc length") {
  CHECK(strictly_decreasing(sweep_by_variant()[Variant::Biconcave]));
}

TEST_CASE("plano-concave sensitivity falls with arc length") {
  CHECK(strictly_decreasing(sweep_by_variant()[Variant::PlanoConcave]));
}

TEST_CASE("biconvex beats planar at matched parameters") {
  const SweepPlan p = default_plan();
  const double s_vex = sensitivity(ElectrodeConfig(Variant::Biconvex, p.base_profile), p.gap_m,
                                   p.mech, p.drive);
  const double s_flat = sensitivity(ElectrodeConfig(Variant::Planar, p.base_profile), p.gap_m,
                                    p.mech, p.drive);
  CHECK(s_vex > s_flat);
}

TEST_CASE("biconvex gain curve is steeper than planar") {
  const SweepResult r = gain_curve(default_plan());
  double planar = 0.0, biconvex = 0.0;
  for (const VariantSlope& s : r.slopes) {
    if (s.variant == Variant::Planar) planar = s.fitted_mv_per_g;
    if (s.variant == Variant::Biconvex) biconvex = s.fitted_mv_per_g;
  }
  CHECK(biconvex > planar);
}

TEST_CASE("biconvex > planar > biconcave over the arc grid") {
  auto s = sweep_by_variant();
  const auto& vex = s[Variant::Biconvex];
  const auto& flat = s[Variant::Planar];
  const auto& cave = s[Variant::Biconcave];
  REQUIRE(vex.size() == flat.size());
  CHECK(cave.size() == flat.size());
  for (std::size_t i = 0; i < std::min(cave.size(), flat.size()); ++i) {
    CAPTURE(i);
    CHECK(vex[i] > flat[i]);
    CHECK(flat[i] > cave[i]);
  }
}

TEST_CASE("optimizer boundary choice follows the claimed trends") {
  const SweepPlan p = default_plan();
  const OptimizerParams params{
      .base_profile = p.base_profile,
      .arc_mode = p.arc_mode,
      .gap_m = p.gap_m,
      .mech = p.mech,
      .drive = p.drive,
      .max_accel_g = 10.0,
      .min_edge_gap_fraction = 1e-3,
      .tolerance_m = 1e-10,
  };
  CHECK(maximize_sensitivity(Variant::Biconvex, 5e-6, 60e-6, params).arc_length_m ==
        doctest::Approx(60e-6).epsilon(1e-9));
  CHECK(maximize_sensitivity(Variant::Biconcave, 5e-6, 60e-6, params).arc_length_m ==
        doctest::Approx(5e-6).epsilon(1e-9));
}
