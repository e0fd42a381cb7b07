#include <doctest.h>

#include <cmath>
#include <random>

#include "curvedcomb/capacitance.hpp"
#include "curvedcomb/oracles.hpp"
#include "curvedcomb/transduction.hpp"

using namespace curvedcomb;

namespace {
constexpr double kEps = 8.854e-12;
constexpr double kGap = 2e-6;
const ArcProfile kArc(100e-6, 0.2, 2e-6);
const MechanicalModel kMech(2.6e-10, 1.0, 21);
const DriveModel kDrive(1.0, FeedbackMode::MatchedSum, kEps);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double fd_sensitivity(const ElectrodeConfig& ec, double gap, const MechanicalModel& mech,
                      const DriveModel& drive, double a) {
  oracles::FiniteDiffSpec spec;
  spec.scale = gap * mech.spring_n_per_m() / mech.mass_kg();
  return oracles::fd_derivative(
             [&](double x) { return gain(ec, gap, mech, drive, x).v_out_volts; }, a, spec)
             .derivative *
         kStandardGravity;
}
}  // namespace

TEST_CASE("bridge at rest") {
  const GapState rest{kGap, 0.0};
  const auto planar = bridge_capacitances(ElectrodeConfig(Variant::Planar, kArc), rest, kDrive);
  CHECK(planar.c1_f == planar.c2_f);
  CHECK(rel(planar.c1_f, kEps * 2e-6 * 20e-6 / kGap) < 1e-14);
  CHECK(planar.c_fb_f == planar.c1_f + planar.c2_f);

  const auto vex = bridge_capacitances(ElectrodeConfig(Variant::Biconvex, kArc), rest, kDrive);
  CHECK(vex.c1_f == cap_convex(kArc, kGap, kEps));
  CHECK(vex.c2_f == vex.c1_f);

  const auto pc = bridge_capacitances(ElectrodeConfig(Variant::PlanoConvex, kArc), rest, kDrive);
  CHECK(pc.c1_f == doctest::Approx(1.642e-16).epsilon(1e-3));
  CHECK(pc.c2_f == doctest::Approx(1.7708e-16).epsilon(1e-4));
}

TEST_CASE("nominal feedback uses the rest capacitances") {
  const DriveModel nominal(1.0, FeedbackMode::Nominal, kEps);
  const ElectrodeConfig pc(Variant::PlanoConvex, kArc);
  const auto rest = bridge_capacitances(pc, {kGap, 0.0}, nominal);
  const auto moved = bridge_capacitances(pc, {kGap, 0.1e-6}, nominal);
  CHECK(rest.c_fb_f == doctest::Approx(rest.c1_f + rest.c2_f).epsilon(1e-15));
  CHECK(moved.c_fb_f == rest.c_fb_f);
  CHECK(rel(sensitivity(pc, kGap, kMech, nominal, 0.0), fd_sensitivity(pc, kGap, kMech, nominal, 0.0)) <
        1e-6);
}

TEST_CASE("planar gain collapses to delta / d") {
  const ElectrodeConfig planar(Variant::Planar, kArc);
  const double a = 0.2e-6 * kMech.spring_n_per_m() / kMech.mass_kg();
  const auto p = gain(planar, kGap, kMech, kDrive, a);
  CHECK(rel(p.displacement_m, 0.2e-6) < 1e-15);
  CHECK(rel(p.gain, 0.1) < 1e-12);
  CHECK(p.v_out_volts == p.gain);
  CHECK(rel(sensitivity(planar, kGap, kMech, kDrive, 0.0) * 1e3, 1.2748645) < 1e-12);
  CHECK(rel(sensitivity(planar, kGap, kMech, kDrive, a),
            kMech.mass_kg() * kStandardGravity / (kMech.spring_n_per_m() * kGap)) < 1e-12);
}

TEST_CASE("symmetric variants read zero at rest and odd otherwise") {
  for (Variant v : {Variant::Planar, Variant::Biconvex, Variant::Biconcave}) {
    const ElectrodeConfig ec(v, kArc);
    CHECK(gain(ec, kGap, kMech, kDrive, 0.0).gain == 0.0);
    const double g = gain(ec, kGap, kMech, kDrive, 37.0).gain;
    CHECK(std::abs(g + gain(ec, kGap, kMech, kDrive, -37.0).gain) <= 1e-12 * std::abs(g));
  }
}

TEST_CASE("concavo-convex and convexo-concave have opposite polarity") {
  const ElectrodeConfig cc(Variant::ConcavoConvex, kArc);
  const ElectrodeConfig vc(Variant::ConvexoConcave, kArc);
  for (double a : {-50.0, -3.0, 0.0, 1.0, 80.0}) {
    const double g_cc = gain(cc, kGap, kMech, kDrive, a).gain;
    const double g_vc = gain(vc, kGap, kMech, kDrive, -a).gain;
    CHECK(std::abs(g_cc + g_vc) <= 1e-12 * std::abs(g_cc));
  }
  CHECK(gain(cc, kGap, kMech, kDrive, 0.0).gain < 0.0);
}

TEST_CASE("analytic sensitivity matches finite differences of the gain") {
  for (Variant v : kAllVariants) {
    const ElectrodeConfig ec(v, kArc);
    CAPTURE(to_string(v));
    CHECK(rel(sensitivity(ec, kGap, kMech, kDrive, 0.0), fd_sensitivity(ec, kGap, kMech, kDrive, 0.0)) <
          1e-6);
  }
  const ElectrodeConfig vex(Variant::Biconvex, kArc);
  CHECK(rel(sensitivity(vex, kGap, kMech, kDrive, 1.0), fd_sensitivity(vex, kGap, kMech, kDrive, 1.0)) <
        1e-6);
}

TEST_CASE("matched-sum gain stays within [-1, 1]") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Variant v : kAllVariants) {
    const ElectrodeConfig ec(v, kArc);
    const double up = displacement_limit(ec, kGap, 1.0);
    const double down = displacement_limit(ec, kGap, -1.0);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng);
      const double delta = x >= 0 ? x * up * 0.999 : x * down * 0.999;
      const auto b = bridge_capacitances(ec, {kGap, delta}, kDrive);
      CHECK(std::abs((b.c1_f - b.c2_f) / b.c_fb_f) <= 1.0);
    }
  }
}

TEST_CASE("over-range acceleration names the limit") {
  const ElectrodeConfig cave(Variant::Biconcave, kArc);
  const double limit = displacement_limit(cave, kGap, 1.0);
  CHECK(limit == doctest::Approx(kGap - kArc.sagitta()).epsilon(1e-9));
  const double a_limit = limit * kMech.spring_n_per_m() / kMech.mass_kg();
  try {
    gain(cave, kGap, kMech, kDrive, 1.1 * a_limit);
    FAIL("expected OverRangeError");
  } catch (const OverRangeError& e) {
    CHECK(e.accel_m_s2() == 1.1 * a_limit);
    CHECK(e.limit_accel_m_s2() == doctest::Approx(a_limit).epsilon(1e-9));
    CHECK_FALSE(e.report().ok());
    CHECK(e.report().violations[0].side == Side::One);
  }
  try {
    gain(cave, kGap, kMech, kDrive, -1.1 * a_limit);
    FAIL("expected OverRangeError");
  } catch (const OverRangeError& e) {
    CHECK(e.limit_accel_m_s2() < 0);
    CHECK(e.report().violations[0].side == Side::Two);
  }
  CHECK_NOTHROW(gain(cave, kGap, kMech, kDrive, 0.99 * a_limit));

  const ElectrodeConfig planar(Variant::Planar, kArc);
  CHECK_THROWS_AS(gain(planar, kGap, kMech, kDrive, kGap / 2.6e-10), OverRangeError);
}

TEST_CASE("invalid rest geometry is a geometry error, not over-range") {
  const ElectrodeConfig cave(Variant::Biconcave, kArc);
  try {
    gain(cave, 0.4e-6, kMech, kDrive, 0.0);
    FAIL("expected GeometryError");
  } catch (const OverRangeError&) {
    FAIL("rest geometry reported as over-range");
  } catch (const GeometryError& e) {
    CHECK(e.report().violations.size() == 2);
  }
}

TEST_CASE("net sensitivity scales by comb count") {
  const double s = 1.2749e-3;
  CHECK(net_sensitivity(s, MechanicalModel(2.6e-10, 1.0, 1)) == s);
  CHECK(net_sensitivity(s, MechanicalModel(2.6e-10, 1.0, 2)) == 2 * s);
  CHECK(net_sensitivity(s, kMech) == doctest::Approx(26.77e-3).epsilon(1e-4));
}
