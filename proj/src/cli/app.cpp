#include "curvedcomb/cli/app.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvedcomb/capacitance.hpp"
#include "curvedcomb/cli/config.hpp"
#include "curvedcomb/cli/output.hpp"
#include "curvedcomb/cli/validate.hpp"
#include "curvedcomb/oracles.hpp"
#include "curvedcomb/sweep.hpp"
#include "curvedcomb/transduction.hpp"

namespace curvedcomb::cli {

namespace {

constexpr double kMicron = 1e-6;
constexpr double kVerifyTolerance = 1e-9;

class VerifyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Values given on the command line; they win over the config file.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<double> radius_um, phi_rad, arc_um, thickness_um, gap_um;
  std::optional<double> mass_kg, spring, v_in, permittivity;
  std::optional<int> combs;
  std::optional<std::string> feedback, arc_mode;
  std::vector<std::string> variants;
  std::optional<double> arc_min_um, arc_max_um, accel_min_g, accel_max_g;
  std::optional<int> arc_points, accel_points;
  std::optional<std::string> csv, svg;
};

void add_geometry_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration");
  cmd->add_option("--r-um", o.radius_um, "Arc radius R [um] (x1e-6 -> m)");
  auto* phi = cmd->add_option("--phi", o.phi_rad, "Full angular extent phi [rad]");
  cmd->add_option("--arc-um", o.arc_um, "Arc length R*phi [um]")->excludes(phi);
  cmd->add_option("--h-um", o.thickness_um, "Out-of-plane thickness h [um]");
  cmd->add_option("--gap-um", o.gap_um, "Nominal gap d [um]");
  cmd->add_option("--eps", o.permittivity, "Permittivity [F/m]");
}

void add_model_options(CLI::App* cmd, Overrides& o) {
  add_geometry_options(cmd, o);
  cmd->add_option("--mass-kg", o.mass_kg, "Proof mass m [kg]");
  cmd->add_option("--k", o.spring, "Spring constant k [N/m]");
  cmd->add_option("--combs", o.combs, "Comb count N");
  cmd->add_option("--v-in", o.v_in, "Excitation amplitude V_in [V]");
  cmd->add_option("--feedback", o.feedback, "matched_sum | nominal");
  cmd->add_option("--variants", o.variants, "Variant names")->delimiter(',');
  cmd->add_option("--arc-mode", o.arc_mode, "vary_phi_fixed_r | vary_r_fixed_arc");
  cmd->add_option("--arc-min-um", o.arc_min_um, "Arc sweep start [um]");
  cmd->add_option("--arc-max-um", o.arc_max_um, "Arc sweep end [um]");
  cmd->add_option("--arc-points", o.arc_points, "Arc sweep point count");
  cmd->add_option("--accel-min-g", o.accel_min_g, "Acceleration start [g]");
  cmd->add_option("--accel-max-g", o.accel_max_g, "Acceleration end [g]");
  cmd->add_option("--accel-points", o.accel_points, "Acceleration point count");
  cmd->add_option("--csv", o.csv, "CSV output path (stdout if omitted)");
  cmd->add_option("--svg", o.svg, "SVG chart output path");
}

template <typename T>
void apply(const std::optional<T>& src, T& dst) {
  if (src) dst = *src;
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config_path ? load_config(*o.config_path) : RunConfig{};
  apply(o.radius_um, c.geometry.radius_um);
  if (o.phi_rad) {
    c.geometry.phi_rad = o.phi_rad;
    c.geometry.arc_um.reset();
  }
  if (o.arc_um) {
    c.geometry.arc_um = o.arc_um;
    c.geometry.phi_rad.reset();
  }
  apply(o.thickness_um, c.geometry.thickness_um);
  apply(o.gap_um, c.gap_um);
  apply(o.mass_kg, c.mechanics.mass_kg);
  apply(o.spring, c.mechanics.spring_n_per_m);
  apply(o.combs, c.mechanics.combs);
  apply(o.v_in, c.drive.v_in_v);
  apply(o.feedback, c.drive.feedback_mode);
  apply(o.permittivity, c.drive.permittivity_f_per_m);
  if (!o.variants.empty()) c.variants = o.variants;
  apply(o.arc_mode, c.sweep.arc_mode);
  apply(o.arc_min_um, c.sweep.arc_min_um);
  apply(o.arc_max_um, c.sweep.arc_max_um);
  apply(o.arc_points, c.sweep.arc_points);
  apply(o.accel_min_g, c.sweep.accel_min_g);
  apply(o.accel_max_g, c.sweep.accel_max_g);
  apply(o.accel_points, c.sweep.accel_points);
  if (o.csv) c.output.csv = o.csv;
  if (o.svg) c.output.svg = o.svg;
  // Round-trip through the strict parser so flag values get the same checks.
  return parse_config(to_json(c));
}

bool use_color(const std::ostream& out) {
  if (std::getenv("CURVEDCOMB_NO_COLOR") != nullptr) return false;
  if (&out == &std::cout) return isatty(STDOUT_FILENO) != 0;
  if (&out == &std::cerr) return isatty(STDERR_FILENO) != 0;
  return false;
}

std::string bold(const std::string& s, bool color) {
  return color ? "\033[1m" + s + "\033[0m" : s;
}

void emit_csv(const RunConfig& c, const std::string& csv, std::ostream& out) {
  if (c.output.csv) {
    write_file(*c.output.csv, csv);
  } else {
    out << csv;
  }
}

void report_skipped(const SweepResult& result, std::ostream& err) {
  for (const auto& s : result.skipped) {
    err << "warning: skipped " << to_string(s.variant) << " arc="
        << s.arc_length_m << " m accel=" << s.accel_g << " g: " << s.reason
        << '\n';
  }
}

// --- capacitance ---------------------------------------------------------

struct CapacitanceArgs {
  std::string kind;
  std::optional<double> b_um;
  bool verify = false;
};

int cmd_capacitance(const Overrides& o, const CapacitanceArgs& a,
                    std::ostream& out) {
  const auto kind = parse_face_kind(a.kind);
  if (!kind) throw CLI::ValidationError("--kind", "expected convex|concave|flat");
  RunConfig c = resolve(o);
  const ArcProfile arc = base_profile(c);
  const double b_um = a.b_um.value_or(
      c.geometry.planar_length_um.value_or(arc.arc_length() / kMicron));
  const PlanarProfile flat(b_um * kMicron, arc.thickness_m());
  const Face face{*kind, arc, flat};
  const double gap = c.gap_um * kMicron;
  const double eps = c.drive.permittivity_f_per_m;

  const double cap = capacitance(face, gap, eps);
  out << "kind: " << to_string(*kind) << '\n';
  out << "capacitance_f: " << format_sci(cap) << '\n';
  out << "dc_dgap_f_per_m: " << format_sci(dcap_dgap(face, gap, eps)) << '\n';
  if (!a.verify) return kExitOk;

  const auto quad = oracles::quad_capacitance(face, gap, eps);
  const double rel = std::abs(cap - quad.value) / std::abs(quad.value);
  out << "quadrature_f: " << format_sci(quad.value) << '\n';
  out << "relative_error: " << format_sci(rel) << '\n';
  const bool ok = rel < kVerifyTolerance || (quad.value == 0.0 && cap == 0.0);
  out << "verify: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitVerify;
}

// --- gain curve ------------------------------------------------------------

int cmd_gain_curve(const Overrides& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = resolve(o);
  const SweepResult result = gain_curve(sweep_plan(c));
  report_skipped(result, err);
  if (result.rows.empty()) {
    err << "error: no valid points in the gain curve\n";
    return kExitDomain;
  }
  emit_csv(c, gain_curve_csv(result), out);
  if (c.output.svg) {
    write_file(*c.output.svg,
               line_chart_svg({"Output voltage vs acceleration",
                               "acceleration [g]", "V_out [V]",
                               series_by_variant(result.rows, &SweepRow::accel_g,
                                                 &SweepRow::v_out_v)}));
  }
  std::ostream& summary = c.output.csv ? out : err;
  for (const auto& s : result.slopes) {
    summary << "slope " << to_string(s.variant) << ": fitted "
            << format_sci(s.fitted_mv_per_g) << " mV/g, analytic(a=0) "
            << format_sci(s.analytic_mv_per_g) << " mV/g\n";
  }
  return kExitOk;
}

// --- sensitivity sweep ----------------------------------------------------

int cmd_sensitivity_sweep(const Overrides& o, bool verify, std::ostream& out,
                          std::ostream& err) {
  const RunConfig c = resolve(o);
  const SweepPlan plan = sweep_plan(c);
  const SweepResult result = sensitivity_sweep(plan);
  report_skipped(result, err);
  if (result.rows.empty()) {
    err << "error: no valid points in the sensitivity sweep\n";
    return kExitDomain;
  }

  std::optional<std::vector<double>> fd_column;
  bool verify_ok = true;
  if (verify) {
    fd_column.emplace();
    oracles::FiniteDiffSpec spec;
    spec.scale = plan.gap_m * plan.mech.spring_n_per_m() / plan.mech.mass_kg();
    for (const SweepRow& r : result.rows) {
      const ElectrodeConfig ec(
          r.variant, profile_for_arc(plan.base_profile, plan.arc_mode,
                                     r.arc_length_m));
      const auto fd = oracles::fd_derivative(
          [&](double a) {
            return gain(ec, plan.gap_m, plan.mech, plan.drive, a).v_out_volts;
          },
          0.0, spec);
      const double fd_mv = fd.derivative * kStandardGravity * 1e3;
      fd_column->push_back(fd_mv);
      if (std::abs(fd_mv - r.s_mv_per_g) > kDerivativeTolerance * std::abs(r.s_mv_per_g)) {
        verify_ok = false;
        err << "verify: " << to_string(r.variant) << " arc=" << r.arc_length_m
            << " analytic " << r.s_mv_per_g << " vs fd " << fd_mv << '\n';
      }
    }
  }
  emit_csv(c, sensitivity_csv(result, fd_column), out);
  if (c.output.svg) {
    auto series = series_by_variant(result.rows, &SweepRow::arc_length_m,
                                    &SweepRow::s_mv_per_g);
    for (auto& s : series) {
      for (double& x : s.x) x /= kMicron;
    }
    write_file(*c.output.svg,
               line_chart_svg({"Per-comb sensitivity vs arc length",
                               "arc length [um]", "sensitivity [mV/g]",
                               std::move(series)}));
  }
  return verify_ok ? kExitOk : kExitVerify;
}

// --- compare ----------------------------------------------------------------

int cmd_compare(const Overrides& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = resolve(o);
  const ArcProfile arc = base_profile(c);
  const MechanicalModel mech = mechanics(c);
  const DriveModel drv = drive(c);
  const double gap = c.gap_um * kMicron;

  struct Entry {
    Variant variant;
    double s_mv;
  };
  std::vector<Entry> entries;
  for (Variant v : variants(c)) {
    entries.push_back({v, sensitivity(ElectrodeConfig(v, arc), gap, mech, drv) * 1e3});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.s_mv > b.s_mv; });
  const double planar_s =
      sensitivity(ElectrodeConfig(Variant::Planar, arc), gap, mech, drv) * 1e3;

  CsvWriter csv({"rank", "variant", "s_mv_per_g", "s_net_paper_scaling_mv_per_g",
                 "ratio_to_planar"});
  std::ostream& table = c.output.csv ? out : err;
  const bool color = use_color(table);
  table << bold("rank  variant           S [mV/g]                 "
                "S_net [mV/g] (paper-scaling N*S)  S/S_planar",
                color)
        << '\n';
  int rank = 0;
  for (const Entry& e : entries) {
    ++rank;
    const double net = net_sensitivity(e.s_mv, mech);
    const double ratio = e.s_mv / planar_s;
    csv.add_row({std::to_string(rank), std::string(to_string(e.variant)),
                 format_sci(e.s_mv), format_sci(net), format_sci(ratio)});
    std::ostringstream line;
    line << std::left << std::setw(6) << rank << std::setw(18)
         << to_string(e.variant) << std::setw(25) << format_sci(e.s_mv)
         << std::setw(35) << format_sci(net) << std::fixed
         << std::setprecision(6) << ratio;
    table << line.str() << '\n';
  }
  emit_csv(c, csv.str(), out);
  return kExitOk;
}

// --- maximize ---------------------------------------------------------------

int cmd_maximize(const Overrides& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = resolve(o);
  const OptimizerParams params = optimizer_params(c);
  const MechanicalModel mech = mechanics(c);
  CsvWriter csv({"variant", "arc_min_m", "arc_max_m", "arc_opt_m", "s_mv_per_g",
                 "s_net_paper_scaling_mv_per_g"});
  std::ostream& summary = c.output.csv ? out : err;
  int failures = 0;
  for (Variant v : variants(c)) {
    try {
      const Optimum best = maximize_sensitivity(
          v, c.sweep.arc_min_um * kMicron, c.sweep.arc_max_um * kMicron, params);
      const double s_mv = best.sensitivity_v_per_g * 1e3;
      csv.add_row({std::string(to_string(v)), format_sci(best.feasible_min_m),
                   format_sci(best.feasible_max_m), format_sci(best.arc_length_m),
                   format_sci(s_mv), format_sci(net_sensitivity(s_mv, mech))});
      summary << to_string(v) << ": arc* = " << best.arc_length_m / kMicron
              << " um, S* = " << s_mv << " mV/g (searched ["
              << best.feasible_min_m / kMicron << ", "
              << best.feasible_max_m / kMicron << "] um)\n";
    } catch (const PlanError& e) {
      ++failures;
      err << "error: " << e.what() << '\n';
    }
  }
  emit_csv(c, csv.str(), out);
  return failures == 0 ? kExitOk : kExitDomain;
}

// --- validate ---------------------------------------------------------------

int cmd_validate(const Overrides& o, bool json, double fault, std::ostream& out) {
  const RunConfig c = resolve(o);
  ValidationOptions options;
  options.closed_form_perturbation = fault;
  const ValidationSummary summary = run_validation(c, options);
  if (json) {
    out << summary.to_json().dump(2) << '\n';
  } else {
    const bool color = use_color(out);
    for (const auto& s : summary.suites) {
      out << std::left << std::setw(12) << s.name << " max error "
          << format_sci(s.max_error) << " (tol " << s.tolerance << ", "
          << s.checks << " checks) "
          << bold(s.passed() ? "PASS" : "FAIL", color) << '\n';
      if (!s.passed()) out << "  worst: " << s.worst_case << '\n';
    }
  }
  return summary.passed() ? kExitOk : kExitVerify;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Electrostatic transduction model of a capacitive accelerometer "
               "with curved fixed electrodes. Lengths are given in micrometers "
               "(1 um = 1e-6 m); all computation is SI."};
  app.require_subcommand(1);

  Overrides o;
  CapacitanceArgs cap_args;
  bool sweep_verify = false;
  bool validate_json = false;
  double fault = 0.0;

  auto* cap = app.add_subcommand("capacitance", "Capacitance of one face");
  add_geometry_options(cap, o);
  cap->add_option("--kind", cap_args.kind, "convex | concave | flat")->required();
  cap->add_option("--b-um", cap_args.b_um, "Flat-face length b [um]");
  cap->add_flag("--verify", cap_args.verify, "Cross-check against quadrature");

  auto* curve = app.add_subcommand("gain-curve", "V_out vs acceleration");
  add_model_options(curve, o);

  auto* sweep = app.add_subcommand("sensitivity-sweep", "S vs arc length");
  add_model_options(sweep, o);
  sweep->add_flag("--verify", sweep_verify, "Add finite-difference column");

  auto* compare = app.add_subcommand("compare", "Rank variants by sensitivity");
  add_model_options(compare, o);

  auto* maximize = app.add_subcommand("maximize", "Best arc length per variant");
  add_model_options(maximize, o);

  auto* validate = app.add_subcommand("validate", "Run the oracle suite");
  add_model_options(validate, o);
  validate->add_flag("--json", validate_json, "Machine-readable summary");
  validate->add_option("--inject-fault", fault,
                       "Test hook: relative perturbation of closed forms")
      ->group("");

  auto* tmpl = app.add_subcommand("template", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*tmpl) {
      out << default_template();
      return kExitOk;
    }
    if (*cap) return cmd_capacitance(o, cap_args, out);
    if (*curve) return cmd_gain_curve(o, out, err);
    if (*sweep) return cmd_sensitivity_sweep(o, sweep_verify, out, err);
    if (*compare) return cmd_compare(o, out, err);
    if (*maximize) return cmd_maximize(o, out, err);
    if (*validate) return cmd_validate(o, validate_json, fault, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const PlanError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const oracles::ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerify;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace curvedcomb::cli
