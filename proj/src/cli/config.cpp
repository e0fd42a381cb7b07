#include "curvedcomb/cli/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace curvedcomb::cli {

namespace {

using nlohmann::json;

constexpr double kMicron = 1e-6;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

// Walks an object, dispatching known keys and rejecting the rest.
using Handlers = std::map<std::string, std::function<void(const json&,
                                                          const std::string&)>>;

void visit(const json& obj, const std::string& path, const Handlers& handlers) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key_path = join(path, it.key());
    auto h = handlers.find(it.key());
    if (h == handlers.end()) fail(key_path, "unknown key");
    h->second(it.value(), key_path);
  }
}

auto number_into(double& target) {
  return [&target](const json& v, const std::string& p) {
    target = as_number(v, p);
  };
}

auto optional_number_into(std::optional<double>& target) {
  return [&target](const json& v, const std::string& p) {
    if (v.is_null()) {
      target.reset();
    } else {
      target = as_number(v, p);
    }
  };
}

auto int_into(int& target) {
  return [&target](const json& v, const std::string& p) {
    target = as_int(v, p);
  };
}

auto string_into(std::string& target) {
  return [&target](const json& v, const std::string& p) {
    target = as_string(v, p);
  };
}

auto optional_string_into(std::optional<std::string>& target) {
  return [&target](const json& v, const std::string& p) {
    if (v.is_null()) {
      target.reset();
    } else {
      target = as_string(v, p);
    }
  };
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json optional_to_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename Fn>
auto wrap(const char* path, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + path + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  visit(doc, "", {
      {"geometry", [&](const json& v, const std::string& p) {
         visit(v, p, {
             {"r_um", number_into(c.geometry.radius_um)},
             {"phi_rad", optional_number_into(c.geometry.phi_rad)},
             {"arc_um", optional_number_into(c.geometry.arc_um)},
             {"h_um", number_into(c.geometry.thickness_um)},
             {"b_um", optional_number_into(c.geometry.planar_length_um)},
         });
       }},
      {"gap_um", number_into(c.gap_um)},
      {"mech", [&](const json& v, const std::string& p) {
         visit(v, p, {
             {"m_kg", number_into(c.mechanics.mass_kg)},
             {"k_n_per_m", number_into(c.mechanics.spring_n_per_m)},
             {"combs", int_into(c.mechanics.combs)},
         });
       }},
      {"drive", [&](const json& v, const std::string& p) {
         visit(v, p, {
             {"v_in_v", number_into(c.drive.v_in_v)},
             {"feedback_mode", string_into(c.drive.feedback_mode)},
             {"permittivity", number_into(c.drive.permittivity_f_per_m)},
         });
       }},
      {"variants", [&](const json& v, const std::string& p) {
         if (!v.is_array()) fail(p, "expected an array of variant names");
         c.variants.clear();
         for (std::size_t i = 0; i < v.size(); ++i) {
           c.variants.push_back(
               as_string(v[i], p + "[" + std::to_string(i) + "]"));
         }
       }},
      {"sweep", [&](const json& v, const std::string& p) {
         visit(v, p, {
             {"arc_mode", string_into(c.sweep.arc_mode)},
             {"arc_min_um", number_into(c.sweep.arc_min_um)},
             {"arc_max_um", number_into(c.sweep.arc_max_um)},
             {"arc_points", int_into(c.sweep.arc_points)},
             {"accel_min_g", number_into(c.sweep.accel_min_g)},
             {"accel_max_g", number_into(c.sweep.accel_max_g)},
             {"accel_points", int_into(c.sweep.accel_points)},
         });
       }},
      {"optimizer", [&](const json& v, const std::string& p) {
         visit(v, p, {
             {"min_edge_gap_fraction",
              number_into(c.optimizer.min_edge_gap_fraction)},
             {"tolerance_um", number_into(c.optimizer.tolerance_um)},
         });
       }},
      {"layout", [&](const json& v, const std::string& p) {
         visit(v, p, {
             {"proof_mass_length_um", number_into(c.layout.proof_mass_length_um)},
             {"proof_mass_width_um", number_into(c.layout.proof_mass_width_um)},
             {"electrode_length_um", number_into(c.layout.electrode_length_um)},
             {"finger_width_um", number_into(c.layout.finger_width_um)},
         });
       }},
      {"output", [&](const json& v, const std::string& p) {
         visit(v, p, {
             {"csv", optional_string_into(c.output.csv)},
             {"svg", optional_string_into(c.output.svg)},
         });
       }},
  });
  if (c.geometry.phi_rad && c.geometry.arc_um) {
    fail("geometry", "give either phi_rad or arc_um, not both");
  }
  // Surface value errors now, with their field path.
  (void)base_profile(c);
  (void)mechanics(c);
  (void)drive(c);
  (void)variants(c);
  (void)arc_mode(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json doc;
  doc["geometry"] = {
      {"r_um", c.geometry.radius_um},
      {"phi_rad", optional_to_json(c.geometry.phi_rad)},
      {"arc_um", optional_to_json(c.geometry.arc_um)},
      {"h_um", c.geometry.thickness_um},
      {"b_um", optional_to_json(c.geometry.planar_length_um)},
  };
  doc["gap_um"] = c.gap_um;
  doc["mech"] = {
      {"m_kg", c.mechanics.mass_kg},
      {"k_n_per_m", c.mechanics.spring_n_per_m},
      {"combs", c.mechanics.combs},
  };
  doc["drive"] = {
      {"v_in_v", c.drive.v_in_v},
      {"feedback_mode", c.drive.feedback_mode},
      {"permittivity", c.drive.permittivity_f_per_m},
  };
  doc["variants"] = c.variants;
  doc["sweep"] = {
      {"arc_mode", c.sweep.arc_mode},
      {"arc_min_um", c.sweep.arc_min_um},
      {"arc_max_um", c.sweep.arc_max_um},
      {"arc_points", c.sweep.arc_points},
      {"accel_min_g", c.sweep.accel_min_g},
      {"accel_max_g", c.sweep.accel_max_g},
      {"accel_points", c.sweep.accel_points},
  };
  doc["optimizer"] = {
      {"min_edge_gap_fraction", c.optimizer.min_edge_gap_fraction},
      {"tolerance_um", c.optimizer.tolerance_um},
  };
  doc["layout"] = {
      {"proof_mass_length_um", c.layout.proof_mass_length_um},
      {"proof_mass_width_um", c.layout.proof_mass_width_um},
      {"electrode_length_um", c.layout.electrode_length_um},
      {"finger_width_um", c.layout.finger_width_um},
  };
  doc["output"] = {
      {"csv", optional_to_json(c.output.csv)},
      {"svg", optional_to_json(c.output.svg)},
  };
  return doc;
}

std::string default_template() {
  RunConfig c;
  c.geometry.arc_um = 20.0;
  return to_json(c).dump(2) + "\n";
}

ArcProfile base_profile(const RunConfig& c) {
  return wrap("geometry", [&] {
    const double r = c.geometry.radius_um * kMicron;
    const double h = c.geometry.thickness_um * kMicron;
    if (c.geometry.phi_rad) return ArcProfile(r, *c.geometry.phi_rad, h);
    return ArcProfile::from_arc_length(r, c.geometry.arc_um.value_or(20.0) * kMicron,
                                       h);
  });
}

MechanicalModel mechanics(const RunConfig& c) {
  return wrap("mech", [&] {
    return MechanicalModel(c.mechanics.mass_kg, c.mechanics.spring_n_per_m,
                           c.mechanics.combs);
  });
}

DriveModel drive(const RunConfig& c) {
  const auto mode = parse_feedback_mode(c.drive.feedback_mode);
  if (!mode) {
    fail("drive.feedback_mode", "expected 'matched_sum' or 'nominal', got '" +
                                    c.drive.feedback_mode + "'");
  }
  return wrap("drive", [&] {
    return DriveModel(c.drive.v_in_v, *mode, c.drive.permittivity_f_per_m);
  });
}

std::vector<Variant> variants(const RunConfig& c) {
  std::vector<Variant> out;
  for (std::size_t i = 0; i < c.variants.size(); ++i) {
    const auto v = parse_variant(c.variants[i]);
    if (!v) {
      fail("variants[" + std::to_string(i) + "]",
           "unknown variant '" + c.variants[i] + "'");
    }
    out.push_back(*v);
  }
  return out;
}

ArcMode arc_mode(const RunConfig& c) {
  const auto mode = parse_arc_mode(c.sweep.arc_mode);
  if (!mode) {
    fail("sweep.arc_mode", "expected 'vary_phi_fixed_r' or 'vary_r_fixed_arc'");
  }
  return *mode;
}

SweepPlan sweep_plan(const RunConfig& c) {
  return SweepPlan{
      .variants = variants(c),
      .base_profile = base_profile(c),
      .arc_mode = arc_mode(c),
      .arc_range_m = Range{c.sweep.arc_min_um * kMicron,
                           c.sweep.arc_max_um * kMicron, c.sweep.arc_points},
      .accel_range_g =
          Range{c.sweep.accel_min_g, c.sweep.accel_max_g, c.sweep.accel_points},
      .gap_m = c.gap_um * kMicron,
      .mech = mechanics(c),
      .drive = drive(c),
  };
}

OptimizerParams optimizer_params(const RunConfig& c) {
  const double max_accel =
      std::max(std::abs(c.sweep.accel_min_g), std::abs(c.sweep.accel_max_g));
  return OptimizerParams{
      .base_profile = base_profile(c),
      .arc_mode = arc_mode(c),
      .gap_m = c.gap_um * kMicron,
      .mech = mechanics(c),
      .drive = drive(c),
      .max_accel_g = max_accel,
      .min_edge_gap_fraction = c.optimizer.min_edge_gap_fraction,
      .tolerance_m = c.optimizer.tolerance_um * kMicron,
  };
}

double estimated_mass_kg(const RunConfig& c) {
  return estimate_plate_mass(c.layout.proof_mass_length_um * kMicron,
                             c.layout.proof_mass_width_um * kMicron,
                             c.geometry.thickness_um * kMicron);
}

}  // namespace curvedcomb::cli
