#include "twpa/device.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

using json = nlohmann::ordered_json;

void CircuitParams::validate() const {
  if (!(lj_ph > 0.0) || !(cj_ff > 0.0) || !(cg_ff > 0.0)) {
    throw InvalidParameter("circuit parameters L_J, C_J, C_g must be positive");
  }
}

FieldAxis parse_axis(std::string_view name) {
  if (name == "par1") return FieldAxis::Par1;
  if (name == "par2") return FieldAxis::Par2;
  if (name == "perp") return FieldAxis::Perp;
  throw InvalidParameter("unknown field axis '" + std::string(name) + "' (expected par1|par2|perp)");
}

std::string_view to_string(FieldAxis axis) {
  switch (axis) {
    case FieldAxis::Par1: return "par1";
    case FieldAxis::Par2: return "par2";
    case FieldAxis::Perp: return "perp";
  }
  return "?";
}

void DeviceModel::validate() const {
  geometry.validate();
  circuit.validate();
  profile.validate();
  if (!(bc_par_mt > 0.0) || !(bc_perp_mt > 0.0)) throw InvalidParameter("critical fields must be positive");
  if (!(bc_perp_mt < bc_par_mt)) throw InvalidParameter("thin film requires Bc_perp < Bc_par");
  if (!(tc_k > 0.0)) throw InvalidParameter("Tc must be positive");
  if (fp0_ghz && !(*fp0_ghz > 0.0)) throw InvalidParameter("fp0_ghz must be positive");
  if (b_phi1_mt && !(*b_phi1_mt > 0.0)) throw InvalidParameter("b_phi1_mt must be positive");
  if (b_phi2_mt && !(*b_phi2_mt > 0.0)) throw InvalidParameter("b_phi2_mt must be positive");
  if (chi_par2) CurrentProfile{*chi_par2}.validate();
}

double DeviceModel::zero_field_plasma_ghz() const {
  if (fp0_ghz) return *fp0_ghz;
  const double lc = circuit.lj_ph * units::pH * circuit.cj_ff * units::fF;
  return 1.0 / (2.0 * constants::pi * std::sqrt(lc)) / units::GHz;
}

double DeviceModel::flux_field_par1_mt() const {
  return b_phi1_mt ? *b_phi1_mt : flux_field(geometry, FieldAxis::Par1);
}

double DeviceModel::flux_field_par2_mt() const {
  return b_phi2_mt ? *b_phi2_mt : flux_field(geometry, FieldAxis::Par2);
}

double DeviceModel::chi_for(FieldAxis axis) const {
  if (axis == FieldAxis::Par2 && chi_par2) return *chi_par2;
  return profile.chi;
}

// Nominal device values plus the fitted field parameters. B_par2 uses the uniform-current
// (sinc) form, hence chi_par2 = 0.
DeviceModel preset_twpa_a() {
  DeviceModel d{
      .name = "twpa_a",
      .geometry = {.w_um = 0.7, .h_um = 16.0, .eta = 0.05, .n_p = 28, .n_j = 1596, .l_nm = 28.5},
      .circuit = {.lj_ph = 95.0, .cj_ff = 500.0, .cg_ff = 38.0},
      .profile = {.chi = 0.668},
      .bc_par_mt = 236.0,
      .bc_perp_mt = 10.3,
      .tc_k = 1.27,
      .fp0_ghz = std::nullopt,
      .b_phi1_mt = 107.8,
      .b_phi2_mt = 4.55,
      .chi_par2 = 0.0,
  };
  d.validate();
  return d;
}

DeviceModel preset_twpa_b() {
  DeviceModel d = preset_twpa_a();
  d.name = "twpa_b";
  d.geometry.n_p = 33;
  d.geometry.n_j = 1800;
  d.circuit = {.lj_ph = 133.0, .cj_ff = 490.0, .cg_ff = 29.0};
  d.validate();
  return d;
}

std::optional<DeviceModel> find_preset(std::string_view name) {
  if (name == "twpa_a") return preset_twpa_a();
  if (name == "twpa_b") return preset_twpa_b();
  return std::nullopt;
}

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("device file: missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("device file: key '") + key + "' has the wrong type");
  }
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ParseError(std::string("device file: key '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

DeviceModel device_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("device file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("device file: top level must be a JSON object");
  DeviceModel d{
      .name = j.value("name", std::string("custom")),
      .geometry = {.w_um = required<double>(j, "w_um"),
                   .h_um = required<double>(j, "h_um"),
                   .eta = required<double>(j, "eta"),
                   .n_p = required<int>(j, "n_p"),
                   .n_j = required<int>(j, "n_j"),
                   .l_nm = required<double>(j, "l_nm")},
      .circuit = {.lj_ph = required<double>(j, "lj_ph"),
                  .cj_ff = required<double>(j, "cj_ff"),
                  .cg_ff = required<double>(j, "cg_ff")},
      .profile = {.chi = required<double>(j, "chi")},
      .bc_par_mt = required<double>(j, "bc_par_mt"),
      .bc_perp_mt = required<double>(j, "bc_perp_mt"),
      .tc_k = required<double>(j, "tc_k"),
      .fp0_ghz = optional_number(j, "fp0_ghz"),
      .b_phi1_mt = optional_number(j, "b_phi1_mt"),
      .b_phi2_mt = optional_number(j, "b_phi2_mt"),
      .chi_par2 = optional_number(j, "chi_par2"),
  };
  d.validate();
  return d;
}

std::string device_to_json_text(const DeviceModel& d) {
  json j;
  j["name"] = d.name;
  j["w_um"] = d.geometry.w_um;
  j["h_um"] = d.geometry.h_um;
  j["eta"] = d.geometry.eta;
  j["n_p"] = d.geometry.n_p;
  j["n_j"] = d.geometry.n_j;
  j["l_nm"] = d.geometry.l_nm;
  j["lj_ph"] = d.circuit.lj_ph;
  j["cj_ff"] = d.circuit.cj_ff;
  j["cg_ff"] = d.circuit.cg_ff;
  j["bc_par_mt"] = d.bc_par_mt;
  j["bc_perp_mt"] = d.bc_perp_mt;
  j["tc_k"] = d.tc_k;
  j["chi"] = d.profile.chi;
  if (d.fp0_ghz) j["fp0_ghz"] = *d.fp0_ghz;
  if (d.b_phi1_mt) j["b_phi1_mt"] = *d.b_phi1_mt;
  if (d.b_phi2_mt) j["b_phi2_mt"] = *d.b_phi2_mt;
  if (d.chi_par2) j["chi_par2"] = *d.chi_par2;
  return j.dump(2) + "\n";
}

DeviceModel load_device(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open device file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return device_from_json_text(ss.str());
}

DeviceModel resolve_device(const std::string& preset_or_path) {
  if (auto preset = find_preset(preset_or_path)) return *preset;
  return load_device(preset_or_path);
}

}  // namespace twpa
