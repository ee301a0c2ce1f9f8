#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "twpa/fraunhofer.hpp"

namespace twpa {

struct CircuitParams {
  double lj_ph;  ///< mean Josephson inductance
  double cj_ff;  ///< mean junction capacitance
  double cg_ff;  ///< mean island capacitance to ground

  void validate() const;
};

/// Field direction and signed magnitude. Models use |b_mt|.
struct FieldPoint {
  FieldAxis axis = FieldAxis::Par1;
  double b_mt = 0.0;
};

FieldAxis parse_axis(std::string_view name);
std::string_view to_string(FieldAxis axis);

/// Everything needed to evaluate the array model. Treated as immutable once validated.
struct DeviceModel {
  std::string name;
  JunctionGeometry geometry;
  CircuitParams circuit;
  CurrentProfile profile;
  double bc_par_mt;
  double bc_perp_mt;
  double tc_k;

  // Fitted values that take precedence over the geometric/circuit estimates.
  std::optional<double> fp0_ghz;
  std::optional<double> b_phi1_mt;
  std::optional<double> b_phi2_mt;
  std::optional<double> chi_par2;

  void validate() const;

  /// 1 / (2 pi sqrt(L C)) unless a fitted value is present.
  double zero_field_plasma_ghz() const;
  double flux_field_par1_mt() const;
  double flux_field_par2_mt() const;
  /// Current-profile parameter applicable to an axis.
  double chi_for(FieldAxis axis) const;
};

DeviceModel preset_twpa_a();
DeviceModel preset_twpa_b();
/// Named preset, if `name` is one.
std::optional<DeviceModel> find_preset(std::string_view name);

DeviceModel device_from_json_text(const std::string& text);
std::string device_to_json_text(const DeviceModel& device);
DeviceModel load_device(const std::filesystem::path& path);

/// Presets first, then a JSON file path.
DeviceModel resolve_device(const std::string& preset_or_path);

}  // namespace twpa
