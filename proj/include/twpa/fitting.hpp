#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twpa/array_model.hpp"
#include "twpa/nelder_mead.hpp"

namespace twpa {

struct NamedValue {
  std::string name;
  double value;
};

struct FitResult {
  std::vector<NamedValue> params;
  double residual_norm = 0.0;  ///< sum of squared residuals
  int iterations = 0;
  bool converged = false;
  std::vector<NamedValue> derived;  ///< quantities computed from the fitted parameters

  double param(std::string_view name) const;
};

enum class SweepDirection { Unspecified, Up, Down };

struct FgRow {
  double b_mt;
  double fg_ghz;
};

/// Extracted gap frequencies along one field sweep.
struct FgDataset {
  std::vector<FgRow> rows;
  FieldAxis axis = FieldAxis::Par1;
  SweepDirection direction = SweepDirection::Unspecified;

  void validate() const;
};

struct TemperatureRow {
  double t_k;
  double fg_ghz;
};

/// Reads `field_mT,fg_GHz[,sweep]`. One dataset per distinct sweep tag, in order of first
/// appearance. Rows whose fg_GHz is not a number (e.g. "not-found") are skipped.
std::vector<FgDataset> read_fg_csv(std::istream& in);
std::vector<FgDataset> read_fg_csv(const std::filesystem::path& path);

/// Reads `temperature_K,fg_GHz`.
std::vector<TemperatureRow> read_temperature_csv(std::istream& in);
std::vector<TemperatureRow> read_temperature_csv(const std::filesystem::path& path);

std::string fit_result_to_json(const FitResult& result);

/// Mean of the two band edges for B_par1 with f_p(0), chi and B_Phi1 given explicitly.
double par1_gap_center(const DeviceModel& device, double fp0_ghz, double chi, double b_phi1_mt, double b_mt,
                       GapModel gap_model, double bc_mt);

struct FitOptions {
  NelderMeadOptions simplex{.restarts = 3};
  std::optional<std::vector<double>> initial;  ///< overrides the default starting point
};

/// Least squares over {fp0_ghz, chi, b_phi1_mt} with Bc held fixed.
FitResult fit_bandgap_par1(const FgDataset& data, const DeviceModel& device, GapModel gap_model, double bc_mt,
                           const FitOptions& options = {});

/// Joint fit over {fg0_ghz, bc_perp_mt, b_offset_up_mt, b_offset_down_mt}; reports
/// offset_difference_mt = up - down as a derived value.
FitResult fit_perp_hysteresis(const FgDataset& up, const FgDataset& down, const FitOptions& options = {});

/// fg(T) = fg0 sqrt(Delta(T)/Delta(0)). Fits fg0, and tc_k too when fit_tc is set.
FitResult fit_temperature(std::span<const TemperatureRow> data, double tc_k, bool fit_tc = false,
                          const FitOptions& options = {});

struct ModelComparison {
  FitResult ag;
  FitResult gl;

  bool ag_better() const { return ag.residual_norm < gl.residual_norm; }
};

ModelComparison model_comparison_gl_vs_ag(const FgDataset& data, const DeviceModel& device, double bc_mt,
                                          const FitOptions& options = {});

std::string model_comparison_to_json(const ModelComparison& comparison);

}  // namespace twpa
