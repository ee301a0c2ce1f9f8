#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twpa/nelder_mead.hpp"
#include "twpa/spectrum.hpp"

namespace twpa {

struct GainMetrics {
  double max_smooth_gain_db = 0.0;
  double f_max_ghz = 0.0;
  double bw_3db_ghz = 0.0;
  double gain_range_db = 0.0;  ///< max - min of the raw gain inside the 3 dB window
  double bw_lo_ghz = 0.0;
  double bw_hi_ghz = 0.0;
};

struct PumpSetting {
  double f_pump_ghz;
  double p_pump_dbm;
};

/// Pointwise maximum of at least two spectra on one grid.
Spectrum background_from_max(std::span<const Spectrum> spectra);

/// Replaces the values strictly inside [lo, hi] with the straight line between the
/// spectrum's (interpolated) values at lo and hi.
Spectrum background_interp(const Spectrum& spectrum, double lo_ghz, double hi_ghz);

/// pump_on - background in dB.
Spectrum gain_profile(const Spectrum& pump_on, const Spectrum& background);

/// Moving average over samples within +-window/2, window truncated at the spectrum ends.
std::vector<double> boxcar_smooth(std::span<const double> freqs_ghz, std::span<const double> values, double window_ghz);

GainMetrics smooth_and_metrics(const Spectrum& gain, double window_ghz = 0.5);

/// `{max_smooth_gain_db, f_max_ghz, bw_3db_ghz, gain_range_db}`.
std::string gain_metrics_to_json(const GainMetrics& metrics);

using GainSurface = std::function<GainMetrics(const PumpSetting&)>;

class PumpEvaluationError : public std::runtime_error {
public:
  PumpEvaluationError(PumpSetting setting, const std::string& what);
  PumpSetting setting;
};

struct PumpSearchBox {
  double f_lo_ghz;
  double f_hi_ghz;
  double p_lo_dbm;
  double p_hi_dbm;

  /// f_pump within +-1 GHz of the gap estimate, any power.
  static PumpSearchBox around_gap(double fg_ghz);
  bool contains(const PumpSetting& s) const;
};

struct PumpOptimization {
  PumpSetting best;
  GainMetrics metrics;
  GainMetrics start_metrics;
  bool zero_improvement = false;
  int iterations = 0;
};

/// Maximizes max_smooth_gain over (f_pump, P_pump). Never returns a setting worse than `start`.
PumpOptimization optimize_pump(const GainSurface& surface, PumpSetting start,
                               std::optional<PumpSearchBox> box = std::nullopt,
                               const NelderMeadOptions& options = {});

/// Measured gain profiles on a grid of pump settings, looked up by nearest neighbour.
class GainSurfaceTable {
public:
  static GainSurfaceTable from_csv(std::istream& in, double window_ghz = 0.5);
  static GainSurfaceTable from_csv(const std::filesystem::path& path, double window_ghz = 0.5);

  GainMetrics operator()(const PumpSetting& setting) const;
  const std::vector<PumpSetting>& settings() const { return settings_; }

private:
  std::vector<PumpSetting> settings_;
  std::vector<GainMetrics> metrics_;
  double f_scale_ = 1.0;
  double p_scale_ = 1.0;
};

}  // namespace twpa
