#pragma once

#include <optional>
#include <span>
#include <vector>

#include "twpa/spectrum.hpp"

namespace twpa {

struct Dip {
  double lower_ghz;   ///< threshold crossing below the dip
  double upper_ghz;   ///< threshold crossing above the dip
  double center_ghz;  ///< midpoint of the crossings
  double bottom_ghz;  ///< parabolic vertex through the deepest sample and its neighbours
  double depth_db;    ///< baseline minus deepest value
};

struct GapOptions {
  double prominence_db = 10.0;
  double baseline_window_ghz = 2.0;
};

struct GapExtraction {
  std::optional<Dip> best;  ///< most prominent dip
  std::vector<Dip> dips;    ///< every dip above threshold, ascending in frequency

  bool found() const { return best.has_value(); }
};

struct PlasmaOptions {
  double drop_db = 20.0;
  int min_points = 3;  ///< samples that must stay below the threshold
};

/// Median over samples within +-window/2 of each frequency.
std::vector<double> rolling_median(std::span<const double> freqs_ghz, std::span<const double> values,
                                   double window_ghz);

/// Most prominent contiguous dip below the rolling median, searched below the plasma cutoff.
GapExtraction extract_gap(const Spectrum& spectrum, const GapOptions& options = {});

/// Frequency where transmission first falls and stays drop_db below the passband median.
std::optional<double> extract_plasma(const Spectrum& spectrum, const PlasmaOptions& options = {});

}  // namespace twpa
