#include "twpa/features.hpp"

#include <algorithm>
#include <cmath>

#include "twpa/errors.hpp"

namespace twpa {

namespace {

double median_of(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

// Frequency where the segment (f0, v0) -> (f1, v1) crosses `level`.
double crossing(double f0, double v0, double f1, double v1, double level) {
  if (v1 == v0) return 0.5 * (f0 + f1);
  const double t = std::clamp((level - v0) / (v1 - v0), 0.0, 1.0);
  return f0 + t * (f1 - f0);
}

}  // namespace

std::vector<double> rolling_median(std::span<const double> freqs_ghz, std::span<const double> values,
                                   double window_ghz) {
  const std::size_t n = freqs_ghz.size();
  std::vector<double> out(n);
  std::size_t lo = 0;
  std::size_t hi = 0;
  const double half = 0.5 * window_ghz * (1.0 + 1e-12);
  for (std::size_t i = 0; i < n; ++i) {
    while (freqs_ghz[i] - freqs_ghz[lo] > half) ++lo;
    while (hi < n && freqs_ghz[hi] - freqs_ghz[i] <= half) ++hi;
    out[i] = median_of(std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(lo),
                                           values.begin() + static_cast<std::ptrdiff_t>(hi)));
  }
  return out;
}

GapExtraction extract_gap(const Spectrum& spectrum, const GapOptions& options) {
  spectrum.validate();
  GapExtraction result;
  const auto& f = spectrum.freqs_ghz;
  const auto& v = spectrum.values_db;
  std::size_t n = spectrum.size();
  if (n < 3) return result;

  // The cutoff above f_p would otherwise register as a dip where the baseline bends down.
  if (auto fp = extract_plasma(spectrum)) {
    n = static_cast<std::size_t>(std::lower_bound(f.begin(), f.end(), *fp) - f.begin());
  }
  if (n < 3) return result;

  const auto base = rolling_median(std::span(f).first(n), std::span(v).first(n), options.baseline_window_ghz);
  std::size_t i = 0;
  while (i < n) {
    if (!(v[i] < base[i] - options.prominence_db)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] < base[j + 1] - options.prominence_db) ++j;
    // Dips must be bounded on both sides by in-threshold samples.
    if (i > 0 && j + 1 < n) {
      std::size_t deepest = i;
      double depth = -1.0;
      for (std::size_t k = i; k <= j; ++k) {
        if (base[k] - v[k] > depth) {
          depth = base[k] - v[k];
          deepest = k;
        }
      }
      const double lower = crossing(f[i - 1], v[i - 1] - base[i - 1], f[i], v[i] - base[i], -options.prominence_db);
      const double upper = crossing(f[j], v[j] - base[j], f[j + 1], v[j + 1] - base[j + 1], -options.prominence_db);
      double bottom = f[deepest];
      if (deepest > 0 && deepest + 1 < n) {
        const double y0 = v[deepest - 1], y1 = v[deepest], y2 = v[deepest + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        const double h = 0.5 * (f[deepest + 1] - f[deepest - 1]);
        if (denom > 0.0) bottom = f[deepest] + std::clamp(0.5 * (y0 - y2) / denom, -1.0, 1.0) * h;
      }
      result.dips.push_back({lower, upper, 0.5 * (lower + upper), bottom, depth});
    }
    i = j + 1;
  }

  for (const auto& d : result.dips) {
    if (!result.best || d.depth_db > result.best->depth_db + 1e-9 ||
        (std::abs(d.depth_db - result.best->depth_db) <= 1e-9 &&
         d.upper_ghz - d.lower_ghz > result.best->upper_ghz - result.best->lower_ghz)) {
      result.best = d;
    }
  }
  return result;
}

std::optional<double> extract_plasma(const Spectrum& spectrum, const PlasmaOptions& options) {
  spectrum.validate();
  const auto& f = spectrum.freqs_ghz;
  const auto& v = spectrum.values_db;
  const std::size_t n = spectrum.size();
  if (n < 2) return std::nullopt;

  double reference = median_of(v);
  std::size_t cut = n;
  for (int iter = 0; iter < 32; ++iter) {
    const double threshold = reference - options.drop_db;
    std::size_t last_above = n;  // sentinel: none above
    for (std::size_t k = n; k-- > 0;) {
      if (v[k] > threshold) {
        last_above = k;
        break;
      }
    }
    if (last_above == n) return std::nullopt;  // nothing is in the passband
    cut = last_above + 1;
    if (n - cut < static_cast<std::size_t>(std::max(options.min_points, 1))) return std::nullopt;
    const double updated = median_of(std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cut)));
    if (updated == reference) break;
    reference = updated;
  }
  const double threshold = reference - options.drop_db;
  return crossing(f[cut - 1], v[cut - 1], f[cut], v[cut], threshold);
}

}  // namespace twpa
