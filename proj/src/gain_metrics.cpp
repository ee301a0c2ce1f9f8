#include "twpa/gain_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>

#include <json.hpp>

#include "twpa/errors.hpp"

namespace twpa {

namespace {

void require_same_grid(const Spectrum& a, const Spectrum& b) {
  if (!same_grid(a, b)) throw GridMismatchError("spectra are not on a common frequency grid");
}

double interpolate(const Spectrum& s, double f) {
  const auto& x = s.freqs_ghz;
  auto it = std::lower_bound(x.begin(), x.end(), f);
  if (it == x.begin()) return s.values_db.front();
  if (it == x.end()) return s.values_db.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double t = (f - x[i - 1]) / (x[i] - x[i - 1]);
  return s.values_db[i - 1] + t * (s.values_db[i] - s.values_db[i - 1]);
}

}  // namespace

Spectrum background_from_max(std::span<const Spectrum> spectra) {
  if (spectra.size() < 2) throw InvalidParameter("background_from_max needs at least two spectra");
  Spectrum out = spectra.front();
  out.validate();
  for (const auto& s : spectra.subspan(1)) {
    require_same_grid(out, s);
    for (std::size_t i = 0; i < s.size(); ++i) out.values_db[i] = std::max(out.values_db[i], s.values_db[i]);
  }
  out.meta.field = {};
  return out;
}

Spectrum background_interp(const Spectrum& spectrum, double lo_ghz, double hi_ghz) {
  spectrum.validate();
  if (spectrum.size() < 2 || !(lo_ghz < hi_ghz) || lo_ghz < spectrum.freqs_ghz.front() ||
      hi_ghz > spectrum.freqs_ghz.back()) {
    throw DomainError("gap window must lie inside the spectrum span");
  }
  Spectrum out = spectrum;
  const double v_lo = interpolate(spectrum, lo_ghz);
  const double v_hi = interpolate(spectrum, hi_ghz);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double f = out.freqs_ghz[i];
    if (f > lo_ghz && f < hi_ghz) out.values_db[i] = v_lo + (f - lo_ghz) / (hi_ghz - lo_ghz) * (v_hi - v_lo);
  }
  return out;
}

Spectrum gain_profile(const Spectrum& pump_on, const Spectrum& background) {
  require_same_grid(pump_on, background);
  Spectrum out = pump_on;
  for (std::size_t i = 0; i < out.size(); ++i) out.values_db[i] = pump_on.values_db[i] - background.values_db[i];
  return out;
}

std::vector<double> boxcar_smooth(std::span<const double> freqs_ghz, std::span<const double> values, double window_ghz) {
  const std::size_t n = freqs_ghz.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];
  std::vector<double> out(n);
  const double half = 0.5 * window_ghz * (1.0 + 1e-12);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (freqs_ghz[i] - freqs_ghz[lo] > half) ++lo;
    while (hi < n && freqs_ghz[hi] - freqs_ghz[i] <= half) ++hi;
    const double mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    out[i] = mean;
  }
  return out;
}

GainMetrics smooth_and_metrics(const Spectrum& gain, double window_ghz) {
  gain.validate();
  if (gain.size() < 2 || !(gain.freqs_ghz.back() - gain.freqs_ghz.front() > window_ghz)) {
    throw InvalidParameter("gain spectrum must span more than the smoothing window");
  }
  const auto& f = gain.freqs_ghz;
  const auto& raw = gain.values_db;
  const auto smooth = boxcar_smooth(f, raw, window_ghz);
  const std::size_t n = smooth.size();

  const auto imax = static_cast<std::size_t>(std::max_element(smooth.begin(), smooth.end()) - smooth.begin());
  const double peak = smooth[imax];
  const double level = peak - 3.0;

  // widest contiguous run at or above the 3 dB level
  std::size_t best_lo = imax, best_hi = imax;
  double best_width = -1.0;
  for (std::size_t i = 0; i < n;) {
    if (smooth[i] < level) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && smooth[j + 1] >= level) ++j;
    auto edge = [&](std::size_t inside, std::size_t outside) {
      const double t = (smooth[inside] - level) / (smooth[inside] - smooth[outside]);
      return f[inside] + t * (f[outside] - f[inside]);
    };
    const double lo_f = i > 0 ? edge(i, i - 1) : f[i];
    const double hi_f = j + 1 < n ? edge(j, j + 1) : f[j];
    if (hi_f - lo_f > best_width) {
      best_width = hi_f - lo_f;
      best_lo = i;
      best_hi = j;
    }
    i = j + 1;
  }
  GainMetrics m;
  m.max_smooth_gain_db = peak;
  m.f_max_ghz = f[imax];
  m.bw_lo_ghz = best_lo > 0 ? f[best_lo] + (smooth[best_lo] - level) / (smooth[best_lo] - smooth[best_lo - 1]) *
                                               (f[best_lo - 1] - f[best_lo])
                            : f[best_lo];
  m.bw_hi_ghz = best_hi + 1 < n ? f[best_hi] + (smooth[best_hi] - level) / (smooth[best_hi] - smooth[best_hi + 1]) *
                                                   (f[best_hi + 1] - f[best_hi])
                                : f[best_hi];
  m.bw_3db_ghz = std::max(0.0, m.bw_hi_ghz - m.bw_lo_ghz);
  const auto [mn, mx] = std::minmax_element(raw.begin() + static_cast<std::ptrdiff_t>(best_lo),
                                            raw.begin() + static_cast<std::ptrdiff_t>(best_hi) + 1);
  m.gain_range_db = *mx - *mn;
  return m;
}

std::string gain_metrics_to_json(const GainMetrics& m) {
  nlohmann::ordered_json j;
  j["max_smooth_gain_db"] = m.max_smooth_gain_db;
  j["f_max_ghz"] = m.f_max_ghz;
  j["bw_3db_ghz"] = m.bw_3db_ghz;
  j["gain_range_db"] = m.gain_range_db;
  return j.dump(2) + "\n";
}

PumpEvaluationError::PumpEvaluationError(PumpSetting s, const std::string& what)
    : std::runtime_error("gain surface failed at f_pump=" + format_number(s.f_pump_ghz) +
                         " GHz, P_pump=" + format_number(s.p_pump_dbm) + " dBm: " + what),
      setting(s) {}

PumpSearchBox PumpSearchBox::around_gap(double fg_ghz) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {fg_ghz - 1.0, fg_ghz + 1.0, -inf, inf};
}

bool PumpSearchBox::contains(const PumpSetting& s) const {
  return s.f_pump_ghz >= f_lo_ghz && s.f_pump_ghz <= f_hi_ghz && s.p_pump_dbm >= p_lo_dbm && s.p_pump_dbm <= p_hi_dbm;
}

PumpOptimization optimize_pump(const GainSurface& surface, PumpSetting start, std::optional<PumpSearchBox> box,
                               const NelderMeadOptions& options) {
  auto evaluate = [&surface](const PumpSetting& s) {
    try {
      return surface(s);
    } catch (const PumpEvaluationError&) {
      throw;
    } catch (const std::exception& e) {
      throw PumpEvaluationError(s, e.what());
    }
  };
  PumpOptimization out;
  out.start_metrics = evaluate(start);
  auto objective = [&](std::span<const double> x) {
    const PumpSetting s{x[0], x[1]};
    if (box && !box->contains(s)) return std::numeric_limits<double>::infinity();
    return -evaluate(s).max_smooth_gain_db;
  };
  const auto nm = nelder_mead(objective, {start.f_pump_ghz, start.p_pump_dbm}, options);
  out.iterations = nm.iterations;
  const PumpSetting candidate{nm.x[0], nm.x[1]};
  if (std::isfinite(nm.f) && -nm.f > out.start_metrics.max_smooth_gain_db) {
    out.best = candidate;
    out.metrics = evaluate(candidate);
  } else {
    out.best = start;
    out.metrics = out.start_metrics;
  }
  out.zero_improvement = !(out.metrics.max_smooth_gain_db > out.start_metrics.max_smooth_gain_db + 1e-12);
  return out;
}

GainSurfaceTable GainSurfaceTable::from_csv(std::istream& in, double window_ghz) {
  std::string line;
  bool have_header = false;
  std::map<std::pair<double, double>, Spectrum> grouped;
  std::vector<std::pair<double, double>> order;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = csv::split(line);
    if (!have_header) {
      if (cells.size() < 4 || cells[0] != "f_pump_GHz" || cells[1] != "p_pump_dBm" || cells[2] != "freq_GHz" ||
          cells[3] != "gain_dB") {
        throw ParseError("gain surface CSV: expected header 'f_pump_GHz,p_pump_dBm,freq_GHz,gain_dB'");
      }
      have_header = true;
      continue;
    }
    if (cells.size() < 4) throw ParseError("gain surface CSV: short row");
    const std::pair key{csv::to_double(cells[0]), csv::to_double(cells[1])};
    auto [it, inserted] = grouped.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.freqs_ghz.push_back(csv::to_double(cells[2]));
    it->second.values_db.push_back(csv::to_double(cells[3]));
  }
  if (grouped.empty()) throw ParseError("gain surface CSV: no data rows");

  GainSurfaceTable table;
  double f_min = order.front().first, f_max = f_min, p_min = order.front().second, p_max = p_min;
  for (const auto& key : order) {
    table.settings_.push_back({key.first, key.second});
    table.metrics_.push_back(smooth_and_metrics(grouped.at(key), window_ghz));
    f_min = std::min(f_min, key.first);
    f_max = std::max(f_max, key.first);
    p_min = std::min(p_min, key.second);
    p_max = std::max(p_max, key.second);
  }
  table.f_scale_ = f_max > f_min ? f_max - f_min : 1.0;
  table.p_scale_ = p_max > p_min ? p_max - p_min : 1.0;
  return table;
}

GainSurfaceTable GainSurfaceTable::from_csv(const std::filesystem::path& path, double window_ghz) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return from_csv(in, window_ghz);
}

GainMetrics GainSurfaceTable::operator()(const PumpSetting& s) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < settings_.size(); ++i) {
    const double df = (settings_[i].f_pump_ghz - s.f_pump_ghz) / f_scale_;
    const double dp = (settings_[i].p_pump_dbm - s.p_pump_dbm) / p_scale_;
    const double d = df * df + dp * dp;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return metrics_[best];
}

}  // namespace twpa
