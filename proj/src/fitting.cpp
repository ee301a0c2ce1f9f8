#include "twpa/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>

#include <json.hpp>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"
#include "twpa/spectrum.hpp"

namespace twpa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using json = nlohmann::ordered_json;

json values_to_json(const std::vector<NamedValue>& values) {
  json j = json::object();
  for (const auto& v : values) j[v.name] = v.value;
  return j;
}

json fit_json(const FitResult& r) {
  json j;
  j["params"] = values_to_json(r.params);
  j["residual_norm"] = r.residual_norm;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  if (!r.derived.empty()) j["derived"] = values_to_json(r.derived);
  return j;
}

FitResult to_fit_result(const NelderMeadResult& nm, std::vector<std::string> names) {
  FitResult r;
  for (std::size_t i = 0; i < names.size(); ++i) r.params.push_back({std::move(names[i]), nm.x[i]});
  r.residual_norm = nm.f;
  r.iterations = nm.iterations;
  r.converged = nm.converged;
  return r;
}

std::vector<double> starting_point(const FitOptions& options, std::vector<double> fallback) {
  if (!options.initial) return fallback;
  if (options.initial->size() != fallback.size()) throw InvalidParameter("initial guess has the wrong dimension");
  return *options.initial;
}

void require_spread(const FgDataset& data, std::size_t min_rows) {
  if (data.rows.size() < min_rows) {
    throw IllPosedError("fit needs at least " + std::to_string(min_rows) + " data rows");
  }
  const auto [lo, hi] = std::minmax_element(data.rows.begin(), data.rows.end(),
                                            [](const FgRow& a, const FgRow& b) { return a.b_mt < b.b_mt; });
  if (lo->b_mt == hi->b_mt) throw IllPosedError("all data rows share one field value");
}

}  // namespace

double FitResult::param(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.value;
  }
  for (const auto& p : derived) {
    if (p.name == name) return p.value;
  }
  throw InvalidParameter("fit result has no parameter '" + std::string(name) + "'");
}

void FgDataset::validate() const {
  for (const auto& r : rows) {
    if (!(r.fg_ghz > 0.0)) throw InvalidParameter("gap frequencies must be positive");
  }
  if (rows.size() < 2) return;
  const bool increasing = rows[1].b_mt > rows[0].b_mt;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ok = increasing ? rows[i].b_mt > rows[i - 1].b_mt : rows[i].b_mt < rows[i - 1].b_mt;
    if (!ok) throw InvalidParameter("field must be strictly monotone within a sweep");
  }
}

std::vector<FgDataset> read_fg_csv(std::istream& in) {
  std::string line;
  int col_b = -1, col_fg = -1, col_sweep = -1;
  bool have_header = false;
  std::vector<FgDataset> out;
  std::map<std::string, std::size_t> by_tag;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = csv::split(line);
    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "field_mT") col_b = static_cast<int>(i);
        if (cells[i] == "fg_GHz") col_fg = static_cast<int>(i);
        if (cells[i] == "sweep") col_sweep = static_cast<int>(i);
      }
      if (col_b < 0 || col_fg < 0) throw ParseError("fg CSV: header must contain field_mT and fg_GHz");
      have_header = true;
      continue;
    }
    const auto need = static_cast<std::size_t>(std::max({col_b, col_fg, col_sweep}));
    if (cells.size() <= need) throw ParseError("fg CSV: short row '" + line + "'");
    double fg = 0.0;
    try {
      fg = csv::to_double(cells[static_cast<std::size_t>(col_fg)]);
    } catch (const ParseError&) {
      continue;
    }
    if (!std::isfinite(fg)) continue;
    const std::string tag = col_sweep >= 0 ? cells[static_cast<std::size_t>(col_sweep)] : "";
    auto it = by_tag.find(tag);
    if (it == by_tag.end()) {
      FgDataset ds;
      if (tag == "up") ds.direction = SweepDirection::Up;
      else if (tag == "down") ds.direction = SweepDirection::Down;
      else if (!tag.empty()) throw ParseError("fg CSV: sweep must be 'up' or 'down', got '" + tag + "'");
      it = by_tag.emplace(tag, out.size()).first;
      out.push_back(std::move(ds));
    }
    out[it->second].rows.push_back({csv::to_double(cells[static_cast<std::size_t>(col_b)]), fg});
  }
  if (!have_header) throw ParseError("fg CSV: empty input");
  for (const auto& ds : out) ds.validate();
  return out;
}

std::vector<FgDataset> read_fg_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_fg_csv(in);
}

std::vector<TemperatureRow> read_temperature_csv(std::istream& in) {
  std::string line;
  bool have_header = false;
  std::vector<TemperatureRow> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = csv::split(line);
    if (!have_header) {
      if (cells.size() < 2 || cells[0] != "temperature_K" || cells[1] != "fg_GHz") {
        throw ParseError("temperature CSV: expected header 'temperature_K,fg_GHz'");
      }
      have_header = true;
      continue;
    }
    if (cells.size() < 2) throw ParseError("temperature CSV: short row");
    out.push_back({csv::to_double(cells[0]), csv::to_double(cells[1])});
  }
  if (!have_header) throw ParseError("temperature CSV: empty input");
  return out;
}

std::vector<TemperatureRow> read_temperature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_temperature_csv(in);
}

std::string fit_result_to_json(const FitResult& result) { return fit_json(result).dump(2) + "\n"; }

std::string model_comparison_to_json(const ModelComparison& c) {
  json j;
  j["ag"] = fit_json(c.ag);
  j["gl"] = fit_json(c.gl);
  j["ag_better"] = c.ag_better();
  return j.dump(2) + "\n";
}

double par1_gap_center(const DeviceModel& device, double fp0_ghz, double chi, double b_phi1_mt, double b_mt,
                       GapModel gap_model, double bc_mt) {
  const double b = std::abs(b_mt);
  const double factor =
      std::abs(fraunhofer_factor(constants::pi * b / b_phi1_mt, chi)) * gap_ratio(gap_model, b, bc_mt);
  const double fp = fp0_ghz * std::sqrt(factor);
  if (fp == 0.0) return 0.0;
  return bandgap_edges_closed_form(fp, device.geometry.eta, 1.0, device.geometry.n_p,
                                   screening_length(device.circuit))
      .center_ghz();
}

FitResult fit_bandgap_par1(const FgDataset& data, const DeviceModel& device, GapModel gap_model, double bc_mt,
                           const FitOptions& options) {
  require_spread(data, 3);
  device.validate();
  if (!(bc_mt > 0.0)) throw InvalidParameter("Bc must be positive");
  auto objective = [&](std::span<const double> p) {
    const double fp0 = p[0], chi = p[1], b_phi = p[2];
    if (!(fp0 > 1.0 && fp0 < 100.0) || !(chi >= 0.0 && chi <= 5.0) || !(b_phi > 1.0 && b_phi < 1000.0)) return kInf;
    double sum = 0.0;
    for (const auto& r : data.rows) {
      const double d = par1_gap_center(device, fp0, chi, b_phi, r.b_mt, gap_model, bc_mt) - r.fg_ghz;
      sum += d * d;
    }
    return sum;
  };
  const auto x0 = starting_point(
      options, {device.zero_field_plasma_ghz(), device.chi_for(FieldAxis::Par1), device.flux_field_par1_mt()});
  return to_fit_result(nelder_mead(objective, x0, options.simplex), {"fp0_ghz", "chi", "b_phi1_mt"});
}

FitResult fit_perp_hysteresis(const FgDataset& up, const FgDataset& down, const FitOptions& options) {
  if (up.rows.size() < 2 || down.rows.size() < 2) throw IllPosedError("each sweep needs at least 2 rows");
  up.validate();
  down.validate();
  auto range = [](const FgDataset& d) {
    const auto [lo, hi] = std::minmax_element(d.rows.begin(), d.rows.end(),
                                              [](const FgRow& a, const FgRow& b) { return a.b_mt < b.b_mt; });
    return std::pair{lo->b_mt, hi->b_mt};
  };
  const auto [up_lo, up_hi] = range(up);
  const auto [dn_lo, dn_hi] = range(down);
  if (std::min(up_hi, dn_hi) - std::max(up_lo, dn_lo) <= 0.0) {
    throw IllPosedError("up and down sweeps do not overlap in field");
  }

  auto peak = [](const FgDataset& d) {
    return *std::max_element(d.rows.begin(), d.rows.end(),
                             [](const FgRow& a, const FgRow& b) { return a.fg_ghz < b.fg_ghz; });
  };
  const FgRow up_peak = peak(up);
  const FgRow dn_peak = peak(down);
  double reach = 0.0;
  for (const auto& r : up.rows) reach = std::max(reach, std::abs(r.b_mt - up_peak.b_mt));
  for (const auto& r : down.rows) reach = std::max(reach, std::abs(r.b_mt - dn_peak.b_mt));

  auto objective = [&](std::span<const double> p) {
    const double fg0 = p[0], bc = p[1];
    if (!(fg0 > 0.0) || !(bc > 0.0)) return kInf;
    double sum = 0.0;
    for (const auto& r : up.rows) {
      const double d = perp_bandgap_model(r.b_mt, fg0, p[2], bc) - r.fg_ghz;
      sum += d * d;
    }
    for (const auto& r : down.rows) {
      const double d = perp_bandgap_model(r.b_mt, fg0, p[3], bc) - r.fg_ghz;
      sum += d * d;
    }
    return sum;
  };
  const auto x0 = starting_point(
      options, {std::max(up_peak.fg_ghz, dn_peak.fg_ghz), 1.2 * std::max(reach, 1e-3), up_peak.b_mt, dn_peak.b_mt});
  FitResult r = to_fit_result(nelder_mead(objective, x0, options.simplex),
                              {"fg0_ghz", "bc_perp_mt", "b_offset_up_mt", "b_offset_down_mt"});
  r.derived.push_back({"offset_difference_mt", r.params[2].value - r.params[3].value});
  return r;
}

FitResult fit_temperature(std::span<const TemperatureRow> data, double tc_k, bool fit_tc, const FitOptions& options) {
  if (!(tc_k > 0.0)) throw InvalidParameter("Tc must be positive");
  std::vector<TemperatureRow> rows;
  for (const auto& r : data) {
    if (!(r.t_k > 0.0)) throw InvalidParameter("temperatures must be positive");
    if (fit_tc || r.t_k < tc_k) rows.push_back(r);
  }
  const bool any_below = std::any_of(data.begin(), data.end(), [tc_k](const auto& r) { return r.t_k < tc_k; });
  if (rows.empty() || !any_below) throw IllPosedError("temperature fit needs data below Tc");

  auto model = [](double t, double fg0, double tc) { return fg0 * std::sqrt(gap_vs_temperature(t, tc)); };
  auto objective = [&](std::span<const double> p) {
    const double fg0 = p[0];
    const double tc = fit_tc ? p[1] : tc_k;
    if (!(fg0 > 0.0) || !(tc > 0.0)) return kInf;
    double sum = 0.0;
    for (const auto& r : rows) {
      const double d = model(r.t_k, fg0, tc) - r.fg_ghz;
      sum += d * d;
    }
    return sum;
  };
  double fg_max = 0.0;
  for (const auto& r : rows) fg_max = std::max(fg_max, r.fg_ghz);
  std::vector<double> fallback{fg_max};
  std::vector<std::string> names{"fg0_ghz"};
  if (fit_tc) {
    fallback.push_back(tc_k);
    names.push_back("tc_k");
  }
  FitResult r = to_fit_result(nelder_mead(objective, starting_point(options, fallback), options.simplex), names);
  if (!fit_tc) r.derived.push_back({"tc_k", tc_k});
  return r;
}

ModelComparison model_comparison_gl_vs_ag(const FgDataset& data, const DeviceModel& device, double bc_mt,
                                          const FitOptions& options) {
  return {fit_bandgap_par1(data, device, GapModel::AgInterp, bc_mt, options),
          fit_bandgap_par1(data, device, GapModel::GL, bc_mt, options)};
}

}  // namespace twpa
