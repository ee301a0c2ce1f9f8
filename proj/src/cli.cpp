#include "twpa/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "twpa/array_model.hpp"
#include "twpa/errors.hpp"
#include "twpa/features.hpp"
#include "twpa/fitting.hpp"
#include "twpa/gain_metrics.hpp"
#include "twpa/spectrum.hpp"
#include "twpa/transmission.hpp"

namespace twpa::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string device = "twpa_a";
  std::string out = ".";
  std::string gap_model = "ag-interp";
  int threads = 0;
};

struct Manifest {
  std::string command;
  json inputs = json::array();
  json options = json::object();
  json outputs = json::array();
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path output_dir(const Globals& g) {
  fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& text, Manifest& manifest) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
  manifest.outputs.push_back(path.string());
}

void write_manifest(const Globals& g, const fs::path& dir, const Manifest& m) {
  json j;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  j["device"] = g.device;
  j["options"] = m.options;
  j["options"]["gap_model"] = g.gap_model;
  j["outputs"] = m.outputs;
  j["tool_version"] = kToolVersion;
  j["timestamp"] = utc_timestamp();
  std::ofstream f(dir / (m.command + "_manifest.json"), std::ios::binary | std::ios::trunc);
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("failed writing manifest");
}

fs::path existing_input(const std::string& path, Manifest& manifest) {
  if (path.empty()) throw UsageError("missing input path");
  if (!fs::is_regular_file(path)) throw UsageError("input file not found: " + path);
  manifest.inputs.push_back(path);
  return path;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string axis = "par1";
  double b_from = 0.0;
  double b_to = 0.0;
  int steps = 101;
};

int cmd_sweep(const Globals& g, const SweepArgs& a, std::ostream& out) {
  const auto device = resolve_device(g.device);
  const auto model = parse_gap_model(g.gap_model);
  const auto axis = parse_axis(a.axis);
  if (a.steps < 1) throw UsageError("--steps must be at least 1");
  if (!std::isfinite(a.b_from) || !std::isfinite(a.b_to) || a.b_to < a.b_from) {
    throw UsageError("field range must satisfy --b-from-mt <= --b-to-mt");
  }
  const auto fields = linspace(a.b_from, a.b_to, a.steps);
  const auto rows = sweep_fields(device, axis, fields, model);

  std::ostringstream csv;
  csv << "field_mT,fg_minus_GHz,fg_plus_GHz,gap_width_GHz,fp_GHz,z_ohm\n";
  for (const auto& r : rows) {
    csv << format_number(r.b_mt) << ',' << format_number(r.fg_minus_ghz) << ',' << format_number(r.fg_plus_ghz)
        << ',' << format_number(r.gap_width_ghz) << ',' << format_number(r.fp_ghz) << ','
        << format_number(r.z_ohm) << '\n';
  }
  Manifest m{.command = "sweep"};
  m.options = {{"axis", a.axis}, {"b_from_mt", a.b_from}, {"b_to_mt", a.b_to}, {"steps", a.steps}};
  const auto dir = output_dir(g);
  write_file(dir / "sweep.csv", csv.str(), m);
  write_manifest(g, dir, m);
  out << "wrote " << rows.size() << " rows to " << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string axis = "par1";
  std::vector<double> b_mt{0.0};
  double f_from = 1.0;
  double f_to = 30.0;
  double f_step = 0.01;
  double z0 = 50.0;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a, std::ostream& out) {
  const auto device = resolve_device(g.device);
  const auto model = parse_gap_model(g.gap_model);
  const auto axis = parse_axis(a.axis);
  if (!(a.f_step > 0.0) || !(a.f_to > a.f_from) || !(a.f_from > 0.0)) {
    throw UsageError("frequency range must satisfy 0 < --f-from-ghz < --f-to-ghz with --f-step-ghz > 0");
  }
  if (!(a.z0 > 0.0)) throw UsageError("--z0-ohm must be positive");
  const auto freqs = frequency_grid(a.f_from, a.f_to, a.f_step);

  std::vector<Spectrum> s21, s11;
  for (double b : a.b_mt) {
    auto r = abcd_cascade(device, {axis, b}, freqs, a.z0, model);
    s21.push_back(std::move(r.s21));
    s11.push_back(std::move(r.s11));
  }
  std::ostringstream csv21, csv11;
  write_spectra_csv(csv21, s21, "s21_dB");
  write_spectra_csv(csv11, s11, "s11_dB");

  Manifest m{.command = "simulate"};
  m.options = {{"axis", a.axis},           {"b_mt", a.b_mt},          {"f_from_ghz", a.f_from},
               {"f_to_ghz", a.f_to},       {"f_step_ghz", a.f_step},  {"z0_ohm", a.z0}};
  const auto dir = output_dir(g);
  write_file(dir / "s21.csv", csv21.str(), m);
  write_file(dir / "s11.csv", csv11.str(), m);
  write_manifest(g, dir, m);
  out << "simulated " << a.b_mt.size() << " field(s) x " << freqs.size() << " frequencies\n";
  return kExitOk;
}

// --- extract -------------------------------------------------------------

struct ExtractArgs {
  std::string input;
  double prominence_db = GapOptions{}.prominence_db;
  double baseline_window_ghz = GapOptions{}.baseline_window_ghz;
  double drop_db = PlasmaOptions{}.drop_db;
};

int cmd_extract(const Globals& g, const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  Manifest m{.command = "extract"};
  const auto path = existing_input(a.input, m);
  std::vector<Spectrum> spectra;
  try {
    spectra = read_spectra_csv(path);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  if (spectra.empty()) throw UsageError("no spectra in " + path.string());

  const GapOptions gap_opts{.prominence_db = a.prominence_db, .baseline_window_ghz = a.baseline_window_ghz};
  const PlasmaOptions plasma_opts{.drop_db = a.drop_db};
  std::ostringstream csv;
  csv << "field_mT,fg_GHz,fp_GHz\n";
  int missing = 0;
  for (const auto& s : spectra) {
    const auto gap = extract_gap(s, gap_opts);
    const auto fp = extract_plasma(s, plasma_opts);
    csv << format_number(s.meta.field.b_mt) << ','
        << (gap.found() ? format_number(gap.best->center_ghz) : std::string("not-found")) << ','
        << (fp ? format_number(*fp) : std::string("not-found")) << '\n';
    if (!gap.found()) {
      ++missing;
      err << "no gap found at " << format_number(s.meta.field.b_mt) << " mT\n";
    }
  }
  m.options = {{"prominence_db", a.prominence_db},
               {"baseline_window_ghz", a.baseline_window_ghz},
               {"drop_db", a.drop_db}};
  const auto dir = output_dir(g);
  write_file(dir / "extract.csv", csv.str(), m);
  write_manifest(g, dir, m);
  out << "extracted " << spectra.size() - static_cast<std::size_t>(missing) << " of " << spectra.size()
      << " gap frequencies\n";
  return kExitOk;
}

// --- fit -----------------------------------------------------------------

struct FitArgs {
  std::string recipe;
  std::string data;
  std::optional<double> bc_mt;
  std::optional<double> tc_k;
  bool fit_tc = false;
};

FgDataset single_dataset(const fs::path& path, FieldAxis axis) {
  auto sets = read_fg_csv(path);
  if (sets.empty()) throw UsageError("no usable rows in " + path.string());
  FgDataset merged;
  merged.axis = axis;
  for (auto& s : sets) merged.rows.insert(merged.rows.end(), s.rows.begin(), s.rows.end());
  std::sort(merged.rows.begin(), merged.rows.end(), [](const FgRow& x, const FgRow& y) { return x.b_mt < y.b_mt; });
  return merged;
}

int cmd_fit(const Globals& g, const FitArgs& a, std::ostream& out) {
  Manifest m{.command = "fit"};
  const auto path = existing_input(a.data, m);
  const auto device = resolve_device(g.device);
  std::string text;
  if (a.recipe == "par1") {
    const auto data = single_dataset(path, FieldAxis::Par1);
    text = fit_result_to_json(
        fit_bandgap_par1(data, device, parse_gap_model(g.gap_model), a.bc_mt.value_or(device.bc_par_mt)));
  } else if (a.recipe == "gl-vs-ag") {
    const auto data = single_dataset(path, FieldAxis::Par1);
    text = model_comparison_to_json(model_comparison_gl_vs_ag(data, device, a.bc_mt.value_or(device.bc_par_mt)));
  } else if (a.recipe == "perp") {
    const auto sets = read_fg_csv(path);
    const FgDataset* up = nullptr;
    const FgDataset* down = nullptr;
    for (const auto& s : sets) {
      if (s.direction == SweepDirection::Up) up = &s;
      if (s.direction == SweepDirection::Down) down = &s;
    }
    if (!up || !down) throw UsageError("perp fit needs a sweep column with both 'up' and 'down' rows");
    text = fit_result_to_json(fit_perp_hysteresis(*up, *down));
  } else if (a.recipe == "temperature") {
    const auto rows = read_temperature_csv(path);
    text = fit_result_to_json(fit_temperature(rows, a.tc_k.value_or(device.tc_k), a.fit_tc));
  } else {
    throw UsageError("unknown fit recipe '" + a.recipe + "' (expected par1|perp|temperature|gl-vs-ag)");
  }
  m.options = {{"recipe", a.recipe}, {"fit_tc", a.fit_tc}};
  if (a.bc_mt) m.options["bc_mt"] = *a.bc_mt;
  if (a.tc_k) m.options["tc_k"] = *a.tc_k;
  const auto dir = output_dir(g);
  write_file(dir / "fit.json", text, m);
  write_manifest(g, dir, m);
  out << text;
  return kExitOk;
}

// --- gain ----------------------------------------------------------------

struct GainArgs {
  std::string gain;
  std::string pump_on;
  std::string pump_off;
  std::string background = "max";
  std::optional<double> gap_lo_ghz;
  std::optional<double> gap_hi_ghz;
  double window_ghz = 0.5;
  std::string surface;
  bool optimize = false;
  std::optional<double> f_pump_ghz;
  std::optional<double> p_pump_dbm;
  std::optional<double> fg_ghz;
};

Spectrum first_spectrum(const fs::path& path) {
  auto spectra = read_spectra_csv(path);
  if (spectra.empty()) throw UsageError("no spectra in " + path.string());
  return spectra.front();
}

json metrics_json(const GainMetrics& metrics) { return json::parse(gain_metrics_to_json(metrics)); }

int cmd_gain(const Globals& g, const GainArgs& a, std::ostream& out) {
  Manifest m{.command = "gain"};
  m.options = {{"window_ghz", a.window_ghz}};
  std::string text;
  std::string file = "gain_metrics.json";

  if (!a.surface.empty()) {
    const auto path = existing_input(a.surface, m);
    if (!a.f_pump_ghz || !a.p_pump_dbm) throw UsageError("surface mode needs --f-pump-ghz and --p-pump-dbm");
    const auto table = GainSurfaceTable::from_csv(path, a.window_ghz);
    const PumpSetting start{*a.f_pump_ghz, *a.p_pump_dbm};
    json j;
    if (a.optimize) {
      std::optional<PumpSearchBox> box;
      if (a.fg_ghz) box = PumpSearchBox::around_gap(*a.fg_ghz);
      const auto r = optimize_pump(std::cref(table), start, box);
      j["best"] = {{"f_pump_ghz", r.best.f_pump_ghz}, {"p_pump_dbm", r.best.p_pump_dbm}};
      j["metrics"] = metrics_json(r.metrics);
      j["start_metrics"] = metrics_json(r.start_metrics);
      j["zero_improvement"] = r.zero_improvement;
      j["iterations"] = r.iterations;
      file = "pump_optimization.json";
      m.options["optimize"] = true;
      if (a.fg_ghz) m.options["fg_ghz"] = *a.fg_ghz;
    } else {
      j = metrics_json(table(start));
    }
    m.options["f_pump_ghz"] = start.f_pump_ghz;
    m.options["p_pump_dbm"] = start.p_pump_dbm;
    text = j.dump(2) + "\n";
  } else {
    Spectrum gain;
    if (!a.gain.empty()) {
      gain = first_spectrum(existing_input(a.gain, m));
    } else {
      if (a.pump_on.empty() || a.pump_off.empty()) {
        throw UsageError("gain needs --gain, --pump-on with --pump-off, or --surface");
      }
      const auto on = first_spectrum(existing_input(a.pump_on, m));
      const auto off_path = existing_input(a.pump_off, m);
      Spectrum background;
      if (a.background == "max") {
        background = background_from_max(read_spectra_csv(off_path));
      } else if (a.background == "interp") {
        if (!a.gap_lo_ghz || !a.gap_hi_ghz) throw UsageError("--background interp needs --gap-lo-ghz and --gap-hi-ghz");
        background = background_interp(first_spectrum(off_path), *a.gap_lo_ghz, *a.gap_hi_ghz);
        m.options["gap_lo_ghz"] = *a.gap_lo_ghz;
        m.options["gap_hi_ghz"] = *a.gap_hi_ghz;
      } else {
        throw UsageError("unknown background method '" + a.background + "' (expected max|interp)");
      }
      m.options["background"] = a.background;
      gain = gain_profile(on, background);
    }
    text = gain_metrics_to_json(smooth_and_metrics(gain, a.window_ghz));
  }
  const auto dir = output_dir(g);
  write_file(dir / file, text, m);
  write_manifest(g, dir, m);
  out << text;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photonic-crystal Josephson TWPA model: sweeps, spectra, extraction, fits, gain metrics", "twpa"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Globals g;
  app.add_option("--device", g.device, "preset name (twpa_a, twpa_b) or device JSON path")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--gap-model", g.gap_model, "ag-interp | ag-numeric | gl")
      ->check(CLI::IsMember({"ag-interp", "ag-numeric", "gl"}))
      ->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  SweepArgs sweep;
  auto* sc_sweep = app.add_subcommand("sweep", "band edges, plasma frequency and impedance versus field");
  sc_sweep->add_option("--axis", sweep.axis, "par1 | par2 | perp")->capture_default_str();
  sc_sweep->add_option("--b-from-mt", sweep.b_from, "first field")->required();
  sc_sweep->add_option("--b-to-mt", sweep.b_to, "last field")->required();
  sc_sweep->add_option("--steps", sweep.steps, "number of fields")->capture_default_str();

  SimulateArgs sim;
  auto* sc_sim = app.add_subcommand("simulate", "S21/S11 spectra of the full array");
  sc_sim->add_option("--axis", sim.axis, "par1 | par2 | perp")->capture_default_str();
  sc_sim->add_option("--b-mt", sim.b_mt, "field value(s)")->capture_default_str();
  sc_sim->add_option("--f-from-ghz", sim.f_from)->capture_default_str();
  sc_sim->add_option("--f-to-ghz", sim.f_to)->capture_default_str();
  sc_sim->add_option("--f-step-ghz", sim.f_step)->capture_default_str();
  sc_sim->add_option("--z0-ohm", sim.z0)->capture_default_str();

  ExtractArgs ext;
  auto* sc_ext = app.add_subcommand("extract", "gap and plasma frequencies from transmission spectra");
  sc_ext->add_option("--input", ext.input, "spectra CSV (field_mT,freq_GHz,s21_dB)")->required();
  sc_ext->add_option("--prominence-db", ext.prominence_db)->capture_default_str();
  sc_ext->add_option("--baseline-window-ghz", ext.baseline_window_ghz)->capture_default_str();
  sc_ext->add_option("--drop-db", ext.drop_db)->capture_default_str();

  FitArgs fit;
  auto* sc_fit = app.add_subcommand("fit", "least-squares fits of extracted gap data");
  sc_fit->add_option("recipe", fit.recipe, "par1 | perp | temperature | gl-vs-ag")
      ->required()
      ->check(CLI::IsMember({"par1", "perp", "temperature", "gl-vs-ag"}));
  sc_fit->add_option("--data", fit.data, "fg CSV or temperature CSV")->required();
  sc_fit->add_option("--bc-mt", fit.bc_mt, "in-plane critical field (default: device value)");
  sc_fit->add_option("--tc-k", fit.tc_k, "critical temperature (default: device value)");
  sc_fit->add_flag("--fit-tc", fit.fit_tc, "also fit the critical temperature");

  GainArgs gain;
  auto* sc_gain = app.add_subcommand("gain", "gain profile metrics and pump optimization");
  sc_gain->add_option("--gain", gain.gain, "gain spectrum CSV");
  sc_gain->add_option("--pump-on", gain.pump_on, "pump-on transmission CSV");
  sc_gain->add_option("--pump-off", gain.pump_off, "pump-off transmission CSV (one or more fields)");
  sc_gain->add_option("--background", gain.background, "max | interp")->capture_default_str();
  sc_gain->add_option("--gap-lo-ghz", gain.gap_lo_ghz);
  sc_gain->add_option("--gap-hi-ghz", gain.gap_hi_ghz);
  sc_gain->add_option("--window-ghz", gain.window_ghz)->capture_default_str();
  sc_gain->add_option("--surface", gain.surface, "gain surface CSV (f_pump_GHz,p_pump_dBm,freq_GHz,gain_dB)");
  sc_gain->add_flag("--optimize", gain.optimize, "search the surface for the best pump setting");
  sc_gain->add_option("--f-pump-ghz", gain.f_pump_ghz);
  sc_gain->add_option("--p-pump-dbm", gain.p_pump_dbm);
  sc_gain->add_option("--fg-ghz", gain.fg_ghz, "gap estimate; restricts f_pump to +-1 GHz around it");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'twpa --help' for usage\n";
    return kExitUsage;
  }

  if (g.threads > 0) omp_set_num_threads(g.threads);

  try {
    if (*sc_sweep) return cmd_sweep(g, sweep, out);
    if (*sc_sim) return cmd_simulate(g, sim, out);
    if (*sc_ext) return cmd_extract(g, ext, out, err);
    if (*sc_fit) return cmd_fit(g, fit, out);
    if (*sc_gain) return cmd_gain(g, gain, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const twpa::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace twpa::cli
