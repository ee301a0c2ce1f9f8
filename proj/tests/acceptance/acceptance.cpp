// One PASS/FAIL line per criterion; nonzero exit if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "twpa/array_model.hpp"
#include "twpa/constants.hpp"
#include "twpa/features.hpp"
#include "twpa/fitting.hpp"
#include "twpa/gain_metrics.hpp"
#include "twpa/gap_physics.hpp"
#include "twpa/transmission.hpp"

using namespace twpa;

namespace {

namespace tol {
constexpr double center_ghz = 0.1;
constexpr double impedance_ohm = 0.5;
constexpr double beta_c = 0.002;
constexpr double interp_rel = 0.02;
constexpr double gl_rel = 0.02;
constexpr double geometry_ratio_exact = 1e-12;
constexpr double fitted_ratio_rel = 0.05;
constexpr double closing_mt = 0.01;
constexpr double dispersion_rel = 1e-9;
constexpr double dip_center_rel = 0.01;
constexpr double lossless_abs = 1e-9;
constexpr double suppression_db = 20.0;
constexpr double breakdown_db = 3.0;
constexpr double par1_rel = 0.01;
constexpr double perp_rel = 0.02;
constexpr double temperature_rel = 0.001;
constexpr double xi_nm = 2.0;
constexpr double thickness_nm = 1.0;
constexpr double vortex_mt = 0.1;
constexpr double temperature_ratio_min = 0.998;
constexpr double gain_bw_rel = 0.10;
constexpr double pump_f_ghz = 0.010;
constexpr double pump_p_db = 0.1;
constexpr double residual_dip_db = 1.0;
}  // namespace tol

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double value, double target, double abs_tol) { return std::abs(value - target) <= abs_tol; }

double median_between(const Spectrum& s, double lo, double hi) {
  std::vector<double> v;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.freqs_ghz[i] >= lo && s.freqs_ghz[i] <= hi) v.push_back(s.values_db[i]);
  }
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

void zero_field_golden() {
  const FieldPoint zero{FieldAxis::Par1, 0.0};
  const double ca = bandgap_center(preset_twpa_a(), zero, 1);
  const double cb = bandgap_center(preset_twpa_b(), zero, 1);
  const double za = impedance(preset_twpa_a(), zero);
  report(1, within(ca, 8.7, tol::center_ghz) && within(cb, 7.2, tol::center_ghz) && within(za, 50.0, tol::impedance_ohm),
         fmt("center A %.4f GHz, center B %.4f GHz, Z A %.3f ohm", ca, cb, za));
}

void critical_beta() {
  const double bc = beta_critical(preset_twpa_a());
  report(2, within(bc, -0.716, tol::beta_c), fmt("beta_c = %.6f", bc));
}

void gap_models() {
  double interp = 0.0, gl_low = 0.0, gl_high = 0.0;
  const double bc = 236.0;
  for (int i = 0; i < 1000; ++i) {
    const double alpha = i / 999.0;
    const double num = ag_gap_numeric(alpha);
    if (num <= 0.0) continue;
    if (num > 0.05) interp = std::max(interp, std::abs(ag_gap_interp(alpha) - num) / num);
    const double gl = std::abs(gl_gap(bc * std::sqrt(alpha), bc) - num) / num;
    if (alpha <= 0.7) gl_low = std::max(gl_low, gl);
    if (alpha > 0.85) gl_high = std::max(gl_high, gl);
  }
  report(3, interp <= tol::interp_rel && gl_low <= tol::gl_rel && gl_high > tol::gl_rel,
         fmt("interp max dev %.4f, GL dev %.4f (alpha<=0.7), %.3f (alpha>0.85)", interp, gl_low, gl_high));
}

void geometry_consistency() {
  const auto a = preset_twpa_a();
  const double ratio = flux_field(a.geometry, FieldAxis::Par1) / flux_field(a.geometry, FieldAxis::Par2);
  const double expected = a.geometry.h_um / a.geometry.w_um;
  const double fitted = a.flux_field_par1_mt() / a.flux_field_par2_mt();
  const bool exact = std::abs(ratio / expected - 1.0) <= tol::geometry_ratio_exact;
  const bool fitted_ok = std::abs(fitted / ratio - 1.0) <= tol::fitted_ratio_rel;
  report(4, exact && fitted_ok,
         fmt("geometric ratio %.6f (h/w %.6f), fitted ratio %.4f differs by %.2f%%", ratio, expected, fitted,
             100.0 * std::abs(fitted / ratio - 1.0)));
}

void closing() {
  const auto cf = closing_fields(preset_twpa_a(), 4);
  bool ok = cf[0].exact_mt && within(*cf[0].exact_mt, 2.79, tol::closing_mt) &&
            within(cf[0].approximate_mt, 2.94, tol::closing_mt);
  double prev = INFINITY;
  for (const auto& c : cf) {
    if (!c.exact_mt) {
      ok = false;
      continue;
    }
    const double gap = std::abs(*c.exact_mt - c.approximate_mt);
    ok = ok && gap < prev;
    prev = gap;
  }
  report(5, ok,
         fmt("n=0 exact %.4f mT, approx %.4f mT; |exact-approx| n=0..3: %.4f %.4f %.5f %.5f", cf[0].exact_mt.value_or(NAN),
             cf[0].approximate_mt, std::abs(cf[0].exact_mt.value_or(NAN) - cf[0].approximate_mt),
             std::abs(cf[1].exact_mt.value_or(NAN) - cf[1].approximate_mt),
             std::abs(cf[2].exact_mt.value_or(NAN) - cf[2].approximate_mt),
             std::abs(cf[3].exact_mt.value_or(NAN) - cf[3].approximate_mt)));
}

void dispersion_equivalence() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> fp(5.0, 40.0), eta(0.01, 0.3), cj(100.0, 1000.0), cg(10.0, 100.0);
  std::uniform_int_distribution<int> np(10, 60);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double f = fp(rng), e = eta(rng);
    const int n = np(rng);
    const double ls = screening_length({.lj_ph = 100.0, .cj_ff = cj(rng), .cg_ff = cg(rng)});
    const auto roots = dispersion_roots(f, e, 1.0, n, ls, constants::pi / n);
    const auto edges = bandgap_edges_closed_form(f, e, 1.0, n, ls);
    if (roots.size() != 2) {
      worst = INFINITY;
      break;
    }
    worst = std::max({worst, std::abs(roots[0] / edges.lower_ghz - 1.0), std::abs(roots[1] / edges.upper_ghz - 1.0)});
  }
  report(6, worst <= tol::dispersion_rel, fmt("max relative edge difference over 100 devices %.2e", worst));
}

void simulator() {
  const auto a = preset_twpa_a();
  const FieldPoint zero{FieldAxis::Par1, 0.0};
  const auto freqs = frequency_grid(1.0, 30.0, 0.005);
  const auto r = abcd_cascade(a, zero, freqs);

  const auto gap = extract_gap(r.s21);
  const double analytic = bandgap_center(a, zero, 1);
  const double center_err = gap.found() ? std::abs(gap.best->center_ghz / analytic - 1.0) : INFINITY;

  double loss = 0.0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    loss = std::max(loss, std::abs(std::norm(r.s11_complex[i]) + std::norm(r.s21_complex[i]) - 1.0));
  }

  const double fp = plasma_frequency(a, zero);
  const double suppression = median_between(r.s21, 1.0, 6.0) - median_between(r.s21, 1.05 * fp, 30.0);

  const auto low = frequency_grid(1.0, 6.0, 0.02);
  const double b_min = fraunhofer_zero(1, a.chi_for(FieldAxis::Par1)) * a.flux_field_par1_mt() / constants::pi;
  const double s11_min = median_between(abcd_cascade(a, {FieldAxis::Par1, b_min}, low).s11, 1.0, 6.0);
  const double s21_zero = median_between(abcd_cascade(a, zero, low).s21, 1.0, 6.0);
  const double breakdown = std::abs(s11_min - s21_zero);

  report(7,
         center_err <= tol::dip_center_rel && loss <= tol::lossless_abs && suppression >= tol::suppression_db &&
             breakdown <= tol::breakdown_db,
         fmt("dip %.4f vs %.4f GHz (%.3f%%), energy error %.1e, suppression %.1f dB, |S11| at %.1f mT vs |S21| at 0: "
             "%.2f dB apart",
             gap.found() ? gap.best->center_ghz : NAN, analytic, 100.0 * center_err, loss, suppression, b_min,
             breakdown));
}

void fits() {
  const auto a = preset_twpa_a();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n01;

  FgDataset par1;
  for (int i = 0; i <= 460; ++i) {
    const double b = 230.0 * i / 460;
    const double fg = par1_gap_center(a, 23.0, 0.668, 107.8, b, GapModel::AgInterp, 236.0);
    if (fg < 0.5) continue;
    par1.rows.push_back({b, fg * (1.0 + 0.01 * n01(rng))});
  }
  const auto p = fit_bandgap_par1(par1, a, GapModel::AgInterp, 236.0);
  const double e_fp = std::abs(p.param("fp0_ghz") / 23.0 - 1.0);
  const double e_chi = std::abs(p.param("chi") / 0.668 - 1.0);
  const double e_bphi = std::abs(p.param("b_phi1_mt") / 107.8 - 1.0);

  FgDataset up, down;
  for (int i = 0; i <= 40; ++i) {
    const double b = -8.0 + 0.4 * i;
    up.rows.push_back({b, perp_bandgap_model(b, 8.7, 1.2, 10.3) * (1.0 + 0.002 * n01(rng))});
    down.rows.push_back({-b, perp_bandgap_model(-b, 8.7, -1.2, 10.3) * (1.0 + 0.002 * n01(rng))});
  }
  const double diff = fit_perp_hysteresis(up, down).param("offset_difference_mt");

  std::vector<TemperatureRow> temps;
  for (int i = 0; i < 30; ++i) {
    const double t = 0.01 + 1.2 * i / 29;
    temps.push_back({t, 8.7 * std::sqrt(gap_vs_temperature(t, 1.27)) * (1.0 + 1e-4 * n01(rng))});
  }
  const double fg0 = fit_temperature(temps, 1.27).param("fg0_ghz");

  report(8,
         e_fp <= tol::par1_rel && e_chi <= tol::par1_rel && e_bphi <= tol::par1_rel &&
             std::abs(diff / 2.4 - 1.0) <= tol::perp_rel && std::abs(fg0 / 8.7 - 1.0) <= tol::temperature_rel,
         fmt("par1 {%.4f GHz, %.4f, %.3f mT}; offset difference %.4f mT; fg0 %.5f GHz", p.param("fp0_ghz"),
             p.param("chi"), p.param("b_phi1_mt"), diff, fg0));

  const char* dir = std::getenv("TWPA_ARCHIVE_DIR");
  const auto archived = dir && *dir ? std::filesystem::path(dir) / "par1_fg.csv" : std::filesystem::path();
  if (archived.empty() || !std::filesystem::exists(archived)) {
    std::printf("SKIP criterion 8 (archived dataset): TWPA_ARCHIVE_DIR/par1_fg.csv not available\n");
  } else {
    const auto sets = read_fg_csv(archived);
    const auto r = fit_bandgap_par1(sets.front(), a, GapModel::AgInterp, 236.0);
    const bool ok = std::abs(r.param("fp0_ghz") / 23.0 - 1.0) <= 0.02 && std::abs(r.param("chi") / 0.668 - 1.0) <= 0.05 &&
                    std::abs(r.param("b_phi1_mt") / 107.8 - 1.0) <= 0.02;
    report(8, ok,
           fmt("archived data fit {%.3f GHz, %.3f, %.2f mT}", r.param("fp0_ghz"), r.param("chi"), r.param("b_phi1_mt")));
  }
}

void derived_physics() {
  const double xi = coherence_length_from_bcperp(10.3);
  const double t = thickness_from_critical_ratio(10.3, 236.0, 180.0);
  const double bl = vortex_stability_field(0.7, 180.0);
  report(9, within(xi, 180.0, tol::xi_nm) && within(t, 27.0, tol::thickness_nm) && within(bl, 2.4, tol::vortex_mt),
         fmt("xi %.2f nm, t %.2f nm, B_L %.3f mT", xi, t, bl));
}

void temperature() {
  const double ratio = std::sqrt(gap_vs_temperature(0.3, 1.27) / gap_vs_temperature(0.01, 1.27));
  report(10, ratio >= tol::temperature_ratio_min, fmt("fg(0.3 K)/fg(10 mK) = %.6f", ratio));
}

void gain_pipeline() {
  Spectrum bump;
  for (int i = 0; i <= 6000; ++i) {
    const double f = 3.0 + 0.001 * i;
    bump.freqs_ghz.push_back(f);
    bump.values_db.push_back(20.0 * std::exp(-0.5 * std::pow((f - 6.0) / 0.3, 2)));
  }
  // boxcar-smoothed Gaussian evaluated in closed form with erf
  const double oracle_bw = 0.4085095309254658;
  const double bw = smooth_and_metrics(bump, 0.5).bw_3db_ghz;
  const bool bw_ok = std::abs(bw / oracle_bw - 1.0) <= tol::gain_bw_rel;

  const GainSurface surface = [](const PumpSetting& s) {
    GainMetrics m;
    m.max_smooth_gain_db = 25.0 - 4.0 * std::pow(s.f_pump_ghz - 8.2, 2) - 0.5 * std::pow(s.p_pump_dbm + 2.0, 2);
    return m;
  };
  const auto opt = optimize_pump(surface, {7.8, 0.0}, PumpSearchBox::around_gap(8.0));
  const bool opt_ok = std::abs(opt.best.f_pump_ghz - 8.2) <= tol::pump_f_ghz &&
                      std::abs(opt.best.p_pump_dbm + 2.0) <= tol::pump_p_db;

  const auto a = preset_twpa_a();
  const auto freqs = frequency_grid(4.0, 12.0, 0.005);
  std::vector<Spectrum> spectra;
  for (double b : {0.0, 40.0, 70.0}) spectra.push_back(abcd_cascade(a, {FieldAxis::Par1, b}, freqs).s21);
  const auto bg = background_from_max(spectra);
  const auto baseline = rolling_median(bg.freqs_ghz, bg.values_db, 2.0);
  double residual = 0.0;
  for (std::size_t i = 0; i < bg.size(); ++i) residual = std::max(residual, baseline[i] - bg.values_db[i]);

  report(11, bw_ok && opt_ok && residual <= tol::residual_dip_db,
         fmt("bandwidth %.4f vs %.4f GHz; pump optimum (%.4f GHz, %.3f dBm); background residual dip %.3f dB", bw,
             oracle_bw, opt.best.f_pump_ghz, opt.best.p_pump_dbm, residual));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks{zero_field_golden, critical_beta,  gap_models,   geometry_consistency,
                                                  closing,           dispersion_equivalence, simulator, fits,
                                                  derived_physics,   temperature,    gain_pipeline};
  for (const auto& check : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      std::printf("FAIL (exception): %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
