#pragma once

#include <string_view>

namespace twpa {

/// Field suppression model for the superconducting gap.
enum class GapModel {
  AgNumeric,  ///< zero-temperature Abrikosov-Gorkov equation solved numerically
  AgInterp,   ///< closed-form interpolation of the AG result
  GL,         ///< Ginzburg-Landau-like square-root form with the effective critical field
};

GapModel parse_gap_model(std::string_view name);
std::string_view to_string(GapModel model);

/// Thin-film parameters entering the Zeeman-vs-orbital comparison.
struct FilmParams {
  double thickness_nm;
  double mean_free_path_nm;
  double diffusion_m2_per_s;
  double gap0_ueV;

  void validate() const;
};

/// alpha = (B / Bc)^2. Not clamped; values above 1 are the caller's business.
double pair_breaking_alpha(double b_mt, double bc_mt);

/// Delta/Delta0 from the T=0 AG gap equation, alpha in [0, 1].
double ag_gap_numeric(double alpha);

/// Delta/Delta0 = sqrt(1 - (pi/4) alpha - (1 - pi/4) alpha^gamma), gamma = (12 - pi)/(4 - pi).
double ag_gap_interp(double alpha);

/// Delta/Delta0 = sqrt(1 - (B / Bc_eff)^2), Bc_eff = 2 Bc / sqrt(pi). Zero at and beyond Bc_eff.
double gl_gap(double b_mt, double bc_mt);

/// Effective GL critical field 2 Bc / sqrt(pi).
double gl_effective_critical_field(double bc_mt);

/// Gap ratio at field |b_mt| under the chosen model. Fields at or beyond Bc give 0.
double gap_ratio(GapModel model, double b_mt, double bc_mt);

/// BCS-like temperature dependence tanh(1.74 sqrt(Tc/T - 1)); 0 for T >= Tc.
double gap_vs_temperature(double t_k, double tc_k);

/// Crossover function of the mean-free-path to thickness ratio, min(1, 3/(4x)).
double thin_film_f(double ratio);

/// Dimensionless Zeeman-vs-orbital parameter c; orbital suppression dominates for c > 1.
double zeeman_orbital_c(const FilmParams& film);

/// Coherence length (nm) from the perpendicular critical field, Bc_perp = Phi0 / (2 pi xi^2).
double coherence_length_from_bcperp(double bc_perp_mt);

/// Film thickness (nm) from Bc_perp / Bc_par = t / (2 sqrt(3) xi).
double thickness_from_critical_ratio(double bc_perp_mt, double bc_par_mt, double xi_nm);

/// Field (mT) above which a vortex is stable in a strip of width w: (2 Phi0 / pi w^2) ln(2w / pi xi).
double vortex_stability_field(double width_um, double xi_nm);

}  // namespace twpa
