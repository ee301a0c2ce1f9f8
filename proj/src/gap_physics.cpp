#include "twpa/gap_physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"
#include "twpa/roots.hpp"

namespace twpa {

namespace {

using constants::pi;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(std::string(what) + " must be positive and finite");
  }
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("pair-breaking parameter alpha must lie in [0, 1]");
  }
}

// ln(Delta/Delta0) as a function of zeta = Gamma/Delta, T = 0.
double ag_log_gap(double zeta) {
  if (zeta <= 1.0) return -pi * zeta / 4.0;
  return -std::acosh(zeta) + 0.5 * (std::sqrt(1.0 - 1.0 / (zeta * zeta)) - zeta * std::asin(1.0 / zeta));
}

}  // namespace

GapModel parse_gap_model(std::string_view name) {
  if (name == "ag-interp") return GapModel::AgInterp;
  if (name == "ag-numeric") return GapModel::AgNumeric;
  if (name == "gl") return GapModel::GL;
  throw InvalidParameter("unknown gap model '" + std::string(name) + "' (expected ag-interp|ag-numeric|gl)");
}

std::string_view to_string(GapModel model) {
  switch (model) {
    case GapModel::AgNumeric: return "ag-numeric";
    case GapModel::AgInterp: return "ag-interp";
    case GapModel::GL: return "gl";
  }
  return "?";
}

void FilmParams::validate() const {
  require_positive(thickness_nm, "film thickness");
  require_positive(mean_free_path_nm, "mean free path");
  require_positive(diffusion_m2_per_s, "diffusion constant");
  require_positive(gap0_ueV, "zero-field gap");
}

double pair_breaking_alpha(double b_mt, double bc_mt) {
  require_positive(bc_mt, "critical field");
  if (!(b_mt >= 0.0)) throw InvalidParameter("field magnitude must be non-negative");
  const double r = b_mt / bc_mt;
  return r * r;
}

double ag_gap_numeric(double alpha) {
  require_alpha(alpha);
  if (alpha == 0.0) return 1.0;
  if (alpha == 1.0) return 0.0;
  // g(r) > 0 at r = 1 and -> ln(alpha) < 0 as r -> 0; monotone in between.
  auto g = [alpha](double r) { return std::log(r) - ag_log_gap(alpha / (2.0 * r)); };
  double lo = 1e-12;
  if (g(lo) >= 0.0) return lo;  // alpha within ~1e-24 of critical
  return detail::bracketed_root(g, lo, 1.0, 1e-10);
}

double ag_gap_interp(double alpha) {
  require_alpha(alpha);
  constexpr double gamma = (12.0 - pi) / (4.0 - pi);
  const double inner = 1.0 - (pi / 4.0) * alpha - (1.0 - pi / 4.0) * std::pow(alpha, gamma);
  return std::sqrt(std::max(0.0, inner));
}

double gl_effective_critical_field(double bc_mt) {
  require_positive(bc_mt, "critical field");
  return 2.0 * bc_mt / std::sqrt(pi);
}

double gl_gap(double b_mt, double bc_mt) {
  const double bc_eff = gl_effective_critical_field(bc_mt);
  if (!(b_mt >= 0.0)) throw InvalidParameter("field magnitude must be non-negative");
  if (b_mt >= bc_eff) return 0.0;
  const double r = b_mt / bc_eff;
  return std::sqrt(1.0 - r * r);
}

double gap_ratio(GapModel model, double b_mt, double bc_mt) {
  const double b = std::abs(b_mt);
  if (model == GapModel::GL) return gl_gap(b, bc_mt);
  const double alpha = pair_breaking_alpha(b, bc_mt);
  if (alpha >= 1.0) return 0.0;
  return model == GapModel::AgNumeric ? ag_gap_numeric(alpha) : ag_gap_interp(alpha);
}

double gap_vs_temperature(double t_k, double tc_k) {
  require_positive(tc_k, "critical temperature");
  require_positive(t_k, "temperature");
  if (t_k >= tc_k) return 0.0;
  return std::tanh(1.74 * std::sqrt(tc_k / t_k - 1.0));
}

double thin_film_f(double ratio) {
  if (!(ratio >= 0.0)) throw InvalidParameter("mean-free-path ratio must be non-negative");
  if (ratio == 0.0) return 1.0;
  return std::min(1.0, 3.0 / (4.0 * ratio));
}

double zeeman_orbital_c(const FilmParams& film) {
  film.validate();
  using namespace constants;
  const double t = film.thickness_nm * units::nm;
  const double et = elementary_charge * t;
  const double gap0 = film.gap0_ueV * units::ueV;
  const double f = thin_film_f(film.mean_free_path_nm / film.thickness_nm);
  return film.diffusion_m2_per_s * et * et * gap0 * f / (6.0 * hbar * bohr_magneton * bohr_magneton);
}

double coherence_length_from_bcperp(double bc_perp_mt) {
  require_positive(bc_perp_mt, "perpendicular critical field");
  const double xi = std::sqrt(constants::flux_quantum / (2.0 * pi * bc_perp_mt * units::mT));
  return xi / units::nm;
}

double thickness_from_critical_ratio(double bc_perp_mt, double bc_par_mt, double xi_nm) {
  require_positive(bc_perp_mt, "perpendicular critical field");
  require_positive(bc_par_mt, "parallel critical field");
  require_positive(xi_nm, "coherence length");
  return 2.0 * std::sqrt(3.0) * xi_nm * (bc_perp_mt / bc_par_mt);
}

double vortex_stability_field(double width_um, double xi_nm) {
  require_positive(width_um, "strip width");
  require_positive(xi_nm, "coherence length");
  const double w = width_um * units::um;
  const double arg = 2.0 * w / (pi * xi_nm * units::nm);
  if (arg <= 1.0) throw DomainError("2w/(pi xi) <= 1: vortex is never stable in this strip");
  return 2.0 * constants::flux_quantum / (pi * w * w) * std::log(arg) / units::mT;
}

}  // namespace twpa
