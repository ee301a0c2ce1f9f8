#include "twpa/fraunhofer.hpp"

#include <cmath>
#include <string>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"
#include "twpa/roots.hpp"

namespace twpa {

using constants::pi;

void CurrentProfile::validate() const {
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw InvalidParameter("chi must be non-negative");
}

void JunctionGeometry::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidParameter("modulation amplitude eta must lie in (0, 1)");
  if (n_p < 2) throw InvalidParameter("modulation period n_p must be at least 2");
  if (n_j < n_p) throw InvalidParameter("junction count n_j must be at least n_p");
  if (!(w_um > 0.0) || !(h_um > 0.0) || !(l_nm > 0.0)) {
    throw InvalidParameter("junction dimensions w, h, l must be positive");
  }
}

double JunctionGeometry::modulation_wavevector() const { return 2.0 * pi / n_p; }

double current_density(double x, double chi) {
  if (!(std::abs(x) <= 0.5)) throw DomainError("normalized position must satisfy |x| <= 1/2");
  if (!(chi >= 0.0)) throw InvalidParameter("chi must be non-negative");
  // cosh(2 x chi)/cosh(chi) = exp(chi (2|x| - 1)) (1 + exp(-4|x| chi)) / (1 + exp(-2 chi)), overflow-free
  const double ax = std::abs(x);
  return std::exp(chi * (2.0 * ax - 1.0)) * (1.0 + std::exp(-4.0 * ax * chi)) / (1.0 + std::exp(-2.0 * chi));
}

double fraunhofer_factor(double y, double chi) {
  if (chi < kUniformChiThreshold) return y == 0.0 ? 1.0 : std::sin(y) / y;
  const double c2 = chi * chi;
  return c2 / (c2 + y * y) * (y * std::sin(y) / (chi * std::tanh(chi)) + std::cos(y));
}

double beta_factor(double y, double chi) {
  if (y == 0.0) return 1.0;
  if (chi < kUniformChiThreshold) {
    const double s = std::sin(y);
    if (s == 0.0 || std::abs(s) < 1e-15 * std::abs(y)) throw DomainError("beta_factor: pole of y cot y");
    return y * std::cos(y) / s;
  }
  // F = P(y) Q(y) with P = chi^2/(chi^2 + y^2), Q = y sin y / a + cos y, a = chi tanh chi.
  const double a = chi * std::tanh(chi);
  const double s = std::sin(y);
  const double c = std::cos(y);
  const double q = y * s / a + c;
  const double dq = (s + y * c) / a - s;
  if (std::abs(q) < 1e-15 * (std::abs(y * s / a) + std::abs(c))) {
    throw DomainError("beta_factor: evaluated at a zero of the Fraunhofer factor");
  }
  return 1.0 - 2.0 * y * y / (chi * chi + y * y) + y * dq / q;
}

double fraunhofer_zero(int k, double chi) {
  if (k < 1) throw InvalidParameter("fraunhofer_zero: k must be >= 1");
  if (chi < kUniformChiThreshold) return k * pi;
  // Zeros of y sin y / a + cos y lie in (k pi - pi/2, k pi).
  const double a = chi * std::tanh(chi);
  auto q = [a](double y) { return y * std::sin(y) / a + std::cos(y); };
  return detail::bracketed_root(q, k * pi - pi / 2.0, k * pi, 1e-15);
}

double flux_field(const JunctionGeometry& geometry, FieldAxis axis) {
  geometry.validate();
  const double l = geometry.l_nm * units::nm;
  switch (axis) {
    case FieldAxis::Par1: return constants::flux_quantum / (l * geometry.w_um * units::um) / units::mT;
    case FieldAxis::Par2: return constants::flux_quantum / (l * geometry.h_um * units::um) / units::mT;
    case FieldAxis::Perp: break;
  }
  throw InvalidParameter("no Fraunhofer flux field for the perpendicular axis");
}

std::vector<double> flux_field_per_junction(const JunctionGeometry& geometry, double mean_par2_mt) {
  geometry.validate();
  if (!(mean_par2_mt > 0.0)) throw InvalidParameter("mean flux field must be positive");
  const double g = geometry.modulation_wavevector();
  std::vector<double> out(static_cast<std::size_t>(geometry.n_p));
  for (int n = 0; n < geometry.n_p; ++n) {
    out[static_cast<std::size_t>(n)] = mean_par2_mt / (1.0 + geometry.eta * std::cos(g * (n + 0.5)));
  }
  return out;
}

}  // namespace twpa
