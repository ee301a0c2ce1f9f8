#include "twpa/transmission.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

using constants::pi;
using cplx = std::complex<double>;

std::vector<double> dispersion_roots(double fp_ghz, double eta, double beta, int n_p, double screening, double k) {
  const double big_g = 2.0 * pi / n_p;
  const double a = 1.0 / (screening * screening);
  const double p = k * k;
  const double q = (big_g - k) * (big_g - k);
  const double r = k * (big_g - k);
  const double e = 0.5 * eta;
  // det = [(a+p)x - p][(a+q)x - q] - e^2 [(a-r)x + r beta]^2 with x = (omega/omega_p)^2
  const double c2 = (a + p) * (a + q) - e * e * (a - r) * (a - r);
  const double c1 = -(p * (a + q) + q * (a + p)) - 2.0 * e * e * (a - r) * r * beta;
  const double c0 = p * q - e * e * r * r * beta * beta;

  std::vector<double> xs;
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc >= 0.0) {
    const double t = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    if (t != 0.0) {
      xs.push_back(t / c2);
      xs.push_back(c0 / t);
    } else {
      xs.push_back(0.0);
      xs.push_back(-c1 / c2);
    }
  }
  std::vector<double> out;
  for (double x : xs) {
    if (x >= -1e-15 && x < 1.0) out.push_back(fp_ghz * std::sqrt(std::max(0.0, x)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

BandStructure dispersion_bands(const DeviceModel& device, FieldPoint field, int k_points, GapModel gap_model) {
  if (k_points < 2) throw InvalidParameter("dispersion_bands: need at least 2 k points");
  device.validate();
  const double fp = device.zero_field_plasma_ghz() * std::sqrt(mean_suppression(device, field, gap_model));
  const double beta = effective_beta(device, field);
  const double ls = screening_length(device.circuit);
  const double half_g = pi / device.geometry.n_p;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  BandStructure bands;
  bands.k = linspace(0.0, half_g, k_points);
  for (double k : bands.k) {
    const auto roots = dispersion_roots(fp, device.geometry.eta, beta, device.geometry.n_p, ls, k);
    bands.lower_ghz.push_back(roots.size() > 0 ? roots[0] : nan);
    bands.upper_ghz.push_back(roots.size() > 1 ? roots[1] : nan);
  }
  return bands;
}

std::vector<double> frequency_grid(double from_ghz, double to_ghz, double step_ghz) {
  if (!(step_ghz > 0.0) || !(to_ghz > from_ghz) || !(from_ghz > 0.0)) {
    throw InvalidParameter("frequency grid: need 0 < from < to and step > 0");
  }
  const auto n = static_cast<int>(std::floor((to_ghz - from_ghz) / step_ghz + 1e-9)) + 1;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = from_ghz + step_ghz * i;
  return out;
}

namespace {

// SI element values for one modulation period under a given field.
struct CellTable {
  std::vector<double> inv_lj;  // 1/H, zero for a fully suppressed junction
  std::vector<double> cj;      // F
  std::vector<double> cg;      // F
  int n_j;
};

CellTable build_cells(const DeviceModel& device, FieldPoint field, GapModel gap_model) {
  const auto arrays = modulated_arrays(device);
  const auto factors = critical_current_factors(device, field, gap_model);
  CellTable t;
  t.n_j = device.geometry.n_j;
  for (std::size_t i = 0; i < arrays.lj_ph.size(); ++i) {
    t.inv_lj.push_back(factors[i] / (arrays.lj_ph[i] * units::pH));
    t.cj.push_back(arrays.cj_ff[i] * units::fF);
    t.cg.push_back(arrays.cg_ff[i] * units::fF);
  }
  return t;
}

struct PointResult {
  double log_abs_s21;  // natural log of |S21|
  double arg_s21;
  cplx s11;
};

// Chain product with each series element scaled by its admittance Y (so a pole Y = 0 stays finite)
// and the accumulated matrix renormalized every cell; the dropped scale is tracked in logs.
PointResult cascade_point(const CellTable& cells, double omega, double z0) {
  const auto np = cells.cg.size();
  cplx m00{1.0, 0.0}, m01{0.0, 0.0}, m10{0.0, 0.0}, m11{1.0, 0.0};
  double log_norm = 0.0;
  double log_abs_y = 0.0;
  cplx unit_y{1.0, 0.0};

  auto shunt = [&](std::size_t island) {
    const cplx yg{0.0, omega * cells.cg[island % np]};
    m00 += m01 * yg;
    m10 += m11 * yg;
  };

  for (int n = 0; n < cells.n_j; ++n) {
    const auto j = static_cast<std::size_t>(n) % np;
    shunt(static_cast<std::size_t>(n));
    const double b = omega * cells.cj[j] - cells.inv_lj[j] / omega;  // Y = i b
    const cplx y{0.0, b};
    const cplx n01 = m00 + m01 * y;
    const cplx n11 = m10 + m11 * y;
    m00 *= y;
    m10 *= y;
    m01 = n01;
    m11 = n11;
    if (b == 0.0) {
      log_abs_y = -std::numeric_limits<double>::infinity();
    } else {
      log_abs_y += std::log(std::abs(b));
      unit_y *= cplx{0.0, b > 0.0 ? 1.0 : -1.0};
    }
    const double scale = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
    m00 /= scale;
    m01 /= scale;
    m10 /= scale;
    m11 /= scale;
    log_norm += std::log(scale);
  }
  shunt(static_cast<std::size_t>(cells.n_j));

  const cplx den = m00 + m01 / z0 + m10 * z0 + m11;
  const cplx s11 = (m00 + m01 / z0 - m10 * z0 - m11) / den;
  const double log_s21 = std::log(2.0) - std::log(std::abs(den)) - log_norm + log_abs_y;
  return {log_s21, std::arg(unit_y) - std::arg(den), s11};
}

double to_db_floor(double log_abs) {
  const double db = 20.0 * log_abs / std::log(10.0);
  return std::isfinite(db) ? std::max(db, kNoiseFloorDb) : kNoiseFloorDb;
}

}  // namespace

CascadeResult abcd_cascade(const DeviceModel& device, FieldPoint field, std::span<const double> freqs_ghz,
                           double z0_ohm, GapModel gap_model) {
  if (!(z0_ohm > 0.0)) throw InvalidParameter("reference impedance must be positive");
  device.validate();
  const CellTable cells = build_cells(device, field, gap_model);
  const std::size_t n = freqs_ghz.size();

  CascadeResult out;
  out.s21.freqs_ghz.assign(freqs_ghz.begin(), freqs_ghz.end());
  out.s21.values_db.resize(n);
  out.s11.freqs_ghz = out.s21.freqs_ghz;
  out.s11.values_db.resize(n);
  out.s21_complex.resize(n);
  out.s11_complex.resize(n);

  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double omega = 2.0 * pi * freqs_ghz[idx] * units::GHz;
    const PointResult r = cascade_point(cells, omega, z0_ohm);
    out.s21_complex[idx] = std::polar(std::exp(r.log_abs_s21), r.arg_s21);
    out.s11_complex[idx] = r.s11;
    out.s21.values_db[idx] = to_db_floor(r.log_abs_s21);
    out.s11.values_db[idx] = to_db_floor(std::log(std::abs(r.s11)));
  }

  out.s21.meta = {field, device.name, SpectrumKind::Simulated};
  out.s11.meta = out.s21.meta;
  out.s21.validate();
  return out;
}

namespace reference {

std::vector<cplx> abcd_s21_serial(const DeviceModel& device, FieldPoint field, std::span<const double> freqs_ghz,
                                  double z0_ohm, GapModel gap_model) {
  device.validate();
  const auto& g = device.geometry;
  const auto factors = critical_current_factors(device, field, gap_model);
  std::vector<cplx> out;
  out.reserve(freqs_ghz.size());
  for (double f : freqs_ghz) {
    const double omega = 2.0 * pi * f * units::GHz;
    std::array<cplx, 4> m{1.0, 0.0, 0.0, 1.0};
    auto multiply = [&m](const std::array<cplx, 4>& e) {
      m = {m[0] * e[0] + m[1] * e[2], m[0] * e[1] + m[1] * e[3], m[2] * e[0] + m[3] * e[2],
           m[2] * e[1] + m[3] * e[3]};
    };
    auto island_cg = [&](int n) {
      return device.circuit.cg_ff * units::fF *
             (1.0 + 0.5 * g.eta * (std::cos(g.modulation_wavevector() * (n + 0.5)) +
                                   std::cos(g.modulation_wavevector() * (n - 0.5))));
    };
    for (int n = 0; n < g.n_j; ++n) {
      multiply({1.0, 0.0, cplx{0.0, omega * island_cg(n)}, 1.0});
      const double mod = 1.0 + g.eta * std::cos(g.modulation_wavevector() * (n + 0.5));
      const double lj = device.circuit.lj_ph * units::pH / (mod * factors[static_cast<std::size_t>(n % g.n_p)]);
      const double cj = device.circuit.cj_ff * units::fF * mod;
      const cplx zl{0.0, omega * lj};
      const cplx zc{0.0, -1.0 / (omega * cj)};
      multiply({1.0, zl * zc / (zl + zc), 0.0, 1.0});
    }
    multiply({1.0, 0.0, cplx{0.0, omega * island_cg(g.n_j)}, 1.0});
    out.push_back(2.0 / (m[0] + m[1] / z0_ohm + m[2] * z0_ohm + m[3]));
  }
  return out;
}

}  // namespace reference

}  // namespace twpa
