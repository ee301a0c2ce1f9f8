#include "twpa/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"
#include "twpa/roots.hpp"

namespace twpa {

using constants::pi;

double junction_modulation(const JunctionGeometry& geometry, int n) {
  return std::cos(geometry.modulation_wavevector() * (n + 0.5));
}

ModulatedArrays modulated_arrays(const DeviceModel& device) {
  device.validate();
  const auto& g = device.geometry;
  const auto np = static_cast<std::size_t>(g.n_p);
  ModulatedArrays out{std::vector<double>(np), std::vector<double>(np), std::vector<double>(np)};
  for (int n = 0; n < g.n_p; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double m = 1.0 + g.eta * junction_modulation(g, n);
    out.lj_ph[i] = device.circuit.lj_ph / m;
    out.cj_ff[i] = device.circuit.cj_ff * m;
    out.cg_ff[i] = device.circuit.cg_ff *
                   (1.0 + 0.5 * g.eta * (junction_modulation(g, n) + junction_modulation(g, n - 1)));
  }
  return out;
}

namespace {

double perp_factor(const DeviceModel& device, double b_mt) {
  const double r = b_mt / device.bc_perp_mt;
  return std::max(0.0, 1.0 - r * r);
}

}  // namespace

std::vector<double> critical_current_factors(const DeviceModel& device, FieldPoint field, GapModel gap_model) {
  device.validate();
  const double b = std::abs(field.b_mt);
  const auto np = static_cast<std::size_t>(device.geometry.n_p);
  switch (field.axis) {
    case FieldAxis::Par1: {
      const double f = std::abs(fraunhofer_factor(pi * b / device.flux_field_par1_mt(), device.chi_for(field.axis)));
      return std::vector<double>(np, f * gap_ratio(gap_model, b, device.bc_par_mt));
    }
    case FieldAxis::Par2: {
      const double gap = gap_ratio(gap_model, b, device.bc_par_mt);
      const double chi = device.chi_for(field.axis);
      auto per_junction = flux_field_per_junction(device.geometry, device.flux_field_par2_mt());
      for (double& v : per_junction) v = std::abs(fraunhofer_factor(pi * b / v, chi)) * gap;
      return per_junction;
    }
    case FieldAxis::Perp:
      return std::vector<double>(np, perp_factor(device, b));
  }
  return {};
}

double mean_suppression(const DeviceModel& device, FieldPoint field, GapModel gap_model) {
  const double b = std::abs(field.b_mt);
  switch (field.axis) {
    case FieldAxis::Par1:
      return std::abs(fraunhofer_factor(pi * b / device.flux_field_par1_mt(), device.chi_for(field.axis))) *
             gap_ratio(gap_model, b, device.bc_par_mt);
    case FieldAxis::Par2:
      return std::abs(fraunhofer_factor(pi * b / device.flux_field_par2_mt(), device.chi_for(field.axis))) *
             gap_ratio(gap_model, b, device.bc_par_mt);
    case FieldAxis::Perp:
      return perp_factor(device, b);
  }
  return 0.0;
}

double plasma_frequency(const DeviceModel& device, FieldPoint field, GapModel gap_model) {
  const auto factors = critical_current_factors(device, field, gap_model);
  const double smallest = *std::min_element(factors.begin(), factors.end());
  return device.zero_field_plasma_ghz() * std::sqrt(smallest);
}

double screening_length(const CircuitParams& circuit) {
  circuit.validate();
  return std::sqrt(circuit.cj_ff / circuit.cg_ff);
}

double effective_beta(const DeviceModel& device, FieldPoint field) {
  if (field.axis != FieldAxis::Par2) return 1.0;
  const double y = pi * std::abs(field.b_mt) / device.flux_field_par2_mt();
  return beta_factor(y, device.chi_for(field.axis));
}

BandEdges bandgap_edges_closed_form(double fp_ghz, double eta, double beta, int n_p, double screening) {
  const double g = pi / n_p;  // G/2
  const double g2 = g * g;
  const double s = 1.0 / (screening * screening);
  auto edge = [&](double sign) {
    const double num = std::max(0.0, g2 * (1.0 + sign * beta * eta / 2.0));
    const double den = g2 * (1.0 + sign * eta / 2.0) + s * (1.0 - sign * eta / 2.0);
    return fp_ghz * std::sqrt(num / den);
  };
  const double minus = edge(-1.0);
  const double plus = edge(+1.0);
  return {std::min(minus, plus), std::max(minus, plus)};
}

BandEdges bandgap_edges(const DeviceModel& device, FieldPoint field, GapModel gap_model) {
  device.validate();
  const double factor = mean_suppression(device, field, gap_model);
  const double fp = device.zero_field_plasma_ghz() * std::sqrt(factor);
  if (fp == 0.0) return {0.0, 0.0};
  return bandgap_edges_closed_form(fp, device.geometry.eta, effective_beta(device, field), device.geometry.n_p,
                                   screening_length(device.circuit));
}

double bandgap_center(const DeviceModel& device, FieldPoint field, int harmonic, GapModel gap_model) {
  if (harmonic != 1 && harmonic != 2) throw InvalidParameter("bandgap harmonic must be 1 or 2");
  device.validate();
  const double fp = device.zero_field_plasma_ghz() * std::sqrt(mean_suppression(device, field, gap_model));
  const double half_g = harmonic * pi / device.geometry.n_p;
  const double ls = screening_length(device.circuit);
  return fp * half_g / std::sqrt(half_g * half_g + 1.0 / (ls * ls));
}

double beta_critical(const DeviceModel& device) {
  const double g = pi / device.geometry.n_p;
  const double ls = screening_length(device.circuit);
  const double s = 1.0 / (ls * ls);
  return (g * g - s) / (g * g + s);
}

std::vector<ClosingField> closing_fields(const DeviceModel& device, int n_max) {
  if (n_max < 1) throw InvalidParameter("closing_fields: n_max must be >= 1");
  device.validate();
  const double beta_c = beta_critical(device);
  const double b_mean = device.flux_field_par2_mt();
  const double chi = device.chi_for(FieldAxis::Par2);
  constexpr double guard = 1e-6;

  std::vector<ClosingField> out;
  out.reserve(static_cast<std::size_t>(n_max));
  double lobe_start = 0.0;
  for (int n = 0; n < n_max; ++n) {
    const double half = n + 0.5;
    ClosingField cf{n, b_mean * (half - beta_c / (pi * pi * half)), std::nullopt};
    const double lobe_end = fraunhofer_zero(n + 1, chi);
    auto f = [&](double y) { return beta_factor(y, chi) - beta_c; };
    const double lo = lobe_start + guard;
    const double hi = lobe_end - guard;
    try {
      if (f(lo) > 0.0 && f(hi) < 0.0) {
        cf.exact_mt = detail::bracketed_root(f, lo, hi, 1e-13) * b_mean / pi;
      }
    } catch (const DomainError&) {
      // leave the lobe without an exact root
    }
    out.push_back(cf);
    lobe_start = lobe_end;
  }
  return out;
}

double impedance(const DeviceModel& device, FieldPoint field, GapModel gap_model) {
  device.validate();
  const double factor = mean_suppression(device, field, gap_model);
  if (factor <= 0.0) return std::numeric_limits<double>::infinity();
  const double lj = device.circuit.lj_ph * units::pH / factor;
  return std::sqrt(lj / (device.circuit.cg_ff * units::fF));
}

double perp_bandgap_model(double b_mt, double fg0_ghz, double b_offset_mt, double bc_perp_mt) {
  if (!(bc_perp_mt > 0.0)) throw InvalidParameter("Bc_perp must be positive");
  const double r = (b_mt - b_offset_mt) / bc_perp_mt;
  const double inner = 1.0 - r * r;
  return inner > 0.0 ? fg0_ghz * std::sqrt(inner) : 0.0;
}

SweepRow evaluate_field(const DeviceModel& device, FieldPoint field, GapModel gap_model) {
  BandEdges edges;
  try {
    edges = bandgap_edges(device, field, gap_model);
  } catch (const DomainError&) {
    // beta pole: the mean junction sits exactly at a Fraunhofer zero
    edges = {0.0, 0.0};
  }
  return {field.b_mt,         edges.lower_ghz, edges.upper_ghz, edges.width_ghz(),
          plasma_frequency(device, field, gap_model), impedance(device, field, gap_model)};
}

std::vector<SweepRow> sweep_fields(const DeviceModel& device, FieldAxis axis, std::span<const double> fields_mt,
                                   GapModel gap_model) {
  device.validate();
  const auto n = static_cast<std::ptrdiff_t>(fields_mt.size());
  std::vector<SweepRow> rows(fields_mt.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = evaluate_field(device, {axis, fields_mt[static_cast<std::size_t>(i)]}, gap_model);
    } catch (...) {
#pragma omp critical(twpa_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<double> linspace(double from, double to, int n) {
  if (n < 1) throw InvalidParameter("linspace: count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = from;
    return out;
  }
  const double step = (to - from) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = from + step * i;
  out.back() = to;
  return out;
}

namespace reference {

std::vector<SweepRow> sweep_fields_serial(const DeviceModel& device, FieldAxis axis,
                                          std::span<const double> fields_mt, GapModel gap_model) {
  std::vector<SweepRow> rows;
  rows.reserve(fields_mt.size());
  for (double b : fields_mt) rows.push_back(evaluate_field(device, {axis, b}, gap_model));
  return rows;
}

}  // namespace reference

}  // namespace twpa
