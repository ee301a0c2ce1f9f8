#pragma once

#include <complex>
#include <span>
#include <vector>

#include "twpa/array_model.hpp"
#include "twpa/spectrum.hpp"

namespace twpa {

/// Two lowest branches of the coupled-amplitude system on k in [0, G/2].
/// Entries are NaN where a branch has no propagating solution below f_p.
struct BandStructure {
  std::vector<double> k;          ///< per-cell wavevector
  std::vector<double> lower_ghz;
  std::vector<double> upper_ghz;
};

/// Real solutions omega (GHz, ascending, below fp) of the 2x2 determinant at wavevector k.
std::vector<double> dispersion_roots(double fp_ghz, double eta, double beta, int n_p, double screening, double k);

BandStructure dispersion_bands(const DeviceModel& device, FieldPoint field, int k_points,
                               GapModel gap_model = GapModel::AgInterp);

struct CascadeResult {
  Spectrum s21;
  Spectrum s11;
  std::vector<std::complex<double>> s21_complex;  ///< underflows to 0 deep in stop bands
  std::vector<std::complex<double>> s11_complex;
};

/// Evenly spaced grid from `from` to `to` inclusive with the given step (GHz).
std::vector<double> frequency_grid(double from_ghz, double to_ghz, double step_ghz);

/// S-parameters of the full ladder: shunt C_g at every island, series L_J || C_J per junction,
/// ports at islands 0 and N_J, referenced to z0. Frequencies evaluated in parallel.
CascadeResult abcd_cascade(const DeviceModel& device, FieldPoint field, std::span<const double> freqs_ghz,
                           double z0_ohm = 50.0, GapModel gap_model = GapModel::AgInterp);

namespace reference {

/// Straightforward cascade over every cell with impedance-form series matrices and no
/// rescaling. Overflows above f_p; used to check the production kernel in the passband.
std::vector<std::complex<double>> abcd_s21_serial(const DeviceModel& device, FieldPoint field,
                                                  std::span<const double> freqs_ghz, double z0_ohm,
                                                  GapModel gap_model);

}  // namespace reference

}  // namespace twpa
