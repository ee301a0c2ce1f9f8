#pragma once

#include <optional>
#include <span>
#include <vector>

#include "twpa/device.hpp"
#include "twpa/gap_physics.hpp"

namespace twpa {

/// Element values over one modulation period (the array repeats with period N_p).
/// Junction n sits between islands n and n+1.
struct ModulatedArrays {
  std::vector<double> lj_ph;  ///< per junction
  std::vector<double> cj_ff;  ///< per junction
  std::vector<double> cg_ff;  ///< per island
};

/// cos(G (n + 1/2)) for junction n.
double junction_modulation(const JunctionGeometry& geometry, int n);

ModulatedArrays modulated_arrays(const DeviceModel& device);

/// Critical-current suppression Ic(B)/Ic(0) for each junction of one period.
/// Par1 is common to all junctions; Par2 varies per junction; Perp is gap-only.
std::vector<double> critical_current_factors(const DeviceModel& device, FieldPoint field,
                                             GapModel gap_model = GapModel::AgInterp);

/// Suppression factor of the mean inductance, i.e. the one entering the band-edge
/// prefactor and the impedance.
double mean_suppression(const DeviceModel& device, FieldPoint field, GapModel gap_model = GapModel::AgInterp);

/// Measurable plasma frequency (GHz): the smallest per-junction value.
double plasma_frequency(const DeviceModel& device, FieldPoint field, GapModel gap_model = GapModel::AgInterp);

/// Coulomb screening length sqrt(C_J / C_g), in cells.
double screening_length(const CircuitParams& circuit);

/// Effective modulation amplitude factor: beta(pi B / B_Phi2, chi) for Par2, 1 otherwise.
double effective_beta(const DeviceModel& device, FieldPoint field);

struct BandEdges {
  double lower_ghz = 0.0;
  double upper_ghz = 0.0;

  double center_ghz() const { return 0.5 * (lower_ghz + upper_ghz); }
  double width_ghz() const { return upper_ghz - lower_ghz; }
};

/// Edges of the first photonic bandgap from the k = G/2 determinant condition, given the
/// prefactor plasma frequency and the (possibly field-renormalized) modulation factor beta.
BandEdges bandgap_edges_closed_form(double fp_ghz, double eta, double beta, int n_p, double screening);

BandEdges bandgap_edges(const DeviceModel& device, FieldPoint field, GapModel gap_model = GapModel::AgInterp);

/// Approximate gap center fp (G'/2)/sqrt((G'/2)^2 + 1/ls^2), G' = harmonic * G.
double bandgap_center(const DeviceModel& device, FieldPoint field, int harmonic,
                      GapModel gap_model = GapModel::AgInterp);

/// beta at which the Par2 bandgap closes: ((G/2)^2 - 1/ls^2) / ((G/2)^2 + 1/ls^2).
double beta_critical(const DeviceModel& device);

struct ClosingField {
  int lobe;
  double approximate_mt;
  std::optional<double> exact_mt;  ///< empty if no root was bracketed on this lobe
};

/// Par2 fields at which the bandgap closes, lobes 0 .. n_max-1.
std::vector<ClosingField> closing_fields(const DeviceModel& device, int n_max);

/// sqrt(L_J(B) / C_g) in ohm; +infinity when the suppression factor vanishes.
double impedance(const DeviceModel& device, FieldPoint field, GapModel gap_model = GapModel::AgInterp);

/// f_g(0) sqrt(1 - ((B - B_offset)/Bc_perp)^2), zero outside the real domain.
double perp_bandgap_model(double b_mt, double fg0_ghz, double b_offset_mt, double bc_perp_mt);

struct SweepRow {
  double b_mt;
  double fg_minus_ghz;
  double fg_plus_ghz;
  double gap_width_ghz;
  double fp_ghz;
  double z_ohm;
};

SweepRow evaluate_field(const DeviceModel& device, FieldPoint field, GapModel gap_model);

/// Field sweep evaluated in parallel; rows come back in the order of `fields_mt`.
std::vector<SweepRow> sweep_fields(const DeviceModel& device, FieldAxis axis, std::span<const double> fields_mt,
                                   GapModel gap_model = GapModel::AgInterp);

/// n evenly spaced values from `from` to `to` inclusive; n = 1 gives {from}.
std::vector<double> linspace(double from, double to, int n);

namespace reference {
std::vector<SweepRow> sweep_fields_serial(const DeviceModel& device, FieldAxis axis,
                                          std::span<const double> fields_mt, GapModel gap_model);
}  // namespace reference

}  // namespace twpa
