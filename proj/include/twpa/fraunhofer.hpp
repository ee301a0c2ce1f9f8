#pragma once

#include <vector>

namespace twpa {

/// Principal field directions relative to the junction array.
enum class FieldAxis { Par1, Par2, Perp };

/// Edge-concentration parameter of the junction current density; 0 is uniform current.
struct CurrentProfile {
  double chi = 0.0;

  void validate() const;
};

/// Below this chi the uniform-current (sinc / y cot y) limits are used.
inline constexpr double kUniformChiThreshold = 1e-6;

struct JunctionGeometry {
  double w_um;      ///< unmodulated junction width
  double h_um;      ///< mean junction height (modulated dimension)
  double eta;       ///< area modulation amplitude
  int n_p;          ///< modulation period in junctions
  int n_j;          ///< junctions in the array
  double l_nm;      ///< flux-penetrated thickness

  void validate() const;
  /// Reciprocal-lattice vector of the modulation, 2 pi / N_p (per cell).
  double modulation_wavevector() const;
};

/// cosh(2 x chi) / cosh(chi) for x normalized to [-1/2, 1/2].
double current_density(double x, double chi);

/// Signed Fraunhofer factor F(y, chi); reduces to sin(y)/y for chi -> 0.
double fraunhofer_factor(double y, double chi);

/// beta(y, chi) = 1 + y d/dy ln|F(y, chi)|, the effective modulation factor for B_par2.
/// Throws DomainError at zeros of F (poles of beta).
double beta_factor(double y, double chi);

/// k-th positive zero of F(., chi), k >= 1. Equals k*pi for uniform current.
double fraunhofer_zero(int k, double chi);

/// Flux field Phi0/(l w) for Par1 or Phi0/(l h) for Par2, in mT. Perp has no Fraunhofer field.
double flux_field(const JunctionGeometry& geometry, FieldAxis axis);

/// Per-junction Par2 flux fields over one modulation period,
/// B^(n) = mean / (1 + eta cos(G (n + 1/2))).
std::vector<double> flux_field_per_junction(const JunctionGeometry& geometry, double mean_par2_mt);

}  // namespace twpa
