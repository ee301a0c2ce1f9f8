#pragma once

#include <numbers>

namespace twpa::constants {

inline constexpr double pi = std::numbers::pi;

/// Magnetic flux quantum h/2e in Wb (CODATA).
inline constexpr double flux_quantum = 2.067833848e-15;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double bohr_magneton = 9.2740100783e-24;
inline constexpr double electron_volt = 1.602176634e-19;

}  // namespace twpa::constants

// Interface units are mT, GHz, nm, um, pH, fF, ueV; these convert to SI.
namespace twpa::units {

inline constexpr double mT = 1e-3;
inline constexpr double GHz = 1e9;
inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double pH = 1e-12;
inline constexpr double fF = 1e-15;
inline constexpr double ueV = 1e-6 * constants::electron_volt;

}  // namespace twpa::units
