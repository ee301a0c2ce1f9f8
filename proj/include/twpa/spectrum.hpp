#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twpa/device.hpp"

namespace twpa {

/// Transmission values this far down are reported as the floor rather than as -inf.
inline constexpr double kNoiseFloorDb = -300.0;

enum class SpectrumKind { Measured, Simulated };

struct SpectrumMeta {
  FieldPoint field{};
  std::string device;
  SpectrumKind kind = SpectrumKind::Measured;
};

/// Frequency grid (GHz, strictly increasing) with a value in dB per point.
struct Spectrum {
  std::vector<double> freqs_ghz;
  std::vector<double> values_db;
  SpectrumMeta meta;

  std::size_t size() const { return freqs_ghz.size(); }
  void validate() const;
};

/// Grids are equal point by point to 1e-9 relative.
bool same_grid(const Spectrum& a, const Spectrum& b);

/// Shortest round-trippable-enough decimal form used in every CSV we write; "inf"/"nan" for non-finite.
std::string format_number(double value);

/// Spectra grouped by consecutive field_mT value, in file order. Header row required;
/// the value column is the third column whatever its name (s21_dB, s11_dB, gain_dB).
std::vector<Spectrum> read_spectra_csv(std::istream& in);
std::vector<Spectrum> read_spectra_csv(const std::filesystem::path& path);

/// Writes `field_mT,freq_GHz,<value_column>`, preceded by `# kind=simulated` for simulated data.
void write_spectra_csv(std::ostream& out, std::span<const Spectrum> spectra, std::string_view value_column);

namespace csv {

/// Splits one CSV line on commas and trims surrounding whitespace from each cell.
std::vector<std::string> split(std::string_view line);
/// Parses a number, accepting "inf"/"-inf"/"nan"; throws ParseError otherwise.
double to_double(std::string_view cell);

}  // namespace csv

}  // namespace twpa
