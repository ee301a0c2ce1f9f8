#include "twpa/spectrum.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "twpa/errors.hpp"

namespace twpa {

void Spectrum::validate() const {
  if (freqs_ghz.size() != values_db.size()) throw InvalidParameter("spectrum: frequency and value counts differ");
  for (std::size_t i = 1; i < freqs_ghz.size(); ++i) {
    if (!(freqs_ghz[i] > freqs_ghz[i - 1])) throw InvalidParameter("spectrum: frequencies must be strictly increasing");
  }
  for (double v : values_db) {
    if (std::isnan(v)) throw InvalidParameter("spectrum: NaN value");
  }
}

bool same_grid(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(std::abs(a.freqs_ghz[i]), std::abs(b.freqs_ghz[i]));
    if (std::abs(a.freqs_ghz[i] - b.freqs_ghz[i]) > 1e-9 * std::max(scale, 1.0)) return false;
  }
  return true;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

namespace csv {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double to_double(std::string_view cell) {
  if (cell == "inf" || cell == "+inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw ParseError("not a number: '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace csv

std::vector<Spectrum> read_spectra_csv(std::istream& in) {
  std::vector<Spectrum> out;
  SpectrumKind kind = SpectrumKind::Measured;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.find("kind=simulated") != std::string::npos) kind = SpectrumKind::Simulated;
      continue;
    }
    const auto cells = csv::split(line);
    if (!have_header) {
      if (cells.size() < 3 || cells[0] != "field_mT" || cells[1] != "freq_GHz") {
        throw ParseError("spectrum CSV: expected header 'field_mT,freq_GHz,<value>_dB'");
      }
      have_header = true;
      continue;
    }
    if (cells.size() < 3) throw ParseError("spectrum CSV line " + std::to_string(line_no) + ": expected 3 columns");
    const double b = csv::to_double(cells[0]);
    const double f = csv::to_double(cells[1]);
    const double v = csv::to_double(cells[2]);
    if (out.empty() || out.back().meta.field.b_mt != b) {
      Spectrum s;
      s.meta.field.b_mt = b;
      out.push_back(std::move(s));
    }
    out.back().freqs_ghz.push_back(f);
    out.back().values_db.push_back(std::isinf(v) && v < 0 ? kNoiseFloorDb : v);
  }
  if (!have_header) throw ParseError("spectrum CSV: empty input");
  for (auto& s : out) {
    s.meta.kind = kind;
    s.validate();
  }
  return out;
}

std::vector<Spectrum> read_spectra_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_spectra_csv(in);
}

void write_spectra_csv(std::ostream& out, std::span<const Spectrum> spectra, std::string_view value_column) {
  const bool simulated = !spectra.empty() && spectra.front().meta.kind == SpectrumKind::Simulated;
  if (simulated) out << "# kind=simulated\n";
  out << "field_mT,freq_GHz," << value_column << '\n';
  for (const auto& s : spectra) {
    const std::string b = format_number(s.meta.field.b_mt);
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << b << ',' << format_number(s.freqs_ghz[i]) << ',' << format_number(s.values_db[i]) << '\n';
    }
  }
}

}  // namespace twpa
