#include <doctest.h>

#include <cmath>

#include "twpa/features.hpp"

using namespace twpa;
using doctest::Approx;

namespace {

Spectrum make(double from, double to, double step, auto&& value) {
  Spectrum s;
  for (double f = from; f <= to + 1e-9; f += step) {
    s.freqs_ghz.push_back(f);
    s.values_db.push_back(value(f));
  }
  return s;
}

}  // namespace

TEST_CASE("rolling median ignores a narrow notch") {
  const auto s = make(1.0, 10.0, 0.01, [](double f) { return std::abs(f - 5.0) < 0.1 ? -40.0 : -1.0; });
  const auto m = rolling_median(s.freqs_ghz, s.values_db, 2.0);
  for (double v : m) CHECK(v == Approx(-1.0));
}

TEST_CASE("square dip is located between its crossings") {
  const auto s = make(1.0, 12.0, 0.01, [](double f) { return (f > 6.0 && f < 6.4) ? -30.0 : 0.0; });
  const auto g = extract_gap(s);
  REQUIRE(g.found());
  CHECK(g.best->center_ghz == Approx(6.2).epsilon(0.002));
  CHECK(g.best->depth_db == Approx(30.0));
  CHECK(g.best->lower_ghz < g.best->upper_ghz);
}

TEST_CASE("deepest of two dips wins and both are reported") {
  const auto s = make(1.0, 16.0, 0.01, [](double f) {
    if (f > 5.0 && f < 5.3) return -20.0;
    if (f > 10.0 && f < 10.3) return -35.0;
    return 0.0;
  });
  const auto g = extract_gap(s);
  REQUIRE(g.dips.size() == 2);
  CHECK(g.dips[0].center_ghz < g.dips[1].center_ghz);
  CHECK(g.best->center_ghz == Approx(10.15).epsilon(0.002));
}

TEST_CASE("shallow features and flat spectra give no gap") {
  const auto flat = make(1.0, 10.0, 0.01, [](double) { return -2.0; });
  CHECK_FALSE(extract_gap(flat).found());
  const auto shallow = make(1.0, 10.0, 0.01, [](double f) { return std::abs(f - 5.0) < 0.2 ? -6.0 : 0.0; });
  CHECK_FALSE(extract_gap(shallow).found());
}

TEST_CASE("parabolic bottom of a V-shaped dip") {
  const auto s = make(1.0, 12.0, 0.01, [](double f) { return std::min(0.0, -40.0 + 200.0 * std::abs(f - 7.003)); });
  const auto g = extract_gap(s);
  REQUIRE(g.found());
  CHECK(g.best->bottom_ghz == Approx(7.003).epsilon(1e-3));
}

TEST_CASE("plasma cutoff") {
  const auto s = make(1.0, 30.0, 0.01, [](double f) { return f < 22.0 ? -1.0 : -80.0; });
  const auto fp = extract_plasma(s);
  REQUIRE(fp.has_value());
  CHECK(*fp == Approx(22.0).epsilon(0.001));
}

TEST_CASE("spectrum without a cutoff reports none") {
  const auto s = make(1.0, 20.0, 0.01, [](double) { return -1.0; });
  CHECK_FALSE(extract_plasma(s).has_value());
  const auto blip = make(1.0, 20.0, 0.01, [](double f) { return f > 19.985 ? -80.0 : -1.0; });
  CHECK_FALSE(extract_plasma(blip).has_value());
}

TEST_CASE("features above the cutoff are not mistaken for the gap") {
  const auto s = make(1.0, 30.0, 0.01, [](double f) {
    if (f > 22.0) return (f > 25.0 && f < 25.5) ? -60.0 : -80.0 + 10.0 * std::sin(f);
    return (f > 8.0 && f < 8.4) ? -30.0 : 0.0;
  });
  const auto g = extract_gap(s);
  REQUIRE(g.found());
  CHECK(g.best->center_ghz == Approx(8.2).epsilon(0.002));
}
