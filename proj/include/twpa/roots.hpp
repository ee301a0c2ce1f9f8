#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

#include "twpa/errors.hpp"

namespace twpa::detail {

// Bracketed root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
// Terminates when the bracket is below rel_tol relative to its smaller end.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double rel_tol = 1e-12, std::uintmax_t max_iter = 200) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw DomainError("bracketed_root: no sign change in bracket");
  }
  auto tol = [rel_tol](double a, double b) {
    return std::abs(b - a) <= rel_tol * std::min(std::abs(a), std::abs(b));
  };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (a + b);
}

}  // namespace twpa::detail
