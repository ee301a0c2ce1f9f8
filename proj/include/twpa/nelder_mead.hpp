#pragma once

#include <functional>
#include <span>
#include <vector>

namespace twpa {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_step = 0.05;   ///< relative perturbation of each coordinate for the first simplex
  double zero_step = 1e-4;      ///< absolute perturbation for coordinates that are exactly zero
  double f_tolerance = 1e-10;   ///< stop when max f - min f over the simplex drops below this
  double x_tolerance = 1e-8;    ///< ... and every vertex is this close to the best, relative to max(1, |x|)
  int max_iterations = 2000;
  int restarts = 0;             ///< fresh simplices built around the best point after convergence
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> best_history;  ///< best vertex value after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex minimization. Non-finite objective values count as +infinity.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace twpa
