#include "twpa/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "twpa/errors.hpp"

namespace twpa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  std::vector<double> x;
  double f;
};

bool collapsed(const std::vector<Vertex>& simplex, double tol) {
  const auto& best = simplex.front().x;
  for (std::size_t v = 1; v < simplex.size(); ++v) {
    for (std::size_t i = 0; i < best.size(); ++i) {
      if (std::abs(simplex[v].x[i] - best[i]) > tol * std::max(1.0, std::abs(best[i]))) return false;
    }
  }
  return true;
}

double safe_eval(const Objective& objective, const std::vector<double>& x) {
  const double f = objective(x);
  return std::isfinite(f) ? f : kInf;
}

std::vector<Vertex> initial_simplex(const Objective& objective, const std::vector<double>& x0,
                                    const NelderMeadOptions& opt) {
  std::vector<Vertex> simplex;
  simplex.push_back({x0, safe_eval(objective, x0)});
  for (std::size_t i = 0; i < x0.size(); ++i) {
    auto x = x0;
    x[i] = x[i] != 0.0 ? x[i] * (1.0 + opt.initial_step) : opt.zero_step;
    simplex.push_back({x, safe_eval(objective, x)});
  }
  return simplex;
}

// One run from x0; returns the number of iterations spent.
int run_simplex(const Objective& objective, const std::vector<double>& x0, const NelderMeadOptions& opt,
                int budget, NelderMeadResult& result) {
  const std::size_t dim = x0.size();
  auto simplex = initial_simplex(objective, x0, opt);
  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(dim);
  auto point = [&](double t, const std::vector<double>& worst) {
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = centroid[i] + t * (worst[i] - centroid[i]);
    return p;
  };

  int it = 0;
  result.converged = false;
  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), by_f);
    const double spread = simplex.back().f - simplex.front().f;
    if (std::isinf(simplex.front().f)) break;  // whole simplex in a non-finite region
    if (spread < opt.f_tolerance && collapsed(simplex, opt.x_tolerance)) {
      result.converged = true;
      break;
    }
    if (it >= budget) break;
    ++it;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(dim);
    }
    Vertex& worst = simplex.back();
    const double f_best = simplex.front().f;
    const double f_second = simplex[dim - 1].f;

    Vertex reflected{point(-opt.reflection, worst.x), 0.0};
    reflected.f = safe_eval(objective, reflected.x);
    if (reflected.f < f_best) {
      Vertex expanded{point(-opt.reflection * opt.expansion, worst.x), 0.0};
      expanded.f = safe_eval(objective, expanded.x);
      worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < f_second) {
      worst = std::move(reflected);
    } else {
      const bool outside = reflected.f < worst.f;
      Vertex contracted{outside ? point(-opt.reflection * opt.contraction, worst.x) : point(opt.contraction, worst.x),
                        0.0};
      contracted.f = safe_eval(objective, contracted.x);
      if (contracted.f < (outside ? reflected.f : worst.f)) {
        worst = std::move(contracted);
      } else {
        const auto& best = simplex.front().x;
        for (std::size_t v = 1; v <= dim; ++v) {
          for (std::size_t i = 0; i < dim; ++i) simplex[v].x[i] = best[i] + opt.shrink * (simplex[v].x[i] - best[i]);
          simplex[v].f = safe_eval(objective, simplex[v].x);
        }
      }
    }
    const double best_now = std::min_element(simplex.begin(), simplex.end(), by_f)->f;
    result.best_history.push_back(std::min(best_now, result.best_history.empty() ? kInf : result.best_history.back()));
  }
  const auto& best = *std::min_element(simplex.begin(), simplex.end(), by_f);
  if (best.f <= result.f || result.x.empty()) {
    result.x = best.x;
    result.f = best.f;
  }
  return it;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const NelderMeadOptions& options) {
  if (x0.empty()) throw InvalidParameter("nelder_mead: empty starting point");
  NelderMeadResult result;
  result.f = kInf;
  int remaining = options.max_iterations;
  for (int round = 0; round <= options.restarts && remaining >= 0; ++round) {
    const int used = run_simplex(objective, round == 0 ? x0 : result.x, options, remaining, result);
    result.iterations += used;
    remaining -= used;
    if (!result.converged) break;
  }
  return result;
}

}  // namespace twpa
