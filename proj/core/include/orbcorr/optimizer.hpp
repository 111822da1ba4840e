#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace orbcorr {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  double initial_step = 0.25;
  double spread_tolerance = 1e-10;  // stop when f(worst) - f(best) < tol
  int max_evaluations = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes `f` with the standard reflection/expansion/contraction/shrink simplex.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, const NelderMeadOptions& options = {});

/// Radical-inverse Halton point `index` (0-based) in [0,1)^dim using the first `dim` primes.
std::vector<double> halton_point(std::uint64_t index, int dim);

struct MultiStartOptions {
  int restarts = 24;
  int grid_points = 64;
  std::uint64_t seed = 7;
  NelderMeadOptions local;
};

struct MultiStartResult {
  std::vector<double> x;
  double value = 0.0;
  int restarts = 0;
  int converged_restarts = 0;
  int evaluations = 0;
  double best_grid_value = 0.0;
  bool converged = false;
};

/// Scores `grid_points` fixed Halton points scaled to [lower, upper], then runs
/// `restarts` local searches. Half start from the best grid points and half from
/// seeded uniform draws. The box only places starting points; local searches are
/// unconstrained, so it suits periodic objectives. The result is never worse
/// than the best grid point.
MultiStartResult multistart_minimize(const Objective& f, std::span<const double> lower, std::span<const double> upper,
                                     const MultiStartOptions& options = {});

}  // namespace orbcorr
