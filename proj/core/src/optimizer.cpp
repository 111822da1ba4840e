#include "orbcorr/optimizer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "orbcorr/errors.hpp"

namespace orbcorr {

namespace {
constexpr double kConvergedSlack = 1e-8;
}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0) throw ArgumentError("nelder_mead: empty start point");
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return f(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += options.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) values[k] = eval(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), second(n);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), next_worst = order[n - 1];

    if (values[worst] - values[best] < options.spread_tolerance) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[k][d] / static_cast<double>(n);
    }
    auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t d = 0; d < n; ++d) out[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
    };

    along(-kReflect, trial);
    const double f_reflect = eval(trial);
    if (f_reflect < values[best]) {
      along(-kReflect * kExpand, second);
      const double f_expand = eval(second);
      if (f_expand < f_reflect) {
        simplex[worst] = second;
        values[worst] = f_expand;
      } else {
        simplex[worst] = trial;
        values[worst] = f_reflect;
      }
    } else if (f_reflect < values[next_worst]) {
      simplex[worst] = trial;
      values[worst] = f_reflect;
    } else {
      const bool outside = f_reflect < values[worst];
      along(outside ? -kContract : kContract, second);
      const double f_contract = eval(second);
      if (f_contract < (outside ? f_reflect : values[worst])) {
        simplex[worst] = second;
        values[worst] = f_contract;
      } else {
        for (std::size_t k = 0; k <= n; ++k) {
          if (k == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            simplex[k][d] = simplex[best][d] + kShrink * (simplex[k][d] - simplex[best][d]);
          values[k] = eval(simplex[k]);
        }
      }
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

std::vector<double> halton_point(std::uint64_t index, int dim) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (dim < 1 || dim > static_cast<int>(std::size(kPrimes))) throw ArgumentError("halton_point: unsupported dimension");
  std::vector<double> point(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    const auto base = static_cast<std::uint64_t>(kPrimes[d]);
    double inv = 1.0 / static_cast<double>(base), scale = inv, value = 0.0;
    for (std::uint64_t i = index + 1; i > 0; i /= base, scale *= inv) value += static_cast<double>(i % base) * scale;
    point[static_cast<std::size_t>(d)] = value;
  }
  return point;
}

MultiStartResult multistart_minimize(const Objective& f, std::span<const double> lower, std::span<const double> upper,
                                     const MultiStartOptions& options) {
  const std::size_t dim = lower.size();
  if (dim == 0 || upper.size() != dim) throw ArgumentError("multistart_minimize: bad bounds");
  if (options.restarts < 1 || options.grid_points < 1) throw ArgumentError("multistart_minimize: need restarts >= 1");

  MultiStartResult result;
  auto scale = [&](std::span<const double> unit) {
    std::vector<double> x(dim);
    for (std::size_t d = 0; d < dim; ++d) x[d] = lower[d] + unit[d] * (upper[d] - lower[d]);
    return x;
  };

  struct Scored {
    std::vector<double> x;
    double value;
  };
  std::vector<Scored> grid;
  grid.reserve(static_cast<std::size_t>(options.grid_points));
  for (int k = 0; k < options.grid_points; ++k) {
    auto x = scale(halton_point(static_cast<std::uint64_t>(k), static_cast<int>(dim)));
    const double v = f(x);
    ++result.evaluations;
    grid.push_back({std::move(x), v});
  }
  std::stable_sort(grid.begin(), grid.end(), [](const Scored& a, const Scored& b) { return a.value < b.value; });
  result.best_grid_value = grid.front().value;
  result.x = grid.front().x;
  result.value = grid.front().value;

  std::vector<std::vector<double>> starts;
  const int from_grid = std::min<int>((options.restarts + 1) / 2, options.grid_points);
  for (int k = 0; k < from_grid; ++k) starts.push_back(grid[static_cast<std::size_t>(k)].x);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(starts.size()) < options.restarts) {
    std::vector<double> u(dim);
    for (auto& v : u) v = unit(rng);
    starts.push_back(scale(u));
  }

  double best_converged = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    NelderMeadResult run = nelder_mead(f, start, options.local);
    ++result.restarts;
    result.evaluations += run.evaluations;
    if (run.converged) {
      ++result.converged_restarts;
      best_converged = std::min(best_converged, run.value);
    }
    if (run.value < result.value) {
      result.value = run.value;
      result.x = run.x;
    }
  }
  // A converged restart must have reached the reported optimum.
  result.converged = best_converged - result.value <= kConvergedSlack;
  return result;
}

}  // namespace orbcorr
