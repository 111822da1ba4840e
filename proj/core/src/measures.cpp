#include "orbcorr/measures.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "orbcorr/errors.hpp"

namespace orbcorr {

namespace {

constexpr double kNegativeEigenvalueFloor = -1e-9;
constexpr double kOutcomeCutoff = 1e-14;
constexpr double kDiscordFormsTolerance = 1e-8;

using Matrix16 = Eigen::Matrix<Complex, 16, 16>;
using Matrix4 = Eigen::Matrix4cd;

void check_two_orbital(const ReducedDensityMatrix& rho) {
  if (rho.mode_count() != 4)
    throw ArgumentError("expected a two-orbital (4-mode, 16x16) state, got " + std::to_string(rho.mode_count()) +
                        " modes");
}

double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// Entropy in bits of m / trace, with m Hermitian positive semidefinite up to roundoff.
double normalized_entropy(const Matrix4& m, double trace) {
  // Local parity blocks {|00>,|11>} and {|01>,|10>} decouple for SSR-respecting states.
  const bool block_diagonal = m(0, 1) == Complex{} && m(0, 2) == Complex{} && m(3, 1) == Complex{} &&
                              m(3, 2) == Complex{};
  std::array<double, 4> eig{};
  if (block_diagonal) {
    auto pair_eigs = [](double a, double d, Complex b, double& lo, double& hi) {
      const double mean = 0.5 * (a + d);
      const double radius = std::hypot(0.5 * (a - d), std::abs(b));
      hi = mean + radius;
      lo = mean - radius;
    };
    pair_eigs(m(0, 0).real(), m(3, 3).real(), m(0, 3), eig[0], eig[1]);
    pair_eigs(m(1, 1).real(), m(2, 2).real(), m(1, 2), eig[2], eig[3]);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix4> solver(m, Eigen::EigenvaluesOnly);
    for (int k = 0; k < 4; ++k) eig[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
  }
  double s = 0.0;
  for (double v : eig) {
    if (v < kNegativeEigenvalueFloor)
      throw NumericalConsistencyError("conditional state eigenvalue " + std::to_string(v) + " below -1e-9");
    if (v > 0.0) s += entropy_term(v / trace);
  }
  return s;
}

// Conditional entropy of the unmeasured orbital for a definite-parity basis.
double conditional_entropy_fast(const Matrix16& rho, const MeasurementBasis& basis, Side measured) {
  double total = 0.0;
  for (const auto& phi : basis.vectors) {
    Matrix4 m;
    if (measured == Side::right) {
      // tr_R[(1 x |phi><phi|) rho (1 x |phi><phi|)] with the fermionic sign (-1)^{N(z)(N(l)+N(l'))}.
      double even_weight = 0.0, odd_weight = 0.0;
      for (int z = 0; z < 4; ++z) (std::popcount(static_cast<unsigned>(z)) % 2 ? odd_weight : even_weight) += std::norm(phi(z));
      for (int l = 0; l < 4; ++l) {
        for (int lp = 0; lp < 4; ++lp) {
          Complex c{};
          for (int x = 0; x < 4; ++x) {
            Complex row{};
            for (int y = 0; y < 4; ++y) row += rho(4 * l + x, 4 * lp + y) * phi(y);
            c += std::conj(phi(x)) * row;
          }
          const bool flip = (std::popcount(static_cast<unsigned>(l)) + std::popcount(static_cast<unsigned>(lp))) % 2;
          m(l, lp) = c * (flip ? even_weight - odd_weight : even_weight + odd_weight);
        }
      }
    } else {
      for (int r = 0; r < 4; ++r) {
        for (int rp = 0; rp < 4; ++rp) {
          Complex c{};
          for (int x = 0; x < 4; ++x) {
            Complex row{};
            for (int y = 0; y < 4; ++y) row += rho(4 * x + r, 4 * y + rp) * phi(y);
            c += std::conj(phi(x)) * row;
          }
          m(r, rp) = c;
        }
      }
    }
    const double p = m.trace().real();
    if (p < kOutcomeCutoff) continue;
    total += p * normalized_entropy(m, p);
  }
  return total;
}

}  // namespace

std::string to_string(Side side) { return side == Side::left ? "left" : "right"; }

double von_neumann_entropy(const ComplexMatrix& rho) {
  const Eigen::VectorXd values = density_spectrum(rho);
  double s = 0.0;
  for (double v : values) s += entropy_term(v);
  return s;
}

double von_neumann_entropy(const ReducedDensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

ReducedDensityMatrix orbital_marginal(const ReducedDensityMatrix& rho_lr, Side side) {
  check_two_orbital(rho_lr);
  const auto& k = rho_lr.kept_modes();
  const std::size_t first = side == Side::left ? 2 : 0;
  const int traced[2] = {k[first].mode_index(), k[first + 1].mode_index()};
  return partial_trace(rho_lr, traced);
}

double mutual_information(const ReducedDensityMatrix& rho_lr, SsrKind ssr) {
  check_two_orbital(rho_lr);
  const ReducedDensityMatrix projected = project_local_ssr(rho_lr, ssr);
  return von_neumann_entropy(orbital_marginal(projected, Side::left)) +
         von_neumann_entropy(orbital_marginal(projected, Side::right)) - von_neumann_entropy(projected);
}

int MeasurementParams::parameter_count(SsrKind kind) {
  switch (kind) {
    case SsrKind::parity:
      return 4;
    case SsrKind::number:
      return 2;
    case SsrKind::none:
      break;
  }
  throw ArgumentError("measurement optimization needs a parity or number superselection rule");
}

MeasurementBasis build_measurement_basis(const MeasurementParams& params) {
  constexpr int k00 = 0, k01 = 1, k10 = 2, k11 = 3;
  MeasurementBasis basis;
  basis.kind = params.kind;
  for (auto& v : basis.vectors) v.setZero();
  const auto& a = params.angles;
  if (params.kind == SsrKind::parity) {
    const Complex a1 = std::cos(a[0]);
    const Complex a2 = std::polar(std::sin(a[0]), a[1]);
    const Complex a3 = std::cos(a[2]);
    const Complex a4 = std::polar(std::sin(a[2]), a[3]);
    basis.vectors[0](k00) = a1;
    basis.vectors[0](k11) = a2;
    basis.vectors[1](k01) = a3;
    basis.vectors[1](k10) = a4;
    basis.vectors[2](k01) = std::conj(a4);
    basis.vectors[2](k10) = -std::conj(a3);
    basis.vectors[3](k00) = std::conj(a2);
    basis.vectors[3](k11) = -std::conj(a1);
  } else if (params.kind == SsrKind::number) {
    const Complex b1 = std::cos(a[0]);
    const Complex b2 = std::polar(std::sin(a[0]), a[1]);
    basis.vectors[0](k00) = 1.0;
    basis.vectors[1](k01) = b1;
    basis.vectors[1](k10) = b2;
    basis.vectors[2](k01) = std::conj(b2);
    basis.vectors[2](k10) = -std::conj(b1);
    basis.vectors[3](k11) = 1.0;
  } else {
    throw ArgumentError("measurement basis needs a parity or number superselection rule");
  }
  return basis;
}

double conditional_entropy(const ReducedDensityMatrix& rho_lr, const MeasurementBasis& basis, Side measured) {
  check_two_orbital(rho_lr);
  const Matrix16 rho = rho_lr.matrix();
  return conditional_entropy_fast(rho, basis, measured);
}

ClassicalCorrelation classical_correlation(const ReducedDensityMatrix& rho_lr, SsrKind ssr, Side measured,
                                           const MultiStartOptions& options) {
  check_two_orbital(rho_lr);
  const int dim = MeasurementParams::parameter_count(ssr);
  const ReducedDensityMatrix projected = project_local_ssr(rho_lr, ssr);
  const double s_other =
      von_neumann_entropy(orbital_marginal(projected, measured == Side::left ? Side::right : Side::left));

  const Matrix16 rho = projected.matrix();
  MeasurementParams params{ssr, {}};
  const Objective objective = [&](std::span<const double> x) {
    MeasurementParams p{ssr, {}};
    std::copy(x.begin(), x.end(), p.angles.begin());
    return conditional_entropy_fast(rho, build_measurement_basis(p), measured);
  };

  constexpr double kPi = std::numbers::pi;
  const std::array<double, 4> lower{0.0, 0.0, 0.0, 0.0};
  const std::array<double, 4> upper{kPi / 2, 2 * kPi, kPi / 2, 2 * kPi};
  const MultiStartResult run = multistart_minimize(objective, std::span(lower).first(static_cast<std::size_t>(dim)),
                                                   std::span(upper).first(static_cast<std::size_t>(dim)), options);

  std::copy(run.x.begin(), run.x.end(), params.angles.begin());
  ClassicalCorrelation out;
  out.value = s_other - run.value;
  out.best = params;
  out.diagnostics = {run.restarts, run.converged_restarts, run.evaluations, run.value, run.converged};
  return out;
}

Discord quantum_discord(const ReducedDensityMatrix& rho_lr, SsrKind ssr, Side measured,
                        const MultiStartOptions& options) {
  Discord out;
  out.classical = classical_correlation(rho_lr, ssr, measured, options);
  out.mutual_information = mutual_information(rho_lr, ssr);
  out.value = out.mutual_information - out.classical.value;

  const ReducedDensityMatrix projected = project_local_ssr(rho_lr, ssr);
  out.via_conditional_entropy = von_neumann_entropy(orbital_marginal(projected, measured)) -
                                von_neumann_entropy(projected) + out.classical.diagnostics.best_objective;
  if (std::abs(out.value - out.via_conditional_entropy) > kDiscordFormsTolerance)
    throw NumericalConsistencyError("discord forms disagree: " + std::to_string(out.value) + " vs " +
                                    std::to_string(out.via_conditional_entropy));
  return out;
}

}  // namespace orbcorr
