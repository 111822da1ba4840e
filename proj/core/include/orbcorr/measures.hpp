#pragma once

#include <array>
#include <cstdint>

#include "orbcorr/optimizer.hpp"
#include "orbcorr/reduction.hpp"

namespace orbcorr {

enum class Side { left, right };

std::string to_string(Side side);

/// von Neumann entropy in bits; 0 log 0 = 0.
double von_neumann_entropy(const ComplexMatrix& rho);
double von_neumann_entropy(const ReducedDensityMatrix& rho);

/// Marginal of one orbital of a two-orbital state, via the fermionic partial trace.
ReducedDensityMatrix orbital_marginal(const ReducedDensityMatrix& rho_lr, Side side);

/// I = S(rho_L) + S(rho_R) - S(rho_LR) of the SSR-projected two-orbital state.
double mutual_information(const ReducedDensityMatrix& rho_lr, SsrKind ssr);

/// Angles of a rank-1 projective measurement on one orbital.
/// Parity: (theta1, phi1, theta2, phi2) with alpha1 = cos theta1,
/// alpha2 = sin theta1 e^{i phi1}, alpha3 = cos theta2, alpha4 = sin theta2 e^{i phi2}.
/// Number: (theta, phi) with beta1 = cos theta, beta2 = sin theta e^{i phi}.
struct MeasurementParams {
  SsrKind kind = SsrKind::parity;
  std::array<double, 4> angles{};

  static int parameter_count(SsrKind kind);
};

/// Four orthonormal vectors over one orbital's basis {|00>, |01>, |10>, |11>}.
struct MeasurementBasis {
  SsrKind kind = SsrKind::parity;
  std::array<Eigen::Vector4cd, 4> vectors;
};

MeasurementBasis build_measurement_basis(const MeasurementParams& params);

/// sum_i p_i S(rho_other|i) for a measurement on `measured` of the two-orbital
/// state. Outcomes with p_i < 1e-14 contribute nothing.
double conditional_entropy(const ReducedDensityMatrix& rho_lr, const MeasurementBasis& basis, Side measured);

struct OptimizerDiagnostics {
  int restarts = 0;
  int converged_restarts = 0;
  int evaluations = 0;
  double best_objective = 0.0;  // minimal conditional entropy
  bool converged = false;
};

struct ClassicalCorrelation {
  double value = 0.0;  // bits
  MeasurementParams best;
  OptimizerDiagnostics diagnostics;
};

/// max over measurements on `measured` of S(rho_other) - conditional entropy,
/// for the SSR-projected state. ssr must be parity or number.
ClassicalCorrelation classical_correlation(const ReducedDensityMatrix& rho_lr, SsrKind ssr, Side measured,
                                           const MultiStartOptions& options = {});

struct Discord {
  double value = 0.0;                 // I - C
  double via_conditional_entropy = 0.0;  // S(rho_measured) - S(rho_LR) + min conditional entropy
  double mutual_information = 0.0;
  ClassicalCorrelation classical;
};

/// Quantum discord with both algebraic forms; throws NumericalConsistencyError
/// if they disagree by more than 1e-8.
Discord quantum_discord(const ReducedDensityMatrix& rho_lr, SsrKind ssr, Side measured,
                        const MultiStartOptions& options = {});

}  // namespace orbcorr
