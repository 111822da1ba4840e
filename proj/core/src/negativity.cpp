#include "orbcorr/negativity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "orbcorr/errors.hpp"

namespace orbcorr {

namespace {

constexpr int kPairDim = 16;

void check_pair(const ReducedDensityMatrix& rho) {
  if (rho.mode_count() != 4 || rho.dimension() != kPairDim)
    throw ArgumentError("partial transpose needs a 16x16 two-orbital state");
}

int popcount2(int bits) { return std::popcount(static_cast<unsigned>(bits & 3)); }

// U_R in the 4-mode occupation basis (dense index: L1 L2 R1 R2, L1 most significant).
ComplexMatrix majorana_right() {
  ComplexMatrix u = ComplexMatrix::Zero(kPairDim, kPairDim);
  for (int col = 0; col < kPairDim; ++col) {
    // Dense index -> pattern with mode p+1 at bit p.
    std::uint64_t bits = 0;
    for (int p = 0; p < 4; ++p)
      if ((col >> (3 - p)) & 1) bits |= std::uint64_t{1} << p;
    OccupationPattern state(4, bits);
    int sign = 1;
    // (f_3 + f_3^dag)(f_4 + f_4^dag): the mode-4 factor acts first, and exactly one term survives.
    for (int mode : {4, 3}) {
      const SignedBitOp step = state.occupied(mode) ? apply_annihilation(state, mode) : apply_creation(state, mode);
      state = *step.result;
      sign *= step.sign;
    }
    int row = 0;
    for (int p = 0; p < 4; ++p) row = (row << 1) | static_cast<int>((state.bits() >> p) & 1U);
    u(row, col) = static_cast<double>(sign);
  }
  return u;
}

}  // namespace

TransposePhaseData transpose_phase(int tau_left, int tau_left_bar, int tau_right, int tau_right_bar) {
  TransposePhaseData d{tau_left, tau_left_bar, tau_right, tau_right_bar, 0, {}};
  const int right = tau_right + tau_right_bar;
  const int left = tau_left + tau_left_bar;
  d.twice_phi = right % 2 + 2 * right * left;
  static constexpr Complex kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  d.factor = kPowersOfI[d.twice_phi % 4];
  return d;
}

ComplexMatrix fermionic_partial_transpose(const ReducedDensityMatrix& rho_lr) {
  check_pair(rho_lr);
  const ComplexMatrix& rho = rho_lr.matrix();
  ComplexMatrix swapped = ComplexMatrix::Zero(kPairDim, kPairDim);
  for (int i = 0; i < kPairDim; ++i) {
    const int s_left = i >> 2, s_right = i & 3;
    for (int j = 0; j < kPairDim; ++j) {
      const Complex v = rho(i, j);
      if (v == Complex{}) continue;
      const int r_left = j >> 2, r_right = j & 3;
      const TransposePhaseData phase =
          transpose_phase(popcount2(s_left), popcount2(r_left), popcount2(s_right), popcount2(r_right));
      swapped((s_left << 2) | r_right, (r_left << 2) | s_right) += phase.factor * v;
    }
  }
  static const ComplexMatrix u = majorana_right();
  return u * swapped * u.adjoint();
}

ComplexMatrix qubit_partial_transpose(const ReducedDensityMatrix& rho_lr) {
  check_pair(rho_lr);
  const ComplexMatrix& rho = rho_lr.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(kPairDim, kPairDim);
  for (int i = 0; i < kPairDim; ++i)
    for (int j = 0; j < kPairDim; ++j) out(((i >> 2) << 2) | (j & 3), ((j >> 2) << 2) | (i & 3)) = rho(i, j);
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("trace_norm needs a square matrix");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double fermionic_log_negativity(const ReducedDensityMatrix& rho_lr, SsrKind ssr) {
  return std::max(0.0, std::log2(trace_norm(fermionic_partial_transpose(project_local_ssr(rho_lr, ssr)))));
}

double qubit_log_negativity(const ReducedDensityMatrix& rho_lr, SsrKind ssr) {
  return std::max(0.0, std::log2(trace_norm(qubit_partial_transpose(project_local_ssr(rho_lr, ssr)))));
}

}  // namespace orbcorr
