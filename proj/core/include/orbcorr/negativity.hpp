#pragma once

#include "orbcorr/reduction.hpp"

namespace orbcorr {

/// Occupation sums and phase of one basis outer product under the fermionic
/// partial transpose; phi is half-integer, stored as twice_phi.
struct TransposePhaseData {
  int tau_left = 0;       // ket occupations on L
  int tau_left_bar = 0;   // bra occupations on L
  int tau_right = 0;
  int tau_right_bar = 0;
  int twice_phi = 0;
  Complex factor{1.0, 0.0};  // (-1)^phi = i^{twice_phi}, one of {1, i, -1, -i}
};

/// phi = [(tau_R + bar tau_R) mod 2] / 2 + (tau_R + bar tau_R)(tau_L + bar tau_L).
TransposePhaseData transpose_phase(int tau_left, int tau_left_bar, int tau_right, int tau_right_bar);

/// Fermionic partial transpose of a two-orbital state with respect to the right
/// orbital: each |s_L s_R><r_L r_R| maps to (-1)^phi U_R |s_L r_R><r_L s_R| U_R^dag,
/// U_R = (f_R1 + f_R1^dag)(f_R2 + f_R2^dag). The result need not be Hermitian.
ComplexMatrix fermionic_partial_transpose(const ReducedDensityMatrix& rho_lr);

/// Plain (qubit) partial transpose on the right orbital: swap ket/bra R substrings.
ComplexMatrix qubit_partial_transpose(const ReducedDensityMatrix& rho_lr);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

/// log2 of the trace norm of the fermionic partial transpose of the SSR-projected
/// state; roundoff below zero is clamped to 0.
double fermionic_log_negativity(const ReducedDensityMatrix& rho_lr, SsrKind ssr);

/// Same with the qubit partial transpose (no phases, no U_R).
double qubit_log_negativity(const ReducedDensityMatrix& rho_lr, SsrKind ssr);

}  // namespace orbcorr
