#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "orbcorr/fock.hpp"

namespace orbcorr {

using ComplexMatrix = Eigen::MatrixXcd;

enum class SsrKind { none, parity, number };

std::string to_string(SsrKind kind);
/// Accepts "none", "parity"/"P", "number"/"N".
SsrKind parse_ssr_kind(std::string_view text);

/// Dense density matrix over the Fock space of `kept_modes`. Row/column index
/// bit (m-1-p) holds the occupation of kept_modes[p], so the first kept mode is
/// the most significant bit.
class ReducedDensityMatrix {
 public:
  ReducedDensityMatrix() = default;
  ReducedDensityMatrix(ComplexMatrix matrix, std::vector<ModeLabel> kept_modes);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<ModeLabel>& kept_modes() const noexcept { return kept_modes_; }
  int mode_count() const noexcept { return static_cast<int>(kept_modes_.size()); }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }

  Complex trace() const { return matrix_.trace(); }
  bool is_hermitian(double tol = 1e-10) const;

 private:
  ComplexMatrix matrix_;
  std::vector<ModeLabel> kept_modes_;
};

/// Literal composition of single-mode fermionic traces over `traced_modes`,
/// applied in the given order (last element first). Each single-mode trace keeps
/// terms with s_mu = r_mu and multiplies by (-1)^{s_mu sum_{nu<mu} s_nu + r_mu sum_{nu<mu} r_nu},
/// the sums running over modes still present.
ReducedDensityMatrix partial_trace(const SparseDensityOperator& rho, std::span<const int> traced_modes);

/// Same map as above specialized to rho = |Psi><Psi|: determinants are grouped
/// by their occupations on the traced modes, O(T) per call.
ReducedDensityMatrix reduce_pure_state(const SparsePureState& state, std::span<const int> kept_modes);

/// Two-orbital state over modes (2L-1, 2L, 2R-1, 2R), L < R (orbitals 1-based).
ReducedDensityMatrix orbital_pair_state(const SparsePureState& state, int left_orbital, int right_orbital);
ReducedDensityMatrix orbital_state(const SparsePureState& state, int orbital);

/// Fermionic partial trace of a dense reduced state over some of its kept modes
/// (global mode indices).
ReducedDensityMatrix partial_trace(const ReducedDensityMatrix& rho, std::span<const int> traced_modes);

/// Local superselection projection. Kept modes are grouped into consecutive
/// pairs, one pair per orbital; coherences whose ket and bra differ in local
/// parity (or local particle number) on any orbital are removed.
ReducedDensityMatrix project_local_ssr(const ReducedDensityMatrix& rho, SsrKind kind);
SparseDensityOperator project_local_ssr(const SparseDensityOperator& rho, SsrKind kind);

struct SectorWeight {
  std::vector<int> sector;  // per-orbital parity (0/1) or particle number (0/1/2)
  double weight = 0.0;
};

/// Weights of the joint local sectors of a pure state.
struct SectorWeights {
  std::vector<SectorWeight> sectors;

  double total() const noexcept;
  /// Shannon entropy in bits; equals S(project_local_ssr(|Psi><Psi|)).
  double entropy_bits() const;
};

SectorWeights sector_weights(const SparsePureState& state, SsrKind kind);

/// Hermitian eigenvalues with values in [-1e-9, 0) clamped to zero. Throws
/// NumericalConsistencyError below -1e-9.
Eigen::VectorXd density_spectrum(const ComplexMatrix& rho);

}  // namespace orbcorr
