#pragma once

// Brute-force reference implementations used only by the tests. Nothing here
// calls into the reduction, measures or negativity modules.

#include <Eigen/Dense>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "orbcorr/fock.hpp"
#include "orbcorr/reduction.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec4 = Eigen::Vector4cd;
using orbcorr::Complex;

// Jordan-Wigner annihilator for position p (0-based) of m modes; dense index
// bit (m-1-p) holds position p and the string runs over positions q < p.
Mat annihilator(int p, int m);
Mat creator(int p, int m);

// |Psi><Psi| on all modes of the state, mode 1 most significant.
Mat dense_density(const orbcorr::SparsePureState& state);

// sigma(t,t') = tr(rho C(t') P_vac C(t)^dag) over the kept positions.
Mat reduce_dense(const Mat& rho, int m, const std::vector<int>& keep_positions);

// Same element formula evaluated with fock-core operator strings on a pure state.
Mat reduce_via_operator_strings(const orbcorr::SparsePureState& state, const std::vector<int>& kept_modes);

double entropy(const Mat& rho);

// Local superselection projection of a 2-orbital 16x16 matrix.
Mat project_pair(const Mat& rho16, orbcorr::SsrKind kind);

// Marginal of one orbital of a 16x16 state (left = positions 0,1).
Mat orbital_marginal(const Mat& rho16, bool left);

double mutual_information(const Mat& rho16, orbcorr::SsrKind kind);

std::array<Vec4, 4> parity_basis(double t1, double p1, double t2, double p2);
std::array<Vec4, 4> number_basis(double t, double p);

// p_k S(sigma_k) for one outcome, conditional state obtained by projecting and
// reducing densely.
double outcome_term(const Mat& rho16, const Vec4& phi, bool measure_right);

struct GridMinimum {
  double value = 0.0;
  std::array<double, 4> angles{};
};

// Minimum over the measurement family of sum_k p_k S(sigma_k): coarse n x n
// grids followed by local zoom refinement. The parity family separates into
// two independent 2D problems.
GridMinimum grid_min_conditional_entropy(const Mat& rho16, orbcorr::SsrKind kind, bool measure_right, int n = 200);

struct GridCorrelations {
  double mutual_information = 0.0;
  double classical = 0.0;
  double discord = 0.0;
};

// Projects, then evaluates I, C and D with the grid minimum.
GridCorrelations grid_correlations(const Mat& rho16, orbcorr::SsrKind kind, bool measure_right, int n = 200);

// Sum of singular values via the eigenvalues of [[0, M], [M^dag, 0]].
double trace_norm_dilation(const Mat& m);

// Phase-decorated partial transpose followed by conjugation with
// (f_3 + f_3^dag)(f_4 + f_4^dag), built from the dense Jordan-Wigner matrices.
Mat fermionic_partial_transpose(const Mat& rho16);
Mat qubit_partial_transpose(const Mat& rho16);

double fermionic_log_negativity(const Mat& rho16, orbcorr::SsrKind kind);

// Random fixed-particle-number state with complex Gaussian amplitudes; each
// determinant is kept with probability `density` (at least one is kept).
orbcorr::SparsePureState random_state(int n_modes, int n_particles, std::mt19937_64& rng, double density = 1.0,
                                      bool complex_amplitudes = true);

// Random mixed state on m modes, rank r, commuting with total particle number
// when `fixed_n` is set.
Mat random_mixed(int m, int rank, std::mt19937_64& rng, bool fixed_n);

// l1|1100> + l2|1001> + l3|0110> + l4|0011> on two orbitals, normalized.
orbcorr::SparsePureState four_config_state(std::array<double, 4> lambda);

// Deterministic CISD-shaped CIVEC text: closed-shell reference on the lowest
// modes, all spin-conserving singles and doubles with decaying random
// coefficients.
std::string synthetic_cisd_text(int n_orbitals, int n_electrons, std::uint64_t seed);

}  // namespace oracle
