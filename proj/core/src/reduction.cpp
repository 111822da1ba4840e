#include "orbcorr/reduction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

#include "orbcorr/errors.hpp"

namespace orbcorr {

namespace {

constexpr double kNegativeEigenvalueFloor = -1e-9;

std::uint64_t mode_bit(int mode) { return std::uint64_t{1} << (mode - 1); }
std::uint64_t below_mask(int mode) { return mode_bit(mode) - 1; }

std::uint64_t full_mask(int n_modes) {
  return n_modes >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_modes) - 1;
}

// Dense index of the kept-mode occupations of `bits`; kept[0] is the most significant bit.
Eigen::Index dense_index(std::uint64_t bits, std::span<const int> kept) {
  Eigen::Index idx = 0;
  for (int mode : kept) idx = (idx << 1) | static_cast<Eigen::Index>((bits >> (mode - 1)) & 1U);
  return idx;
}

void check_mode_set(std::span<const int> modes, int n_modes, const char* what) {
  std::uint64_t seen = 0;
  for (int mode : modes) {
    if (mode < 1 || mode > n_modes)
      throw ArgumentError(std::string(what) + ": mode " + std::to_string(mode) + " outside [1, " +
                          std::to_string(n_modes) + "]");
    if (seen & mode_bit(mode)) throw ArgumentError(std::string(what) + ": repeated mode " + std::to_string(mode));
    seen |= mode_bit(mode);
  }
}

// Sign of tracing `traced` (last element first) out of |s><r|; 0 if the term vanishes.
int trace_sign(std::uint64_t s, std::uint64_t r, std::uint64_t present, std::span<const int> traced) {
  int sign = 1;
  for (auto it = traced.rbegin(); it != traced.rend(); ++it) {
    const int mode = *it;
    const std::uint64_t bit = mode_bit(mode);
    const bool s_occ = s & bit;
    const bool r_occ = r & bit;
    if (s_occ != r_occ) return 0;
    const std::uint64_t lower = present & below_mask(mode);
    const int k = (s_occ ? std::popcount(s & lower) : 0) + (r_occ ? std::popcount(r & lower) : 0);
    if (k % 2) sign = -sign;
    present &= ~bit;
  }
  return sign;
}

std::vector<ModeLabel> select_labels(const std::vector<ModeLabel>& labels, std::span<const int> modes) {
  std::vector<ModeLabel> out;
  out.reserve(modes.size());
  for (int mode : modes) out.push_back(labels[static_cast<std::size_t>(mode - 1)]);
  return out;
}

int local_sector(int n_up, int n_down, SsrKind kind) {
  const int n = n_up + n_down;
  return kind == SsrKind::parity ? n % 2 : n;
}

}  // namespace

std::string to_string(SsrKind kind) {
  switch (kind) {
    case SsrKind::none:
      return "none";
    case SsrKind::parity:
      return "parity";
    case SsrKind::number:
      return "number";
  }
  return "none";
}

SsrKind parse_ssr_kind(std::string_view text) {
  if (text == "none") return SsrKind::none;
  if (text == "parity" || text == "P") return SsrKind::parity;
  if (text == "number" || text == "N") return SsrKind::number;
  throw ArgumentError("unknown superselection rule '" + std::string(text) + "'");
}

ReducedDensityMatrix::ReducedDensityMatrix(ComplexMatrix matrix, std::vector<ModeLabel> kept_modes)
    : matrix_(std::move(matrix)), kept_modes_(std::move(kept_modes)) {
  const Eigen::Index expected = Eigen::Index{1} << kept_modes_.size();
  if (matrix_.rows() != expected || matrix_.cols() != expected)
    throw ArgumentError("reduced density matrix must be " + std::to_string(expected) + "x" +
                        std::to_string(expected) + " for " + std::to_string(kept_modes_.size()) + " modes");
  for (std::size_t p = 1; p < kept_modes_.size(); ++p)
    if (kept_modes_[p].mode_index() <= kept_modes_[p - 1].mode_index())
      throw ArgumentError("kept modes must be in ascending mode order");
}

bool ReducedDensityMatrix::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

ReducedDensityMatrix partial_trace(const SparseDensityOperator& rho, std::span<const int> traced_modes) {
  const int n = rho.n_modes();
  check_mode_set(traced_modes, n, "partial_trace");
  std::uint64_t traced_mask = 0;
  for (int mode : traced_modes) traced_mask |= mode_bit(mode);
  std::vector<int> kept;
  for (int mode = 1; mode <= n; ++mode)
    if (!(traced_mask & mode_bit(mode))) kept.push_back(mode);

  const Eigen::Index dim = Eigen::Index{1} << kept.size();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& t : rho.triplets()) {
    const int sign = trace_sign(t.ket.bits(), t.bra.bits(), full_mask(n), traced_modes);
    if (sign == 0) continue;
    out(dense_index(t.ket.bits(), kept), dense_index(t.bra.bits(), kept)) += static_cast<double>(sign) * t.value;
  }
  return ReducedDensityMatrix(std::move(out), select_labels(rho.mode_labels(), kept));
}

ReducedDensityMatrix reduce_pure_state(const SparsePureState& state, std::span<const int> kept_modes) {
  const int n = state.n_modes();
  check_mode_set(kept_modes, n, "reduce_pure_state");
  if (!std::is_sorted(kept_modes.begin(), kept_modes.end()))
    throw ArgumentError("reduce_pure_state: kept modes must be ascending");
  if (kept_modes.size() > 16) throw ArgumentError("reduce_pure_state: at most 16 kept modes");

  std::uint64_t kept_mask = 0;
  for (int mode : kept_modes) kept_mask |= mode_bit(mode);
  const std::uint64_t traced_mask = full_mask(n) & ~kept_mask;
  const Eigen::Index dim = Eigen::Index{1} << kept_modes.size();

  // Group by traced substring: sigma = sum_g v_g v_g^dag with v_g[t] = sum eps_s lambda_s.
  // eps_s counts (kept k, traced mu) occupied pairs with k < mu.
  std::unordered_map<std::uint64_t, Eigen::VectorXcd> groups;
  groups.reserve(state.entries().size());
  for (const auto& d : state.entries()) {
    const std::uint64_t bits = d.pattern.bits();
    const std::uint64_t key = bits & traced_mask;
    int crossings = 0;
    for (int mode : kept_modes)
      if (bits & mode_bit(mode)) crossings += std::popcount(key & ~below_mask(mode) & ~mode_bit(mode));
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) it->second = Eigen::VectorXcd::Zero(dim);
    it->second(dense_index(bits, kept_modes)) += (crossings % 2 ? -1.0 : 1.0) * d.amplitude;
  }

  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& [key, v] : groups) out.noalias() += v * v.adjoint();
  return ReducedDensityMatrix(std::move(out), select_labels(state.mode_labels(), kept_modes));
}

ReducedDensityMatrix orbital_pair_state(const SparsePureState& state, int left_orbital, int right_orbital) {
  if (left_orbital >= right_orbital) throw ArgumentError("orbital pair must satisfy L < R");
  if (left_orbital < 1 || 2 * right_orbital > state.n_modes())
    throw ArgumentError("orbital pair (" + std::to_string(left_orbital) + "," + std::to_string(right_orbital) +
                        ") outside the orbital range");
  const int kept[4] = {2 * left_orbital - 1, 2 * left_orbital, 2 * right_orbital - 1, 2 * right_orbital};
  return reduce_pure_state(state, kept);
}

ReducedDensityMatrix orbital_state(const SparsePureState& state, int orbital) {
  if (orbital < 1 || 2 * orbital > state.n_modes())
    throw ArgumentError("orbital " + std::to_string(orbital) + " outside the orbital range");
  const int kept[2] = {2 * orbital - 1, 2 * orbital};
  return reduce_pure_state(state, kept);
}

ReducedDensityMatrix partial_trace(const ReducedDensityMatrix& rho, std::span<const int> traced_modes) {
  const int m = rho.mode_count();
  // Translate global mode indices to local positions 1..m.
  std::vector<int> local_traced;
  local_traced.reserve(traced_modes.size());
  for (int mode : traced_modes) {
    int local = 0;
    for (int p = 0; p < m; ++p)
      if (rho.kept_modes()[static_cast<std::size_t>(p)].mode_index() == mode) local = p + 1;
    if (local == 0) throw ArgumentError("partial_trace: mode " + std::to_string(mode) + " is not kept");
    local_traced.push_back(local);
  }
  check_mode_set(local_traced, m, "partial_trace");

  std::uint64_t traced_mask = 0;
  for (int local : local_traced) traced_mask |= mode_bit(local);
  std::vector<int> remaining;
  std::vector<ModeLabel> labels;
  for (int p = 1; p <= m; ++p) {
    if (!(traced_mask & mode_bit(p))) {
      remaining.push_back(p);
      labels.push_back(rho.kept_modes()[static_cast<std::size_t>(p - 1)]);
    }
  }

  // Dense index -> local bits (local mode p at bit p-1).
  auto to_bits = [m](Eigen::Index idx) {
    std::uint64_t bits = 0;
    for (int p = 1; p <= m; ++p)
      if ((idx >> (m - p)) & 1) bits |= mode_bit(p);
    return bits;
  };

  const Eigen::Index dim = rho.dimension();
  const Eigen::Index out_dim = Eigen::Index{1} << remaining.size();
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::uint64_t s = to_bits(i);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Complex v = rho.matrix()(i, j);
      if (v == Complex{}) continue;
      const std::uint64_t r = to_bits(j);
      const int sign = trace_sign(s, r, full_mask(m), local_traced);
      if (sign == 0) continue;
      out(dense_index(s, remaining), dense_index(r, remaining)) += static_cast<double>(sign) * v;
    }
  }
  return ReducedDensityMatrix(std::move(out), std::move(labels));
}

ReducedDensityMatrix project_local_ssr(const ReducedDensityMatrix& rho, SsrKind kind) {
  const int m = rho.mode_count();
  if (m % 2 != 0) throw ArgumentError("local SSR projection needs whole orbitals (even mode count)");
  for (int q = 0; q < m; q += 2) {
    const auto& a = rho.kept_modes()[static_cast<std::size_t>(q)];
    const auto& b = rho.kept_modes()[static_cast<std::size_t>(q + 1)];
    if (a.orbital_index != b.orbital_index)
      throw ArgumentError("kept modes " + std::to_string(a.mode_index()) + "," + std::to_string(b.mode_index()) +
                          " do not form one orbital");
  }
  if (kind == SsrKind::none) return rho;

  const Eigen::Index dim = rho.dimension();
  std::vector<std::vector<int>> sectors(static_cast<std::size_t>(dim));
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    auto& sec = sectors[static_cast<std::size_t>(idx)];
    for (int q = 0; q < m; q += 2) {
      const int up = static_cast<int>((idx >> (m - 1 - q)) & 1);
      const int down = static_cast<int>((idx >> (m - 2 - q)) & 1);
      sec.push_back(local_sector(up, down, kind));
    }
  }
  ComplexMatrix out = rho.matrix();
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      if (sectors[static_cast<std::size_t>(i)] != sectors[static_cast<std::size_t>(j)]) out(i, j) = 0.0;
  return ReducedDensityMatrix(std::move(out), rho.kept_modes());
}

namespace {

std::vector<int> pattern_sectors(std::uint64_t bits, int n_modes, SsrKind kind) {
  std::vector<int> sec;
  sec.reserve(static_cast<std::size_t>(n_modes / 2));
  for (int mode = 1; mode < n_modes; mode += 2) {
    const int up = static_cast<int>((bits >> (mode - 1)) & 1U);
    const int down = static_cast<int>((bits >> mode) & 1U);
    sec.push_back(local_sector(up, down, kind));
  }
  return sec;
}

}  // namespace

SparseDensityOperator project_local_ssr(const SparseDensityOperator& rho, SsrKind kind) {
  const int n = rho.n_modes();
  if (n % 2 != 0) throw ArgumentError("local SSR projection needs whole orbitals (even mode count)");
  if (kind == SsrKind::none) return rho;
  std::vector<Triplet> kept;
  for (const auto& t : rho.triplets())
    if (pattern_sectors(t.ket.bits(), n, kind) == pattern_sectors(t.bra.bits(), n, kind)) kept.push_back(t);
  return SparseDensityOperator(std::move(kept), rho.mode_labels());
}

double SectorWeights::total() const noexcept {
  double sum = 0.0;
  for (const auto& s : sectors) sum += s.weight;
  return sum;
}

double SectorWeights::entropy_bits() const {
  double h = 0.0;
  for (const auto& s : sectors)
    if (s.weight > 0.0) h -= s.weight * std::log2(s.weight);
  return std::max(0.0, h);
}

SectorWeights sector_weights(const SparsePureState& state, SsrKind kind) {
  const int n = state.n_modes();
  if (n % 2 != 0) throw ArgumentError("sector weights need whole orbitals (even mode count)");
  std::map<std::vector<int>, double> weights;
  for (const auto& d : state.entries()) {
    std::vector<int> key = kind == SsrKind::none ? std::vector<int>{} : pattern_sectors(d.pattern.bits(), n, kind);
    weights[std::move(key)] += std::norm(d.amplitude);
  }
  SectorWeights out;
  for (auto& [sector, w] : weights) out.sectors.push_back({sector, w});
  return out;
}

Eigen::VectorXd density_spectrum(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalConsistencyError("eigenvalue solver failed");
  Eigen::VectorXd values = solver.eigenvalues();
  for (auto& v : values) {
    if (v < kNegativeEigenvalueFloor)
      throw NumericalConsistencyError("density matrix eigenvalue " + std::to_string(v) + " below -1e-9");
    if (v < 0.0) v = 0.0;
  }
  return values;
}

}  // namespace orbcorr
