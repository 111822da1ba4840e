#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orbcorr {

using Complex = std::complex<double>;

enum class Spin { up, down };

/// One spin-orbital. Mode index mu = 2k-1 for spin up and 2k for spin down
/// of spatial orbital k (all 1-based).
struct ModeLabel {
  int orbital_index = 1;
  Spin spin = Spin::up;
  std::string symmetry_tag;

  int mode_index() const noexcept { return 2 * orbital_index - (spin == Spin::up ? 1 : 0); }

  static ModeLabel from_mode(int mode, std::string symmetry_tag = {});

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

std::vector<ModeLabel> default_mode_labels(int n_modes);

/// Occupation bitstring over `width` ordered fermionic modes (width <= 64).
/// Mode mu (1-based) is stored in bit mu-1; the printed form lists mode 1 first.
class OccupationPattern {
 public:
  static constexpr int kMaxModes = 64;

  OccupationPattern() = default;
  OccupationPattern(int width, std::uint64_t bits);

  /// Parses "1100"-style strings; character i is mode i+1.
  static OccupationPattern from_string(std::string_view text);

  int width() const noexcept { return width_; }
  std::uint64_t bits() const noexcept { return bits_; }
  int particle_count() const noexcept;

  bool occupied(int mode) const;
  /// Number of occupied modes with index strictly below `mode`.
  int count_below(int mode) const;
  OccupationPattern with_mode(int mode, bool occupied) const;

  std::string to_string() const;

  friend auto operator<=>(const OccupationPattern&, const OccupationPattern&) = default;

 private:
  void check_mode(int mode) const;

  int width_ = 0;
  std::uint64_t bits_ = 0;
};

/// Outcome of a single creation/annihilation: `result` is empty when the action vanishes.
struct SignedBitOp {
  std::optional<OccupationPattern> result;
  int sign = 1;

  explicit operator bool() const noexcept { return result.has_value(); }
};

/// f_mu^dag |p>, with the Jordan-Wigner sign (-1)^{sum_{nu<mu} p_nu}.
SignedBitOp apply_creation(const OccupationPattern& p, int mode);
/// f_mu |p>, same sign rule.
SignedBitOp apply_annihilation(const OccupationPattern& p, int mode);

enum class OpKind { create, annihilate };

struct FermionOp {
  OpKind kind;
  int mode;
};

struct Determinant {
  OccupationPattern pattern;
  Complex amplitude;
};

/// Fixed-N pure state as a list of distinct determinants.
class SparsePureState {
 public:
  SparsePureState() = default;
  /// Throws ValidationError on duplicate patterns, mixed widths or mixed particle counts.
  SparsePureState(std::vector<Determinant> entries, std::vector<ModeLabel> mode_labels = {});

  /// Same as the constructor, then rescales amplitudes to unit norm.
  static SparsePureState normalized(std::vector<Determinant> entries,
                                    std::vector<ModeLabel> mode_labels = {});

  const std::vector<Determinant>& entries() const noexcept { return entries_; }
  const std::vector<ModeLabel>& mode_labels() const noexcept { return mode_labels_; }
  int n_modes() const noexcept { return n_modes_; }
  int particle_count() const noexcept { return particle_count_; }
  double norm_squared() const noexcept;
  bool is_normalized(double tol = 1e-10) const noexcept;

  /// <p|Psi>, zero if p is absent.
  Complex amplitude(const OccupationPattern& p) const;

 private:
  std::vector<Determinant> entries_;
  std::vector<ModeLabel> mode_labels_;
  int n_modes_ = 0;
  int particle_count_ = 0;
};

struct Triplet {
  Complex value;
  OccupationPattern ket;
  OccupationPattern bra;
};

/// rho = sum value |ket><bra| stored as triplets.
class SparseDensityOperator {
 public:
  SparseDensityOperator() = default;
  SparseDensityOperator(std::vector<Triplet> triplets, std::vector<ModeLabel> mode_labels);

  const std::vector<Triplet>& triplets() const noexcept { return triplets_; }
  const std::vector<ModeLabel>& mode_labels() const noexcept { return mode_labels_; }
  int n_modes() const noexcept { return static_cast<int>(mode_labels_.size()); }

  Complex trace() const noexcept;
  /// Every (v, s, r) has a partner (conj(v), r, s) within `tol`.
  bool is_hermitian(double tol = 1e-10) const;

 private:
  std::vector<Triplet> triplets_;
  std::vector<ModeLabel> mode_labels_;
};

/// |Psi><Psi| as all pairwise amplitude products. Throws ValidationError if not normalized.
SparseDensityOperator outer_product(const SparsePureState& state);

/// <Psi| O |Psi> for O = ops[0] ops[1] ... ops[k-1] (the last op acts first).
Complex expectation_of_operator_string(const SparsePureState& state, std::span<const FermionOp> ops);

}  // namespace orbcorr
