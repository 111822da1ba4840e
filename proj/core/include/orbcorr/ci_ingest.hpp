#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbcorr/fock.hpp"

namespace orbcorr {

// CIVEC text format, one record per line ('#' starts a comment):
//
//   CIVEC 1
//   modes <2n> electrons <n_e>
//   terms <count>                                   (optional)
//   mode <mu> orbital <k> spin <u|d> sym <tag>      (optional, any number)
//   ref <bitstring> <c>
//   single i=<mu> a=<mu> c=<float>
//   double i=<mu> j=<mu> a=<mu> b=<mu> c=<float>
//   det <bitstring> <float>
//
// Excitation-labeled files (ref + single/double) and determinant files (det)
// cannot be mixed. A ref line may accompany det lines; it is then treated as
// one more explicit determinant.

enum class TermKind { reference, single, double_excitation, determinant };

struct CITerm {
  TermKind kind = TermKind::determinant;
  // 1-based mode indices; i > j and a > b for doubles.
  int i = 0;
  int j = 0;
  int a = 0;
  int b = 0;
  OccupationPattern pattern;  // reference and determinant kinds
  double coefficient = 0.0;
};

struct CIVector {
  int n_modes = 0;
  int n_electrons = 0;
  std::vector<ModeLabel> mode_labels;
  bool explicit_labels = false;
  std::vector<CITerm> terms;

  const CITerm* reference() const noexcept;
  bool is_excitation_labeled() const noexcept;
  /// sqrt(sum of squared coefficients).
  double normalization() const noexcept;
};

/// Throws ParseError (with line number) on malformed text and ValidationError
/// on structurally invalid content.
CIVector parse_civec(std::string_view text);
CIVector load_civec_file(const std::filesystem::path& path);

/// Canonical text form; parse_civec(serialize_civec(v)) reproduces v and
/// serialize_civec(parse_civec(t)) == t for canonical t.
std::string serialize_civec(const CIVector& civ);

/// Amplitude-cutoff below which normalized terms are dropped.
inline constexpr double kAmplitudeCutoff = 1e-12;

/// Maps every term to a determinant with the excitation sign convention and
/// normalizes. Throws ValidationError for out-of-range or inconsistent excitations.
SparsePureState build_state(const CIVector& civ);

/// Determinant reached by an excitation term from `reference`, or empty if the
/// excitation is not allowed (occupied target or empty source).
std::optional<OccupationPattern> excited_pattern(const OccupationPattern& reference, const CITerm& term);

/// (-1)^{n_e - i} for singles and (-1)^{i + j} for doubles; valid only when the
/// reference occupies modes 1..n_e.
int excitation_sign_closed_form(const CITerm& term, int n_electrons);

/// Sign obtained by applying f_a^dag f_i (single) or f_a^dag f_b^dag f_i f_j
/// (double) to the reference with fock-core. Throws ValidationError if the
/// action vanishes.
int excitation_sign_literal(const OccupationPattern& reference, const CITerm& term);

bool is_contiguous_reference(const OccupationPattern& reference) noexcept;

}  // namespace orbcorr
