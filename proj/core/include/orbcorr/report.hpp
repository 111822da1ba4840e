#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orbcorr/measures.hpp"

namespace orbcorr {

enum class SideSelection { left, right, both };

SideSelection parse_side_selection(std::string_view text);

/// Which orbital pairs to analyse: all pairs inside an optional orbital window
/// (frozen orbitals are excluded by choosing the window), or an explicit list.
struct PairSelection {
  std::vector<std::pair<int, int>> explicit_pairs;  // empty means all
  std::optional<std::pair<int, int>> window;        // inclusive orbital range

  /// "all" or a list like "(3,6),(2,5)".
  static PairSelection parse(std::string_view text);
  std::vector<std::pair<int, int>> resolve(int n_orbitals) const;
};

struct ReportOptions {
  std::vector<SsrKind> ssrs{SsrKind::parity, SsrKind::number};
  PairSelection pairs;
  SideSelection sides = SideSelection::both;
  MultiStartOptions optimizer;
  int threads = 1;
};

/// Thresholds shared by the report and its flags.
inline constexpr double kNegativityZero = 1e-9;
inline constexpr double kDiscordFlagThreshold = 1e-4;

/// One pair under one superselection rule. C/D are empty for ssr none and for
/// sides that were not requested.
struct SsrRow {
  SsrKind ssr = SsrKind::none;
  double mutual_information = 0.0;
  double mutual_information_percent = 0.0;  // 100 * I_Q / I_none
  std::optional<double> classical_left, classical_right;
  std::optional<double> discord_left, discord_right;
  double negativity = 0.0;           // raw fermionic E
  double qubit_negativity = 0.0;     // raw qubit-style E
  double negativity_percent = 0.0;   // 100 * E_Q / E_none on reported values
  bool discord_without_entanglement = false;
  bool qubit_underestimates = false;
  std::optional<OptimizerDiagnostics> optimizer_left, optimizer_right;

  bool converged() const noexcept;
  /// E as printed: values below 1e-9 become exactly 0.
  double reported_negativity() const noexcept;
};

struct CorrelationReport {
  int left = 0;
  int right = 0;
  std::vector<SsrRow> rows;
};

/// Pairwise matrix for one measure and rule. I and E are symmetric; C and D are
/// directed with row = measured orbital. Uncomputed pairs hold NaN.
struct HeatmapMatrix {
  std::string measure;
  SsrKind ssr = SsrKind::none;
  std::vector<int> orbitals;
  std::vector<std::vector<double>> values;
};

struct ReportResult {
  int n_orbitals = 0;
  std::vector<CorrelationReport> pairs;
  std::vector<HeatmapMatrix> heatmaps;

  bool all_converged() const noexcept;
};

/// Row for one pair; exposed for direct use on hand-built two-orbital states.
CorrelationReport analyse_pair(const ReducedDensityMatrix& rho_lr, int left, int right, const ReportOptions& options);

ReportResult run_report(const SparsePureState& state, const ReportOptions& options);

std::vector<HeatmapMatrix> build_heatmaps(const ReportResult& result, std::span<const SsrKind> ssrs);

inline constexpr std::string_view kCsvHeader =
    "pair,ssr,I,I_fraction_vs_none,C_left,C_right,D_left,D_right,E,E_fraction_vs_none,"
    "discord_without_entanglement_flag";

std::string report_csv(const ReportResult& result);
std::string report_json(const ReportResult& result);
ReportResult parse_report_json(std::string_view text);
/// Fixed-width table with C and D as percentages of the projected I.
std::string report_table(const ReportResult& result);
std::string heatmap_csv(const HeatmapMatrix& heatmap);

struct EntropyCost {
  SsrKind ssr = SsrKind::none;
  double bits = 0.0;
  std::size_t sectors = 0;
};

/// S(rho^Q) - S(rho) for a pure state: the Shannon entropy of the sector weights.
std::vector<EntropyCost> run_entropy_cost(const SparsePureState& state, std::span<const SsrKind> ssrs);

}  // namespace orbcorr
