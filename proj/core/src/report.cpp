#include "orbcorr/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "orbcorr/errors.hpp"
#include "orbcorr/negativity.hpp"

namespace orbcorr {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

double percent_of(double part, double whole) { return whole > 0.0 ? 100.0 * part / whole : 0.0; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json diagnostics_json(const std::optional<OptimizerDiagnostics>& d) {
  if (!d) return nullptr;
  return {{"restarts", d->restarts},
          {"converged_restarts", d->converged_restarts},
          {"evaluations", d->evaluations},
          {"best_objective", d->best_objective},
          {"converged", d->converged}};
}

std::optional<OptimizerDiagnostics> diagnostics_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  OptimizerDiagnostics d;
  d.restarts = j.at("restarts").get<int>();
  d.converged_restarts = j.at("converged_restarts").get<int>();
  d.evaluations = j.at("evaluations").get<int>();
  d.best_objective = j.at("best_objective").get<double>();
  d.converged = j.at("converged").get<bool>();
  return d;
}

double number_or_nan(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

SideSelection parse_side_selection(std::string_view text) {
  if (text == "left") return SideSelection::left;
  if (text == "right") return SideSelection::right;
  if (text == "both") return SideSelection::both;
  throw ArgumentError("sides must be left, right or both, got '" + std::string(text) + "'");
}

PairSelection PairSelection::parse(std::string_view text) {
  PairSelection sel;
  if (text == "all") return sel;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == ',')) ++pos;
  };
  auto read_int = [&]() {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{}) throw ArgumentError("bad pair list '" + std::string(text) + "'");
    pos = static_cast<std::size_t>(ptr - text.data());
    return value;
  };
  skip_space();
  while (pos < text.size()) {
    if (text[pos] != '(') throw ArgumentError("bad pair list '" + std::string(text) + "', expected '('");
    ++pos;
    const int a = read_int();
    if (pos >= text.size() || text[pos] != ',') throw ArgumentError("bad pair list '" + std::string(text) + "'");
    ++pos;
    const int b = read_int();
    if (pos >= text.size() || text[pos] != ')') throw ArgumentError("bad pair list '" + std::string(text) + "'");
    ++pos;
    sel.explicit_pairs.emplace_back(a, b);
    skip_space();
  }
  if (sel.explicit_pairs.empty()) throw ArgumentError("empty pair list");
  return sel;
}

std::vector<std::pair<int, int>> PairSelection::resolve(int n_orbitals) const {
  int lo = 1, hi = n_orbitals;
  if (window) {
    lo = window->first;
    hi = window->second;
    if (lo < 1 || hi > n_orbitals || lo > hi)
      throw ArgumentError("orbital window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] outside 1.." + std::to_string(n_orbitals));
  }
  std::vector<std::pair<int, int>> out;
  if (explicit_pairs.empty()) {
    for (int l = lo; l <= hi; ++l)
      for (int r = l + 1; r <= hi; ++r) out.emplace_back(l, r);
    return out;
  }
  for (auto [l, r] : explicit_pairs) {
    if (l > r) std::swap(l, r);
    if (l == r || l < lo || r > hi)
      throw ArgumentError("pair (" + std::to_string(l) + "," + std::to_string(r) + ") outside orbitals " +
                          std::to_string(lo) + ".." + std::to_string(hi));
    out.emplace_back(l, r);
  }
  return out;
}

bool SsrRow::converged() const noexcept {
  return (!optimizer_left || optimizer_left->converged) && (!optimizer_right || optimizer_right->converged);
}

double SsrRow::reported_negativity() const noexcept { return negativity < kNegativityZero ? 0.0 : negativity; }

bool ReportResult::all_converged() const noexcept {
  for (const auto& p : pairs)
    for (const auto& row : p.rows)
      if (!row.converged()) return false;
  return true;
}

CorrelationReport analyse_pair(const ReducedDensityMatrix& rho_lr, int left, int right, const ReportOptions& options) {
  CorrelationReport report{left, right, {}};
  const double i_none = mutual_information(rho_lr, SsrKind::none);
  const double e_none = fermionic_log_negativity(rho_lr, SsrKind::none);
  const double e_none_reported = e_none < kNegativityZero ? 0.0 : e_none;

  for (SsrKind ssr : options.ssrs) {
    SsrRow row;
    row.ssr = ssr;
    row.mutual_information = ssr == SsrKind::none ? i_none : mutual_information(rho_lr, ssr);
    row.mutual_information_percent = percent_of(row.mutual_information, i_none);
    row.negativity = ssr == SsrKind::none ? e_none : fermionic_log_negativity(rho_lr, ssr);
    row.qubit_negativity = qubit_log_negativity(rho_lr, ssr);
    row.negativity_percent = percent_of(row.reported_negativity(), e_none_reported);
    row.qubit_underestimates = row.negativity >= kNegativityZero && row.qubit_negativity < kNegativityZero;

    if (ssr != SsrKind::none) {
      auto run_side = [&](Side side) {
        const Discord d = quantum_discord(rho_lr, ssr, side, options.optimizer);
        (side == Side::left ? row.classical_left : row.classical_right) = d.classical.value;
        (side == Side::left ? row.discord_left : row.discord_right) = d.value;
        (side == Side::left ? row.optimizer_left : row.optimizer_right) = d.classical.diagnostics;
      };
      if (options.sides != SideSelection::right) run_side(Side::left);
      if (options.sides != SideSelection::left) run_side(Side::right);
      const double d_max = std::max(row.discord_left.value_or(-1.0), row.discord_right.value_or(-1.0));
      row.discord_without_entanglement = d_max > kDiscordFlagThreshold && row.negativity < kNegativityZero;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

ReportResult run_report(const SparsePureState& state, const ReportOptions& options) {
  if (options.ssrs.empty()) throw ArgumentError("at least one superselection rule is required");
  if (state.n_modes() % 2 != 0) throw ValidationError("mode count must be even");
  ReportResult result;
  result.n_orbitals = state.n_modes() / 2;
  const auto pairs = options.pairs.resolve(result.n_orbitals);
  result.pairs.resize(pairs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < pairs.size(); k = next++) {
      try {
        const auto [l, r] = pairs[k];
        result.pairs[k] = analyse_pair(orbital_pair_state(state, l, r), l, r, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = pairs.size();
      }
    }
  };
  const int threads = std::clamp(options.threads, 1, std::max(1, static_cast<int>(pairs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.heatmaps = build_heatmaps(result, options.ssrs);
  return result;
}

std::vector<HeatmapMatrix> build_heatmaps(const ReportResult& result, std::span<const SsrKind> ssrs) {
  std::set<int> orbital_set;
  for (const auto& p : result.pairs) {
    orbital_set.insert(p.left);
    orbital_set.insert(p.right);
  }
  const std::vector<int> orbitals(orbital_set.begin(), orbital_set.end());
  std::map<int, std::size_t> index;
  for (std::size_t k = 0; k < orbitals.size(); ++k) index[orbitals[k]] = k;

  std::vector<HeatmapMatrix> maps;
  for (SsrKind ssr : ssrs) {
    for (const char* measure : {"I", "C", "D", "E"}) {
      HeatmapMatrix h{measure, ssr, orbitals, {}};
      h.values.assign(orbitals.size(), std::vector<double>(orbitals.size(), kNaN));
      for (std::size_t k = 0; k < orbitals.size(); ++k) h.values[k][k] = 0.0;
      const std::string m = measure;
      for (const auto& p : result.pairs) {
        for (const auto& row : p.rows) {
          if (row.ssr != ssr) continue;
          const std::size_t l = index[p.left], r = index[p.right];
          if (m == "I" || m == "E") {
            const double v = m == "I" ? row.mutual_information : row.reported_negativity();
            h.values[l][r] = h.values[r][l] = v;
          } else {
            const auto& left = m == "C" ? row.classical_left : row.discord_left;
            const auto& right = m == "C" ? row.classical_right : row.discord_right;
            if (left) h.values[l][r] = *left;
            if (right) h.values[r][l] = *right;
          }
        }
      }
      if ((m == "C" || m == "D") && ssr == SsrKind::none) continue;
      maps.push_back(std::move(h));
    }
  }
  return maps;
}

std::string report_csv(const ReportResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& p : result.pairs) {
    for (const auto& row : p.rows) {
      out += "\"(" + std::to_string(p.left) + "," + std::to_string(p.right) + ")\",";
      out += to_string(row.ssr) + ",";
      out += format_number(row.mutual_information) + ",";
      out += format_number(row.mutual_information_percent) + ",";
      out += format_optional(row.classical_left) + ",";
      out += format_optional(row.classical_right) + ",";
      out += format_optional(row.discord_left) + ",";
      out += format_optional(row.discord_right) + ",";
      out += format_number(row.reported_negativity()) + ",";
      out += format_number(row.negativity_percent) + ",";
      out += row.discord_without_entanglement ? "1" : "0";
      out += '\n';
    }
  }
  return out;
}

std::string report_json(const ReportResult& result) {
  json pairs = json::array();
  for (const auto& p : result.pairs) {
    json rows = json::array();
    for (const auto& row : p.rows) {
      rows.push_back({{"ssr", to_string(row.ssr)},
                      {"I", row.mutual_information},
                      {"I_fraction_vs_none", row.mutual_information_percent},
                      {"C_left", optional_json(row.classical_left)},
                      {"C_right", optional_json(row.classical_right)},
                      {"D_left", optional_json(row.discord_left)},
                      {"D_right", optional_json(row.discord_right)},
                      {"E", row.reported_negativity()},
                      {"E_raw", row.negativity},
                      {"E_qubit", row.qubit_negativity},
                      {"E_fraction_vs_none", row.negativity_percent},
                      {"discord_without_entanglement_flag", row.discord_without_entanglement},
                      {"qubit_underestimates_entanglement", row.qubit_underestimates},
                      {"converged", row.converged()},
                      {"optimizer", {{"left", diagnostics_json(row.optimizer_left)},
                                     {"right", diagnostics_json(row.optimizer_right)}}}});
    }
    pairs.push_back({{"pair", {p.left, p.right}}, {"rows", std::move(rows)}});
  }
  json heatmaps = json::array();
  for (const auto& h : result.heatmaps) {
    json values = json::array();
    for (const auto& r : h.values) {
      json row = json::array();
      for (double v : r) row.push_back(std::isnan(v) ? json(nullptr) : json(v));
      values.push_back(std::move(row));
    }
    heatmaps.push_back({{"measure", h.measure}, {"ssr", to_string(h.ssr)}, {"orbitals", h.orbitals}, {"values", values}});
  }
  json doc = {{"format", "orbcorr-report"},
              {"version", 1},
              {"n_orbitals", result.n_orbitals},
              {"pairs", std::move(pairs)},
              {"heatmaps", std::move(heatmaps)}};
  return doc.dump(2) + "\n";
}

ReportResult parse_report_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid report JSON: ") + e.what());
  }
  try {
    ReportResult result;
    result.n_orbitals = doc.at("n_orbitals").get<int>();
    for (const auto& p : doc.at("pairs")) {
      CorrelationReport report;
      report.left = p.at("pair").at(0).get<int>();
      report.right = p.at("pair").at(1).get<int>();
      for (const auto& r : p.at("rows")) {
        SsrRow row;
        row.ssr = parse_ssr_kind(r.at("ssr").get<std::string>());
        row.mutual_information = r.at("I").get<double>();
        row.mutual_information_percent = r.at("I_fraction_vs_none").get<double>();
        row.classical_left = optional_from(r.at("C_left"));
        row.classical_right = optional_from(r.at("C_right"));
        row.discord_left = optional_from(r.at("D_left"));
        row.discord_right = optional_from(r.at("D_right"));
        row.negativity = r.at("E_raw").get<double>();
        row.qubit_negativity = r.at("E_qubit").get<double>();
        row.negativity_percent = r.at("E_fraction_vs_none").get<double>();
        row.discord_without_entanglement = r.at("discord_without_entanglement_flag").get<bool>();
        row.qubit_underestimates = r.at("qubit_underestimates_entanglement").get<bool>();
        row.optimizer_left = diagnostics_from(r.at("optimizer").at("left"));
        row.optimizer_right = diagnostics_from(r.at("optimizer").at("right"));
        report.rows.push_back(std::move(row));
      }
      result.pairs.push_back(std::move(report));
    }
    for (const auto& h : doc.at("heatmaps")) {
      HeatmapMatrix m;
      m.measure = h.at("measure").get<std::string>();
      m.ssr = parse_ssr_kind(h.at("ssr").get<std::string>());
      m.orbitals = h.at("orbitals").get<std::vector<int>>();
      for (const auto& r : h.at("values")) {
        std::vector<double> row;
        for (const auto& v : r) row.push_back(number_or_nan(v));
        m.values.push_back(std::move(row));
      }
      result.heatmaps.push_back(std::move(m));
    }
    return result;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string report_table(const ReportResult& result) {
  std::set<SsrKind> present;
  for (const auto& p : result.pairs)
    for (const auto& row : p.rows) present.insert(row.ssr);

  auto pct = [](const std::optional<double>& part, double whole) -> std::string {
    if (!part) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", percent_of(*part, whole));
    return buf;
  };
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-8s %-10s", "(L,R)", "I");
  out += buf;
  for (SsrKind ssr : present) {
    if (ssr == SsrKind::none) continue;
    const char tag = ssr == SsrKind::parity ? 'P' : 'N';
    std::snprintf(buf, sizeof(buf), " | %-7s %-15s %-15s", (std::string("I_") + tag).c_str(),
                  (std::string("C_") + tag + "(L,R)").c_str(), (std::string("D_") + tag + "(L,R)").c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), " | %-10s", "E");
  out += buf;
  for (SsrKind ssr : present) {
    if (ssr == SsrKind::none) continue;
    std::snprintf(buf, sizeof(buf), " %-7s", ssr == SsrKind::parity ? "E_P" : "E_N");
    out += buf;
  }
  out += '\n';

  for (const auto& p : result.pairs) {
    const SsrRow* none_row = nullptr;
    for (const auto& row : p.rows)
      if (row.ssr == SsrKind::none) none_row = &row;
    std::snprintf(buf, sizeof(buf), "(%d,%d)", p.left, p.right);
    std::string label = buf;
    double i_none = none_row ? none_row->mutual_information : kNaN;
    double e_none = none_row ? none_row->reported_negativity() : kNaN;
    if (!none_row && !p.rows.empty()) {
      const auto& r0 = p.rows.front();
      i_none = r0.mutual_information_percent > 0.0 ? 100.0 * r0.mutual_information / r0.mutual_information_percent : 0.0;
      e_none = r0.negativity_percent > 0.0 ? 100.0 * r0.reported_negativity() / r0.negativity_percent : 0.0;
    }
    std::snprintf(buf, sizeof(buf), "%-8s %-10.3g", label.c_str(), i_none);
    out += buf;
    for (const auto& row : p.rows) {
      if (row.ssr == SsrKind::none) continue;
      const double iq = row.mutual_information;
      std::snprintf(buf, sizeof(buf), " | %-7s %-15s %-15s",
                    pct(row.mutual_information, i_none).c_str(),
                    (pct(row.classical_left, iq) + "," + pct(row.classical_right, iq)).c_str(),
                    (pct(row.discord_left, iq) + "," + pct(row.discord_right, iq)).c_str());
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), " | %-10.3g", e_none);
    out += buf;
    for (const auto& row : p.rows) {
      if (row.ssr == SsrKind::none) continue;
      std::snprintf(buf, sizeof(buf), " %-7s", pct(row.reported_negativity(), e_none).c_str());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string heatmap_csv(const HeatmapMatrix& heatmap) {
  std::string out = "orbital";
  for (int o : heatmap.orbitals) out += "," + std::to_string(o);
  out += '\n';
  for (std::size_t k = 0; k < heatmap.orbitals.size(); ++k) {
    out += std::to_string(heatmap.orbitals[k]);
    for (double v : heatmap.values[k]) out += "," + format_number(v);
    out += '\n';
  }
  return out;
}

std::vector<EntropyCost> run_entropy_cost(const SparsePureState& state, std::span<const SsrKind> ssrs) {
  std::vector<EntropyCost> out;
  for (SsrKind ssr : ssrs) {
    const SectorWeights w = sector_weights(state, ssr);
    out.push_back({ssr, w.entropy_bits(), w.sectors.size()});
  }
  return out;
}

}  // namespace orbcorr
