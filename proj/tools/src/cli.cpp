#include "orbcorr_cli/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbcorr/ci_ingest.hpp"
#include "orbcorr/errors.hpp"
#include "orbcorr/report.hpp"

namespace orbcorr::cli {

namespace {

namespace fs = std::filesystem;

std::vector<SsrKind> parse_ssr_list(const std::string& text) {
  std::vector<SsrKind> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) {
      const SsrKind kind = parse_ssr_kind(item);
      if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ArgumentError("at least one superselection rule is required");
  return out;
}

std::pair<int, int> parse_window(const std::string& text) {
  const std::size_t sep = text.find_first_of(":-");
  if (sep == std::string::npos) throw ArgumentError("window must look like lo:hi, got '" + text + "'");
  auto read = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size())
      throw ArgumentError("window must look like lo:hi, got '" + text + "'");
    return v;
  };
  const std::string_view view(text);
  return {read(view.substr(0, sep)), read(view.substr(sep + 1))};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path.string());
  f << content;
  if (!f) throw ArgumentError("failed writing " + path.string());
}

std::string format_bits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct ReportArgs {
  std::string input;
  std::string ssr = "parity,number";
  std::string pairs = "all";
  std::string window;
  std::string sides = "both";
  unsigned long long seed = 7;
  int restarts = 24;
  std::string format = "csv";
  std::string out_dir = ".";
  int threads = 1;
};

int do_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  ReportOptions options;
  options.ssrs = parse_ssr_list(args.ssr);
  options.pairs = PairSelection::parse(args.pairs);
  if (!args.window.empty()) options.pairs.window = parse_window(args.window);
  options.sides = parse_side_selection(args.sides);
  options.optimizer.seed = args.seed;
  if (args.restarts < 1) throw ArgumentError("restarts must be positive");
  options.optimizer.restarts = args.restarts;
  if (args.threads < 1) throw ArgumentError("threads must be positive");
  options.threads = args.threads;

  const SparsePureState state = build_state(load_civec_file(args.input));
  const ReportResult result = run_report(state, options);

  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ArgumentError("cannot create output directory " + dir.string() + ": " + ec.message());

  if (args.format == "json")
    write_file(dir / "report.json", report_json(result));
  else
    write_file(dir / "report.csv", report_csv(result));
  const std::string table = report_table(result);
  write_file(dir / "table.txt", table);
  for (const auto& h : result.heatmaps)
    write_file(dir / ("heatmap_" + h.measure + "_" + to_string(h.ssr) + ".csv"), heatmap_csv(h));
  out << table;

  if (!result.all_converged()) {
    for (const auto& p : result.pairs)
      for (const auto& row : p.rows)
        if (!row.converged())
          err << "warning: optimizer did not converge for pair (" << p.left << "," << p.right << ") ssr "
              << to_string(row.ssr) << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int do_entropy_cost(const std::string& input, const std::string& ssr, std::ostream& out) {
  const auto ssrs = parse_ssr_list(ssr);
  const SparsePureState state = build_state(load_civec_file(input));
  out << "ssr,entropy_cost_bits,sectors\n";
  for (const auto& c : run_entropy_cost(state, ssrs))
    out << to_string(c.ssr) << "," << format_bits(c.bits) << "," << c.sectors << "\n";
  return kExitOk;
}

int do_validate(const std::string& input, std::ostream& out) {
  const CIVector civ = load_civec_file(input);
  const SparsePureState state = build_state(civ);
  if (!state.is_normalized()) throw NumericalConsistencyError("state is not normalized after ingest");
  const SparseDensityOperator rho = outer_product(state);
  if (!rho.is_hermitian(1e-12)) throw NumericalConsistencyError("density operator is not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0}) > 1e-10) throw NumericalConsistencyError("density operator trace is not 1");
  out << "ok: " << civ.n_modes << " modes, " << civ.n_electrons << " electrons, " << civ.terms.size() << " terms, "
      << state.entries().size() << " determinants, input norm " << format_bits(civ.normalization()) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orbital correlation and entanglement analysis of CI wavefunctions", "orbcorr"};
  app.require_subcommand(1);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Pairwise I, C, D and E under superselection rules");
  report->add_option("--input", report_args.input, "CIVEC file")->required();
  report->add_option("--ssr", report_args.ssr, "Comma list of none, parity, number")->capture_default_str();
  report->add_option("--pairs", report_args.pairs, "all or a list like (3,6),(2,5)")->capture_default_str();
  report->add_option("--window", report_args.window, "Inclusive orbital range lo:hi, excludes frozen orbitals");
  report->add_option("--sides", report_args.sides, "left, right or both")->capture_default_str();
  report->add_option("--seed", report_args.seed, "Optimizer seed")->capture_default_str();
  report->add_option("--restarts", report_args.restarts, "Optimizer restarts per pair and side")->capture_default_str();
  report->add_option("--format", report_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  report->add_option("--out", report_args.out_dir, "Output directory")->capture_default_str();
  report->add_option("--threads", report_args.threads, "Worker threads across pairs")->capture_default_str();

  std::string cost_input, cost_ssr = "parity,number";
  auto* cost = app.add_subcommand("entropy-cost", "Entropy added by projecting onto local superselection sectors");
  cost->add_option("--input", cost_input, "CIVEC file")->required();
  cost->add_option("--ssr", cost_ssr, "Comma list of parity, number")->capture_default_str();

  std::string validate_input;
  auto* validate = app.add_subcommand("validate", "Parse a CIVEC file and check state invariants");
  validate->add_option("--input", validate_input, "CIVEC file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*report) return do_report(report_args, out, err);
    if (*cost) return do_entropy_cost(cost_input, cost_ssr, out);
    return do_validate(validate_input, out);
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ValidationError& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NumericalConsistencyError& e) {
    err << "error: numerical consistency: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace orbcorr::cli
