#include <benchmark/benchmark.h>

#include "oracle.hpp"
#include "orbcorr/ci_ingest.hpp"
#include "orbcorr/measures.hpp"
#include "orbcorr/negativity.hpp"
#include "orbcorr/report.hpp"

using namespace orbcorr;

namespace {

const SparsePureState& water_sized_state() {
  static const SparsePureState state = build_state(parse_civec(oracle::synthetic_cisd_text(7, 10, 7)));
  return state;
}

void BM_ParseAndBuild(benchmark::State& st) {
  const std::string text = oracle::synthetic_cisd_text(7, 10, 7);
  for (auto _ : st) benchmark::DoNotOptimize(build_state(parse_civec(text)));
}
BENCHMARK(BM_ParseAndBuild);

void BM_OrbitalPairState(benchmark::State& st) {
  const auto& s = water_sized_state();
  for (auto _ : st) benchmark::DoNotOptimize(orbital_pair_state(s, 3, 6));
}
BENCHMARK(BM_OrbitalPairState);

void BM_ConditionalEntropy(benchmark::State& st) {
  const auto rho = project_local_ssr(orbital_pair_state(water_sized_state(), 3, 6), SsrKind::parity);
  const auto basis = build_measurement_basis({SsrKind::parity, {0.3, 1.1, 0.7, 2.0}});
  for (auto _ : st) benchmark::DoNotOptimize(conditional_entropy(rho, basis, Side::right));
}
BENCHMARK(BM_ConditionalEntropy);

void BM_ClassicalCorrelation(benchmark::State& st) {
  const auto rho = orbital_pair_state(water_sized_state(), 3, 6);
  const SsrKind kind = st.range(0) == 0 ? SsrKind::parity : SsrKind::number;
  for (auto _ : st) benchmark::DoNotOptimize(classical_correlation(rho, kind, Side::left, {}));
}
BENCHMARK(BM_ClassicalCorrelation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FermionicNegativity(benchmark::State& st) {
  const auto rho = orbital_pair_state(water_sized_state(), 3, 6);
  for (auto _ : st) benchmark::DoNotOptimize(fermionic_log_negativity(rho, SsrKind::parity));
}
BENCHMARK(BM_FermionicNegativity);

void BM_FullReport(benchmark::State& st) {
  ReportOptions options;
  options.pairs.window = {2, 7};
  for (auto _ : st) benchmark::DoNotOptimize(run_report(water_sized_state(), options));
}
BENCHMARK(BM_FullReport)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
