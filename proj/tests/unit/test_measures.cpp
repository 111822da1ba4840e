#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "orbcorr/errors.hpp"
#include "orbcorr/measures.hpp"

using namespace orbcorr;

namespace {

constexpr double kPi = std::numbers::pi;

OccupationPattern pat(const char* s) { return OccupationPattern::from_string(s); }

ReducedDensityMatrix pair_rdm(const oracle::Mat& m) { return ReducedDensityMatrix(m, default_mode_labels(4)); }

ReducedDensityMatrix bell_pair() {
  return orbital_pair_state(SparsePureState::normalized({{pat("0110"), 1.0}, {pat("1001"), 1.0}}), 1, 2);
}

// 1/2 (|01,01><01,01| + |10,10><10,10|)
ReducedDensityMatrix classical_mixture() {
  oracle::Mat m = oracle::Mat::Zero(16, 16);
  m(5, 5) = m(10, 10) = 0.5;
  return pair_rdm(m);
}

// Physical two-orbital states: marginals of random fixed-N states on 3 or 4 orbitals.
std::vector<ReducedDensityMatrix> physical_pairs(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<ReducedDensityMatrix> out;
  for (int k = 0; k < count; ++k) {
    const int orbitals = 3 + k % 2;
    const auto s = oracle::random_state(2 * orbitals, 1 + k % (2 * orbitals - 1), rng, 0.6, k % 3 != 0);
    out.push_back(orbital_pair_state(s, 1 + k % 2, orbitals));
  }
  return out;
}

// Swaps orbitals a and b of a pure state, carrying the fermionic reordering sign.
SparsePureState swap_orbitals(const SparsePureState& s, int a, int b) {
  auto map = [&](int mode) {
    const int orb = (mode + 1) / 2, offset = (mode + 1) % 2;
    const int target = orb == a ? b : orb == b ? a : orb;
    return 2 * target - 1 + offset;
  };
  std::vector<Determinant> out;
  for (const auto& d : s.entries()) {
    OccupationPattern p(d.pattern.width(), 0);
    int sign = 1;
    for (int mode = d.pattern.width(); mode >= 1; --mode) {
      if (!d.pattern.occupied(mode)) continue;
      const auto step = apply_creation(p, map(mode));
      p = *step.result;
      sign *= step.sign;
    }
    out.push_back({p, d.amplitude * static_cast<double>(sign)});
  }
  return SparsePureState(std::move(out));
}

double dense_conditional(const oracle::Mat& rho, const MeasurementBasis& basis, bool right) {
  double total = 0;
  for (const auto& v : basis.vectors) total += oracle::outcome_term(rho, v, right);
  return total;
}

}  // namespace

TEST(Entropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(ComplexMatrix(oracle::Mat::Identity(4, 4) / 4.0)), 2.0, 1e-14);
  oracle::Mat pure = oracle::Mat::Zero(4, 4);
  pure(1, 1) = 1.0;
  EXPECT_EQ(von_neumann_entropy(ComplexMatrix(pure)), 0.0);
  oracle::Mat d = oracle::Mat::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  EXPECT_NEAR(von_neumann_entropy(ComplexMatrix(d)), 0.811278, 1e-6);
  EXPECT_NEAR(von_neumann_entropy(ComplexMatrix(d)), -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25)), 1e-14);
}

TEST(MutualInformation, ProductIsZero) {
  const auto s = SparsePureState({{pat("1100"), 1.0}});
  for (SsrKind k : {SsrKind::none, SsrKind::parity, SsrKind::number})
    EXPECT_NEAR(mutual_information(orbital_pair_state(s, 1, 2), k), 0.0, 1e-14);
  oracle::Mat m = oracle::Mat::Zero(16, 16);
  // (0.3|00> <00| + 0.7|01><01|) x |10><10|
  m(2, 2) = 0.3;
  m(6, 6) = 0.7;
  EXPECT_NEAR(mutual_information(pair_rdm(m), SsrKind::none), 0.0, 1e-14);
}

TEST(MutualInformation, BellTypeIsTwoBits) {
  for (SsrKind k : {SsrKind::none, SsrKind::parity, SsrKind::number})
    EXPECT_NEAR(mutual_information(bell_pair(), k), 2.0, 1e-12);
}

TEST(MutualInformation, MatchesDenseOracle) {
  for (const auto& r : physical_pairs(61, 20))
    for (SsrKind k : {SsrKind::none, SsrKind::parity, SsrKind::number})
      EXPECT_NEAR(mutual_information(r, k), oracle::mutual_information(r.matrix(), k), 1e-10);
}

TEST(MutualInformation, SwapInvariance) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 12; ++trial) {
    const auto s = oracle::random_state(6, 1 + trial % 5, rng, 0.7);
    const auto swapped = swap_orbitals(s, 1, 3);
    ASSERT_TRUE(swapped.is_normalized());
    const auto a = orbital_pair_state(s, 1, 3);
    const auto b = orbital_pair_state(swapped, 1, 3);
    for (SsrKind k : {SsrKind::none, SsrKind::parity, SsrKind::number})
      EXPECT_NEAR(mutual_information(a, k), mutual_information(b, k), 1e-10);
    EXPECT_NEAR(von_neumann_entropy(orbital_marginal(a, Side::left)),
                von_neumann_entropy(orbital_marginal(b, Side::right)), 1e-10);
    for (SsrKind k : {SsrKind::parity, SsrKind::number})
      EXPECT_NEAR(classical_correlation(a, k, Side::left).value, classical_correlation(b, k, Side::right).value, 1e-7);
  }
}

TEST(MeasurementBasis, ComputationalAtZeroAngles) {
  const auto b = build_measurement_basis({SsrKind::parity, {0, 0, 0, 0}});
  // v1 = |00>, v2 = |01>, v3 = -|10>, v4 = -|11>: the computational basis up to phases.
  for (int k = 0; k < 4; ++k) {
    const int expected[] = {0, 1, 2, 3};
    EXPECT_NEAR(std::abs(b.vectors[k](expected[k])), 1.0, 1e-15);
    EXPECT_NEAR(b.vectors[k].norm(), 1.0, 1e-15);
  }
}

TEST(MeasurementBasis, NumberAtQuarterPi) {
  const auto b = build_measurement_basis({SsrKind::number, {kPi / 4, 0, 0, 0}});
  const double h = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(b.vectors[0](0) - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(b.vectors[1](1) - h), 0, 1e-15);
  EXPECT_NEAR(std::abs(b.vectors[1](2) - h), 0, 1e-15);
  EXPECT_NEAR(std::abs(b.vectors[2](1) - h), 0, 1e-15);
  EXPECT_NEAR(std::abs(b.vectors[2](2) + h), 0, 1e-15);
  EXPECT_NEAR(std::abs(b.vectors[3](3) - 1.0), 0, 1e-15);
}

TEST(MeasurementBasis, OrthonormalAndDefiniteCharge) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> angle(-10, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const SsrKind kind = trial % 2 ? SsrKind::parity : SsrKind::number;
    const auto b = build_measurement_basis({kind, {angle(rng), angle(rng), angle(rng), angle(rng)}});
    Eigen::Matrix4cd v;
    for (int k = 0; k < 4; ++k) v.col(k) = b.vectors[k];
    EXPECT_LT((v.adjoint() * v - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    for (const auto& x : b.vectors) {
      const bool even = std::abs(x(0)) + std::abs(x(3)) > 0, odd = std::abs(x(1)) + std::abs(x(2)) > 0;
      EXPECT_FALSE(even && odd);
      if (kind == SsrKind::number) EXPECT_FALSE(std::abs(x(0)) > 0 && std::abs(x(3)) > 0);
    }
  }
  EXPECT_THROW(build_measurement_basis({SsrKind::none, {}}), ArgumentError);
}

TEST(ConditionalEntropy, Examples) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> angle(0, 2 * kPi);
  oracle::Mat m = oracle::Mat::Zero(16, 16);
  m(2, 2) = 0.3;
  m(6, 6) = 0.7;
  const auto product = pair_rdm(m);
  const double s_left = von_neumann_entropy(orbital_marginal(product, Side::left));
  for (int k = 0; k < 10; ++k) {
    const auto b = build_measurement_basis({SsrKind::parity, {angle(rng), angle(rng), angle(rng), angle(rng)}});
    EXPECT_NEAR(conditional_entropy(product, b, Side::right), s_left, 1e-12);
    EXPECT_NEAR(conditional_entropy(product, b, Side::left), 0.0, 1e-12);
  }
  const auto comp = build_measurement_basis({SsrKind::parity, {0, 0, 0, 0}});
  EXPECT_NEAR(conditional_entropy(classical_mixture(), comp, Side::left), 0.0, 1e-14);
  EXPECT_NEAR(conditional_entropy(classical_mixture(), comp, Side::right), 0.0, 1e-14);
  const auto quarter = build_measurement_basis({SsrKind::number, {kPi / 4, 0, 0, 0}});
  EXPECT_NEAR(conditional_entropy(bell_pair(), quarter, Side::right), 0.0, 1e-12);
  EXPECT_NEAR(conditional_entropy(bell_pair(), quarter, Side::left), 0.0, 1e-12);
}

TEST(ConditionalEntropy, DiagonalStateGivesShannonConditionalEntropy) {
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> u(0, 1);
  const auto comp = build_measurement_basis({SsrKind::number, {0, 0, 0, 0}});
  for (int trial = 0; trial < 20; ++trial) {
    oracle::Mat m = oracle::Mat::Zero(16, 16);
    double p[4][4], total = 0;
    for (auto& row : p)
      for (double& x : row) total += (x = u(rng) * (u(rng) < 0.3 ? 0 : 1));
    for (int l = 0; l < 4; ++l)
      for (int r = 0; r < 4; ++r) m(4 * l + r, 4 * l + r) = p[l][r] / total;
    // H(L|R) for measuring R.
    double h = 0;
    for (int r = 0; r < 4; ++r) {
      double pr = 0;
      for (int l = 0; l < 4; ++l) pr += p[l][r] / total;
      for (int l = 0; l < 4; ++l)
        if (p[l][r] > 0) h -= p[l][r] / total * std::log2(p[l][r] / total / pr);
    }
    EXPECT_NEAR(conditional_entropy(pair_rdm(m), comp, Side::right), h, 1e-12);
  }
}

TEST(ConditionalEntropy, MatchesDenseProjectAndTrace) {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> angle(0, 2 * kPi);
  auto states = physical_pairs(89, 12);
  for (int k = 0; k < 6; ++k) states.push_back(pair_rdm(oracle::random_mixed(4, 1 + k, rng, true)));
  for (const auto& raw : states) {
    for (SsrKind kind : {SsrKind::parity, SsrKind::number}) {
      const auto r = project_local_ssr(raw, kind);
      for (int k = 0; k < 5; ++k) {
        const auto b = build_measurement_basis({kind, {angle(rng), angle(rng), angle(rng), angle(rng)}});
        EXPECT_NEAR(conditional_entropy(r, b, Side::right), dense_conditional(r.matrix(), b, true), 1e-11);
        EXPECT_NEAR(conditional_entropy(r, b, Side::left), dense_conditional(r.matrix(), b, false), 1e-11);
      }
    }
  }
}

TEST(ClassicalCorrelation, ProductAndClassicalMixture) {
  const auto product = orbital_pair_state(SparsePureState({{pat("1100"), 1.0}}), 1, 2);
  for (SsrKind k : {SsrKind::parity, SsrKind::number}) {
    EXPECT_NEAR(classical_correlation(product, k, Side::left).value, 0.0, 1e-10);
    const auto d = quantum_discord(classical_mixture(), k, Side::right);
    EXPECT_NEAR(d.value, 0.0, 1e-9);
    EXPECT_NEAR(d.classical.value, 1.0, 1e-9);
  }
  EXPECT_THROW(classical_correlation(product, SsrKind::none, Side::left), ArgumentError);
}

TEST(ClassicalCorrelation, BoundsAndNeverLosesToHaltonGrid) {
  for (const auto& r : physical_pairs(97, 16)) {
    for (SsrKind k : {SsrKind::parity, SsrKind::number}) {
      const auto projected = project_local_ssr(r, k);
      for (Side side : {Side::left, Side::right}) {
        const auto d = quantum_discord(r, k, side);
        const double i = d.mutual_information;
        EXPECT_GE(d.classical.value, -1e-10);
        EXPECT_LE(d.classical.value, i + 1e-10);
        EXPECT_GE(d.value, -1e-8);
        EXPECT_NEAR(d.value, d.via_conditional_entropy, 1e-8);
        EXPECT_TRUE(d.classical.diagnostics.converged);
        const int dim = MeasurementParams::parameter_count(k);
        const double s_other = von_neumann_entropy(orbital_marginal(projected, side == Side::left ? Side::right : Side::left));
        const double upper[4] = {kPi / 2, 2 * kPi, kPi / 2, 2 * kPi};
        for (std::uint64_t h = 0; h < 64; ++h) {
          const auto unit = halton_point(h, dim);
          MeasurementParams p{k, {}};
          for (int a = 0; a < dim; ++a) p.angles[a] = unit[a] * upper[a];
          EXPECT_GE(d.classical.value, s_other - conditional_entropy(projected, build_measurement_basis(p), side) - 1e-12);
        }
      }
    }
  }
}

TEST(ClassicalCorrelation, MatchesGridOracleOnFixedStates) {
  std::vector<oracle::Mat> library;
  for (auto lambda : {std::array<double, 4>{0.8, 0.4, 0.4, 0.2}, {0.5, 0.5, 0.5, 0.5}, {0.9, 0.1, 0.3, 0.3}})
    library.push_back(orbital_pair_state(oracle::four_config_state(lambda), 1, 2).matrix());
  for (const auto& r : physical_pairs(101, 5)) library.push_back(r.matrix());
  for (const auto& m : library) {
    for (SsrKind k : {SsrKind::parity, SsrKind::number}) {
      for (Side side : {Side::left, Side::right}) {
        const auto grid = oracle::grid_correlations(m, k, side == Side::right, 40);
        const auto c = classical_correlation(pair_rdm(m), k, side);
        EXPECT_NEAR(c.value, grid.classical, 1e-5);
      }
    }
  }
}

TEST(ClassicalCorrelation, DeterministicForSeed) {
  const auto r = physical_pairs(103, 1).front();
  MultiStartOptions o;
  o.seed = 1234;
  const auto a = classical_correlation(r, SsrKind::parity, Side::left, o);
  const auto b = classical_correlation(r, SsrKind::parity, Side::left, o);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.diagnostics.evaluations, b.diagnostics.evaluations);
}

TEST(Measures, RejectNonPairStates) {
  const ReducedDensityMatrix one(oracle::Mat::Identity(4, 4) / 4.0, default_mode_labels(2));
  EXPECT_THROW(mutual_information(one, SsrKind::none), ArgumentError);
}
