#include "orbcorr/fock.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "orbcorr/errors.hpp"

namespace orbcorr {

ModeLabel ModeLabel::from_mode(int mode, std::string symmetry_tag) {
  if (mode < 1) throw ArgumentError("mode index must be >= 1, got " + std::to_string(mode));
  return ModeLabel{(mode + 1) / 2, mode % 2 == 1 ? Spin::up : Spin::down, std::move(symmetry_tag)};
}

std::vector<ModeLabel> default_mode_labels(int n_modes) {
  std::vector<ModeLabel> labels;
  labels.reserve(static_cast<std::size_t>(n_modes));
  for (int mu = 1; mu <= n_modes; ++mu) labels.push_back(ModeLabel::from_mode(mu));
  return labels;
}

OccupationPattern::OccupationPattern(int width, std::uint64_t bits) : width_(width), bits_(bits) {
  if (width < 0 || width > kMaxModes)
    throw ArgumentError("pattern width must be in [0, 64], got " + std::to_string(width));
  if (width < kMaxModes && (bits >> width) != 0)
    throw ArgumentError("pattern has bits set beyond its width");
}

OccupationPattern OccupationPattern::from_string(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxModes))
    throw ArgumentError("pattern longer than 64 modes");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1')
      bits |= std::uint64_t{1} << i;
    else if (text[i] != '0')
      throw ArgumentError("pattern characters must be 0 or 1: '" + std::string(text) + "'");
  }
  return OccupationPattern(static_cast<int>(text.size()), bits);
}

int OccupationPattern::particle_count() const noexcept { return std::popcount(bits_); }

void OccupationPattern::check_mode(int mode) const {
  if (mode < 1 || mode > width_)
    throw ArgumentError("mode " + std::to_string(mode) + " outside [1, " + std::to_string(width_) + "]");
}

bool OccupationPattern::occupied(int mode) const {
  check_mode(mode);
  return (bits_ >> (mode - 1)) & 1U;
}

int OccupationPattern::count_below(int mode) const {
  check_mode(mode);
  const std::uint64_t below = (std::uint64_t{1} << (mode - 1)) - 1;
  return std::popcount(bits_ & below);
}

OccupationPattern OccupationPattern::with_mode(int mode, bool occupied) const {
  check_mode(mode);
  const std::uint64_t bit = std::uint64_t{1} << (mode - 1);
  return OccupationPattern(width_, occupied ? (bits_ | bit) : (bits_ & ~bit));
}

std::string OccupationPattern::to_string() const {
  std::string out(static_cast<std::size_t>(width_), '0');
  for (int i = 0; i < width_; ++i)
    if ((bits_ >> i) & 1U) out[static_cast<std::size_t>(i)] = '1';
  return out;
}

namespace {

SignedBitOp apply_single(const OccupationPattern& p, int mode, bool create) {
  if (p.occupied(mode) == create) return {};
  const int sign = p.count_below(mode) % 2 == 0 ? 1 : -1;
  return {p.with_mode(mode, create), sign};
}

}  // namespace

SignedBitOp apply_creation(const OccupationPattern& p, int mode) { return apply_single(p, mode, true); }

SignedBitOp apply_annihilation(const OccupationPattern& p, int mode) {
  return apply_single(p, mode, false);
}

SparsePureState::SparsePureState(std::vector<Determinant> entries, std::vector<ModeLabel> mode_labels)
    : entries_(std::move(entries)), mode_labels_(std::move(mode_labels)) {
  if (entries_.empty()) throw ValidationError("pure state has no determinants");
  n_modes_ = entries_.front().pattern.width();
  particle_count_ = entries_.front().pattern.particle_count();
  std::unordered_set<std::uint64_t> seen;
  for (const auto& d : entries_) {
    if (d.pattern.width() != n_modes_) throw ValidationError("determinants have different widths");
    if (d.pattern.particle_count() != particle_count_)
      throw ValidationError("determinants have different particle counts: " + d.pattern.to_string());
    if (!seen.insert(d.pattern.bits()).second)
      throw ValidationError("duplicate determinant " + d.pattern.to_string());
  }
  if (mode_labels_.empty()) mode_labels_ = default_mode_labels(n_modes_);
  if (static_cast<int>(mode_labels_.size()) != n_modes_)
    throw ValidationError("mode label count does not match pattern width");
}

SparsePureState SparsePureState::normalized(std::vector<Determinant> entries,
                                            std::vector<ModeLabel> mode_labels) {
  SparsePureState state(std::move(entries), std::move(mode_labels));
  const double norm = std::sqrt(state.norm_squared());
  if (norm == 0.0) throw ValidationError("cannot normalize a zero state");
  for (auto& d : state.entries_) d.amplitude /= norm;
  return state;
}

double SparsePureState::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& d : entries_) sum += std::norm(d.amplitude);
  return sum;
}

bool SparsePureState::is_normalized(double tol) const noexcept {
  return std::abs(norm_squared() - 1.0) <= tol;
}

Complex SparsePureState::amplitude(const OccupationPattern& p) const {
  for (const auto& d : entries_)
    if (d.pattern == p) return d.amplitude;
  return {};
}

SparseDensityOperator::SparseDensityOperator(std::vector<Triplet> triplets,
                                             std::vector<ModeLabel> mode_labels)
    : triplets_(std::move(triplets)), mode_labels_(std::move(mode_labels)) {
  for (const auto& t : triplets_) {
    if (t.ket.width() != n_modes() || t.bra.width() != n_modes())
      throw ValidationError("triplet pattern width does not match the mode labels");
  }
}

Complex SparseDensityOperator::trace() const noexcept {
  Complex sum{};
  for (const auto& t : triplets_)
    if (t.ket == t.bra) sum += t.value;
  return sum;
}

bool SparseDensityOperator::is_hermitian(double tol) const {
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
    }
  };
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Complex, PairHash> values;
  for (const auto& t : triplets_) values[{t.ket.bits(), t.bra.bits()}] += t.value;
  for (const auto& [key, v] : values) {
    auto it = values.find({key.second, key.first});
    const Complex partner = it == values.end() ? Complex{} : it->second;
    if (std::abs(v - std::conj(partner)) > tol) return false;
  }
  return true;
}

SparseDensityOperator outer_product(const SparsePureState& state) {
  if (!state.is_normalized())
    throw ValidationError("outer_product requires a normalized state (norm^2 = " +
                          std::to_string(state.norm_squared()) + ")");
  std::vector<Triplet> triplets;
  triplets.reserve(state.entries().size() * state.entries().size());
  for (const auto& s : state.entries())
    for (const auto& r : state.entries())
      triplets.push_back({s.amplitude * std::conj(r.amplitude), s.pattern, r.pattern});
  return SparseDensityOperator(std::move(triplets), state.mode_labels());
}

Complex expectation_of_operator_string(const SparsePureState& state, std::span<const FermionOp> ops) {
  std::unordered_map<std::uint64_t, Complex> lookup;
  lookup.reserve(state.entries().size());
  for (const auto& d : state.entries()) lookup.emplace(d.pattern.bits(), d.amplitude);

  Complex total{};
  for (const auto& d : state.entries()) {
    OccupationPattern current = d.pattern;
    int sign = 1;
    bool alive = true;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      const SignedBitOp step = it->kind == OpKind::create ? apply_creation(current, it->mode)
                                                          : apply_annihilation(current, it->mode);
      if (!step) {
        alive = false;
        break;
      }
      current = *step.result;
      sign *= step.sign;
    }
    if (!alive) continue;
    auto it = lookup.find(current.bits());
    if (it == lookup.end()) continue;
    total += std::conj(it->second) * static_cast<double>(sign) * d.amplitude;
  }
  return total;
}

}  // namespace orbcorr
