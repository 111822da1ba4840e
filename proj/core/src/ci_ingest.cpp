#include "orbcorr/ci_ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "orbcorr/errors.hpp"

namespace orbcorr {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

int to_int(std::string_view token, std::size_t line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  return value;
}

double to_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
    throw ParseError(line, "expected a decimal number, got '" + std::string(token) + "'");
  return value;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// Parses "key=value" and returns the value.
std::string_view keyed(std::string_view token, std::string_view key, std::size_t line) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=')
    throw ParseError(line, "expected '" + std::string(key) + "=<value>', got '" + std::string(token) + "'");
  return token.substr(key.size() + 1);
}

OccupationPattern to_pattern(std::string_view token, const CIVector& civ, std::size_t line) {
  OccupationPattern p;
  try {
    p = OccupationPattern::from_string(token);
  } catch (const ArgumentError& e) {
    throw ParseError(line, e.what());
  }
  if (p.width() != civ.n_modes)
    throw ParseError(line, "bitstring '" + std::string(token) + "' has " + std::to_string(p.width()) +
                               " modes, header declares " + std::to_string(civ.n_modes));
  if (p.particle_count() != civ.n_electrons)
    throw ValidationError("line " + std::to_string(line) + ": bitstring '" + std::string(token) +
                          "' has " + std::to_string(p.particle_count()) + " electrons, header declares " +
                          std::to_string(civ.n_electrons));
  return p;
}

void check_mode_index(int mu, const CIVector& civ, std::size_t line) {
  if (mu < 1 || mu > civ.n_modes)
    throw ValidationError("line " + std::to_string(line) + ": mode index " + std::to_string(mu) +
                          " outside [1, " + std::to_string(civ.n_modes) + "]");
}

}  // namespace

const CITerm* CIVector::reference() const noexcept {
  for (const auto& t : terms)
    if (t.kind == TermKind::reference) return &t;
  return nullptr;
}

bool CIVector::is_excitation_labeled() const noexcept {
  for (const auto& t : terms)
    if (t.kind == TermKind::single || t.kind == TermKind::double_excitation) return true;
  return false;
}

double CIVector::normalization() const noexcept {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.coefficient * t.coefficient;
  return std::sqrt(sum);
}

CIVector parse_civec(std::string_view text) {
  CIVector civ;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_magic = false;
  bool have_header = false;
  std::optional<std::size_t> declared_terms;
  std::vector<std::optional<ModeLabel>> labels;
  std::unordered_set<std::uint64_t> seen_patterns;
  bool have_det = false;
  bool have_excitation = false;

  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto tok = split_ws(raw);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }

    if (!have_magic) {
      if (tok.size() != 2 || tok[0] != "CIVEC" || tok[1] != "1")
        throw ParseError(line_no, "expected 'CIVEC 1' format marker");
      have_magic = true;
      continue;
    }
    if (!have_header) {
      std::string_view modes_tok = tok.size() > 1 ? tok[1] : std::string_view{};
      if (!modes_tok.empty() && modes_tok.back() == ',') modes_tok.remove_suffix(1);
      if (tok.size() != 4 || tok[0] != "modes" || tok[2] != "electrons")
        throw ParseError(line_no, "expected 'modes <2n> electrons <n_e>'");
      civ.n_modes = to_int(modes_tok, line_no);
      civ.n_electrons = to_int(tok[3], line_no);
      if (civ.n_modes < 2 || civ.n_modes > OccupationPattern::kMaxModes || civ.n_modes % 2 != 0)
        throw ValidationError("mode count must be even and in [2, 64], got " + std::to_string(civ.n_modes));
      if (civ.n_electrons < 0 || civ.n_electrons > civ.n_modes)
        throw ValidationError("electron count outside [0, modes]");
      labels.assign(static_cast<std::size_t>(civ.n_modes), std::nullopt);
      have_header = true;
      continue;
    }

    const std::string_view kind = tok[0];
    if (kind == "terms") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'terms <count>'");
      declared_terms = static_cast<std::size_t>(to_int(tok[1], line_no));
    } else if (kind == "mode") {
      if (tok.size() != 8 || tok[2] != "orbital" || tok[4] != "spin" || tok[6] != "sym")
        throw ParseError(line_no, "expected 'mode <mu> orbital <k> spin <u|d> sym <tag>'");
      const int mu = to_int(tok[1], line_no);
      const int orbital = to_int(tok[3], line_no);
      check_mode_index(mu, civ, line_no);
      if (tok[5] != "u" && tok[5] != "d") throw ParseError(line_no, "spin must be 'u' or 'd'");
      ModeLabel label{orbital, tok[5] == "u" ? Spin::up : Spin::down, std::string(tok[7])};
      if (label.mode_index() != mu)
        throw ValidationError("line " + std::to_string(line_no) + ": mode " + std::to_string(mu) +
                              " cannot be orbital " + std::to_string(orbital) + " spin " +
                              std::string(tok[5]));
      auto& slot = labels[static_cast<std::size_t>(mu - 1)];
      if (slot) throw ParseError(line_no, "duplicate label for mode " + std::to_string(mu));
      slot = std::move(label);
    } else if (kind == "ref" || kind == "det") {
      if (tok.size() != 3) throw ParseError(line_no, "expected '" + std::string(kind) + " <bitstring> <c>'");
      CITerm term;
      term.kind = kind == "ref" ? TermKind::reference : TermKind::determinant;
      term.pattern = to_pattern(tok[1], civ, line_no);
      term.coefficient = to_double(tok[2], line_no);
      if (term.kind == TermKind::reference && civ.reference())
        throw ParseError(line_no, "more than one ref line");
      if (!seen_patterns.insert(term.pattern.bits()).second)
        throw ParseError(line_no, "duplicate determinant " + term.pattern.to_string());
      if (term.kind == TermKind::determinant) have_det = true;
      civ.terms.push_back(std::move(term));
    } else if (kind == "single") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'single i=<mu> a=<mu> c=<float>'");
      CITerm term;
      term.kind = TermKind::single;
      term.i = to_int(keyed(tok[1], "i", line_no), line_no);
      term.a = to_int(keyed(tok[2], "a", line_no), line_no);
      term.coefficient = to_double(keyed(tok[3], "c", line_no), line_no);
      check_mode_index(term.i, civ, line_no);
      check_mode_index(term.a, civ, line_no);
      have_excitation = true;
      civ.terms.push_back(std::move(term));
    } else if (kind == "double") {
      if (tok.size() != 6)
        throw ParseError(line_no, "expected 'double i=<mu> j=<mu> a=<mu> b=<mu> c=<float>'");
      CITerm term;
      term.kind = TermKind::double_excitation;
      term.i = to_int(keyed(tok[1], "i", line_no), line_no);
      term.j = to_int(keyed(tok[2], "j", line_no), line_no);
      term.a = to_int(keyed(tok[3], "a", line_no), line_no);
      term.b = to_int(keyed(tok[4], "b", line_no), line_no);
      term.coefficient = to_double(keyed(tok[5], "c", line_no), line_no);
      for (int mu : {term.i, term.j, term.a, term.b}) check_mode_index(mu, civ, line_no);
      if (!(term.i > term.j) || !(term.a > term.b))
        throw ValidationError("line " + std::to_string(line_no) + ": double excitation needs i > j and a > b");
      have_excitation = true;
      civ.terms.push_back(std::move(term));
    } else if (kind == "triple" || kind == "quadruple") {
      throw ParseError(line_no, "triple and higher excitations are not supported");
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(kind) + "'");
    }
    if (end == text.size()) break;
  }

  if (!have_magic) throw ParseError(line_no, "empty input, expected 'CIVEC 1'");
  if (!have_header) throw ParseError(line_no, "missing 'modes <2n> electrons <n_e>' header");
  if (have_det && have_excitation)
    throw ValidationError("excitation-labeled terms and det terms cannot be mixed");
  if (have_excitation && !civ.reference())
    throw ValidationError("excitation terms require a ref line");
  if (civ.terms.empty()) throw ValidationError("wavefunction has no terms");
  if (declared_terms && *declared_terms != civ.terms.size())
    throw ValidationError("declared " + std::to_string(*declared_terms) + " terms, found " +
                          std::to_string(civ.terms.size()));

  civ.mode_labels = default_mode_labels(civ.n_modes);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k]) {
      civ.mode_labels[k] = *labels[k];
      civ.explicit_labels = true;
    }
  }

  if (const CITerm* ref = civ.reference(); ref && have_excitation) {
    for (const auto& t : civ.terms) {
      if (t.kind == TermKind::reference) continue;
      if (!excited_pattern(ref->pattern, t))
        throw ValidationError("excitation (i=" + std::to_string(t.i) + ", a=" + std::to_string(t.a) +
                              ") does not act on reference " + ref->pattern.to_string());
    }
  }
  return civ;
}

CIVector load_civec_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_civec(buf.str());
}

std::string serialize_civec(const CIVector& civ) {
  std::string out = "CIVEC 1\n";
  out += "modes " + std::to_string(civ.n_modes) + " electrons " + std::to_string(civ.n_electrons) + "\n";
  if (civ.explicit_labels) {
    for (const auto& label : civ.mode_labels) {
      out += "mode " + std::to_string(label.mode_index()) + " orbital " +
             std::to_string(label.orbital_index) + " spin " + (label.spin == Spin::up ? "u" : "d") +
             " sym " + (label.symmetry_tag.empty() ? "-" : label.symmetry_tag) + "\n";
    }
  }
  for (const auto& t : civ.terms) {
    switch (t.kind) {
      case TermKind::reference:
        out += "ref " + t.pattern.to_string() + " " + format_double(t.coefficient) + "\n";
        break;
      case TermKind::determinant:
        out += "det " + t.pattern.to_string() + " " + format_double(t.coefficient) + "\n";
        break;
      case TermKind::single:
        out += "single i=" + std::to_string(t.i) + " a=" + std::to_string(t.a) +
               " c=" + format_double(t.coefficient) + "\n";
        break;
      case TermKind::double_excitation:
        out += "double i=" + std::to_string(t.i) + " j=" + std::to_string(t.j) + " a=" + std::to_string(t.a) +
               " b=" + std::to_string(t.b) + " c=" + format_double(t.coefficient) + "\n";
        break;
    }
  }
  return out;
}

bool is_contiguous_reference(const OccupationPattern& reference) noexcept {
  const int n = reference.particle_count();
  const std::uint64_t hf = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return reference.bits() == hf;
}

std::optional<OccupationPattern> excited_pattern(const OccupationPattern& reference, const CITerm& term) {
  auto in_range = [&](int mu) { return mu >= 1 && mu <= reference.width(); };
  switch (term.kind) {
    case TermKind::reference:
      return reference;
    case TermKind::determinant:
      return term.pattern;
    case TermKind::single: {
      if (!in_range(term.i) || !in_range(term.a)) return std::nullopt;
      if (!reference.occupied(term.i) || reference.occupied(term.a)) return std::nullopt;
      return reference.with_mode(term.i, false).with_mode(term.a, true);
    }
    case TermKind::double_excitation: {
      for (int mu : {term.i, term.j, term.a, term.b})
        if (!in_range(mu)) return std::nullopt;
      if (term.i <= term.j || term.a <= term.b) return std::nullopt;
      if (!reference.occupied(term.i) || !reference.occupied(term.j)) return std::nullopt;
      if (reference.occupied(term.a) || reference.occupied(term.b)) return std::nullopt;
      return reference.with_mode(term.i, false)
          .with_mode(term.j, false)
          .with_mode(term.a, true)
          .with_mode(term.b, true);
    }
  }
  return std::nullopt;
}

int excitation_sign_closed_form(const CITerm& term, int n_electrons) {
  switch (term.kind) {
    case TermKind::single:
      return (n_electrons - term.i) % 2 == 0 ? 1 : -1;
    case TermKind::double_excitation:
      return (term.i + term.j) % 2 == 0 ? 1 : -1;
    default:
      return 1;
  }
}

int excitation_sign_literal(const OccupationPattern& reference, const CITerm& term) {
  std::vector<FermionOp> ops;
  switch (term.kind) {
    case TermKind::single:
      ops = {{OpKind::create, term.a}, {OpKind::annihilate, term.i}};
      break;
    case TermKind::double_excitation:
      ops = {{OpKind::create, term.a}, {OpKind::create, term.b}, {OpKind::annihilate, term.i},
             {OpKind::annihilate, term.j}};
      break;
    default:
      return 1;
  }
  OccupationPattern current = reference;
  int sign = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const SignedBitOp step =
        it->kind == OpKind::create ? apply_creation(current, it->mode) : apply_annihilation(current, it->mode);
    if (!step) throw ValidationError("excitation annihilates reference " + reference.to_string());
    current = *step.result;
    sign *= step.sign;
  }
  return sign;
}

SparsePureState build_state(const CIVector& civ) {
  const double norm = civ.normalization();
  if (!(norm > 0.0)) throw ValidationError("wavefunction has zero norm");

  const CITerm* ref = civ.reference();
  const bool excitation = civ.is_excitation_labeled();
  if (excitation && !ref) throw ValidationError("excitation terms require a reference");
  const bool closed_form = excitation && is_contiguous_reference(ref->pattern);

  std::vector<Determinant> dets;
  dets.reserve(civ.terms.size());
  std::unordered_set<std::uint64_t> seen;
  for (const auto& t : civ.terms) {
    if (std::abs(t.coefficient) / norm < kAmplitudeCutoff) continue;
    OccupationPattern pattern;
    int sign = 1;
    if (t.kind == TermKind::reference || t.kind == TermKind::determinant) {
      pattern = t.pattern;
    } else {
      auto target = excited_pattern(ref->pattern, t);
      if (!target)
        throw ValidationError("excitation (i=" + std::to_string(t.i) + ", a=" + std::to_string(t.a) +
                              ") out of range for the reference");
      pattern = *target;
      sign = closed_form ? excitation_sign_closed_form(t, civ.n_electrons)
                         : excitation_sign_literal(ref->pattern, t);
    }
    if (!seen.insert(pattern.bits()).second)
      throw ValidationError("two terms map to determinant " + pattern.to_string());
    dets.push_back({pattern, Complex(sign * t.coefficient / norm, 0.0)});
  }
  return SparsePureState::normalized(std::move(dets), civ.mode_labels);
}

}  // namespace orbcorr
