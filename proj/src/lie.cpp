#include "f2v/lie.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "f2v/rng.hpp"

namespace f2v {

Derivation bracket(const Derivation& f, const Derivation& g) {
  std::set<VarId, VarLess> keys;
  for (const auto& [x, c] : f.comp) {
    (void)c;
    keys.insert(x);
  }
  for (const auto& [x, c] : g.comp) {
    (void)c;
    keys.insert(x);
  }
  Derivation r;
  for (VarId x : keys)
    r.comp.emplace(x, f.apply_to(g.component(x)) - g.apply_to(f.component(x)));
  return r;
}

ChartVectorField bracket(const ChartVectorField& f, const ChartVectorField& g) {
  if (f.chart() != g.chart()) throw ChartMismatch("bracket across charts");
  return ChartVectorField::from_derivation(
      f.chart(), bracket(f.as_derivation(), g.as_derivation()));
}

SparseExpr base_bracket(const SparseExpr& k1, const SparseExpr& k2) {
  VarId t = var_t();
  return k1 * k2.partial_derivative(t) - k2 * k1.partial_derivative(t);
}

SparseExpr base_component(const ChartVectorField& f) { return f.coeff_t(); }

LieAlgebraBasis LieAlgebraBasis::standard() {
  LieAlgebraBasis b;
  b.e[0].translation = {Rational(1), Rational(0), Rational(0)};
  b.e[1].translation = {Rational(0), Rational(0), Rational(1)};
  b.e[2].matrix[1][0] = Rational(1);
  b.e[3].translation = {Rational(0), Rational(1), Rational(0)};
  b.e[4].matrix[0][0] = Rational(1);
  b.e[5].matrix[1][1] = Rational(1);
  b.e[6].matrix[0][1] = Rational(1);
  return b;
}

namespace {

size_t sc_index(int i, int j, int k) {
  if (i < 1 || i > 7 || j < 1 || j > 7 || k < 1 || k > 7)
    throw F2VError("structure constant index out of range");
  return static_cast<size_t>(((i - 1) * 7 + (j - 1)) * 7 + (k - 1));
}

int parse_small_int(const std::string& tok, int lineno) {
  try {
    size_t used = 0;
    int k = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return k;
  } catch (const std::exception&) {
    throw ParseError("table line " + std::to_string(lineno) + ": bad integer '" +
                     tok + "'");
  }
}

}  // namespace

const Rational& StructureConstants::c(int i, int j, int k) const {
  return data_[sc_index(i, j, k)];
}

void StructureConstants::set(int i, int j, int k, const Rational& value) {
  if (i == j && !f2v::is_zero(value))
    throw F2VError("diagonal bracket constant must vanish");
  data_[sc_index(i, j, k)] = value;
  Rational neg = -value;
  data_[sc_index(j, i, k)] = neg;
}

StructureConstants StructureConstants::zero() { return StructureConstants{}; }

bool StructureConstants::jacobi_ok() const {
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k)
        for (int l = 1; l <= 7; ++l) {
          Rational s(0);
          for (int m = 1; m <= 7; ++m) {
            Rational term = c(j, k, m) * c(i, m, l) + c(k, i, m) * c(j, m, l) +
                            c(i, j, m) * c(k, m, l);
            s += term;
          }
          if (!f2v::is_zero(s)) return false;
        }
  return true;
}

std::vector<std::pair<int, int>> StructureConstants::nonzero_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = 1; k <= 7; ++k)
        if (!f2v::is_zero(c(i, j, k))) {
          out.emplace_back(i, j);
          break;
        }
  return out;
}

// Line grammar: "i j = 0" or "i j = c k" with further "+ c k" summands,
// 1 <= i < j <= 7. All 21 pairs must appear exactly once.
StructureConstants StructureConstants::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open structure constants table: " + path);
  StructureConstants s;
  bool seen[8][8] = {};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    int i = parse_small_int(first, lineno);
    std::string jtok, eq;
    if (!(ls >> jtok >> eq) || eq != "=")
      throw ParseError("table line " + std::to_string(lineno) +
                       ": expected 'i j = ...'");
    int j = parse_small_int(jtok, lineno);
    if (i < 1 || i > 7 || j < 1 || j > 7 || i >= j)
      throw ParseError("table line " + std::to_string(lineno) +
                       ": need 1 <= i < j <= 7");
    if (seen[i][j])
      throw ParseError("table line " + std::to_string(lineno) + ": duplicate pair");
    seen[i][j] = true;
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.size() == 1 && toks[0] == "0") continue;
    size_t pos = 0;
    while (pos < toks.size()) {
      if (pos > 0) {
        if (toks[pos] != "+")
          throw ParseError("table line " + std::to_string(lineno) +
                           ": expected '+' between summands");
        ++pos;
      }
      if (pos + 1 >= toks.size())
        throw ParseError("table line " + std::to_string(lineno) +
                         ": expected 'coeff index'");
      Rational coeff = rat_from_string(toks[pos]);
      int k = parse_small_int(toks[pos + 1], lineno);
      if (k < 1 || k > 7)
        throw ParseError("table line " + std::to_string(lineno) +
                         ": basis index out of range");
      s.set(i, j, k, coeff);
      pos += 2;
    }
  }
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      if (!seen[i][j])
        throw ParseError("structure constants table is missing pair " +
                         std::to_string(i) + " " + std::to_string(j));
  // Jacobi is a verification concern, not a parse concern: a corrupted but
  // well-formed table must load so the bracket checks can report the failure.
  return s;
}

namespace {

// First-order flow of the group element id + eps*g on one chart. The base
// P^1 coordinate transforms by the Moebius action of the 2x2 part, the fiber
// coordinate picks up the square of the local line-bundle factor and the
// translation part; the primed chart reads both in reversed coordinates.
ChartVectorField expand_action(const std::string& chart, const LieBasisElement& g,
                               bool primed) {
  VarId v = var_v(), y = var_y(), eps = var_eps();
  SparseExpr E = SparseExpr::variable(eps).with_truncation(eps, 1);
  SparseExpr V = SparseExpr::variable(v).like_context(E);
  SparseExpr Y = SparseExpr::variable(y).like_context(E);
  SparseExpr one = SparseExpr::constant(1).like_context(E);

  const Rational& m11 = g.matrix[0][0];
  const Rational& m12 = g.matrix[0][1];
  const Rational& m21 = g.matrix[1][0];
  const Rational& m22 = g.matrix[1][1];
  SparseExpr a = one + m11 * E, b = m12 * E;
  SparseExpr c = m21 * E, d = one + m22 * E;
  SparseExpr tau = primed ? (g.translation[0] * one + g.translation[1] * V +
                             g.translation[2] * (V * V))
                          : (g.translation[0] * (V * V) + g.translation[1] * V +
                             g.translation[2] * one);

  SparseExpr num_v = primed ? (a * V + b) : (c + d * V);
  SparseExpr den_v = primed ? (c * V + d) : (a + b * V);
  SparseExpr v_new = num_v * den_v.inverse();
  SparseExpr y_new = Y * den_v * den_v * (one + E * Y * tau).inverse();

  if (v_new.coefficient_of(eps, 0) != SparseExpr::variable(v) ||
      y_new.coefficient_of(eps, 0) != SparseExpr::variable(y))
    throw InternalCheckFailure("group action does not fix the identity at order 0");
  SparseExpr cv = v_new.coefficient_of(eps, 1);
  SparseExpr cy = y_new.coefficient_of(eps, 1);
  if (cv.contains(eps) || cy.contains(eps))
    throw InternalCheckFailure("action expansion is not first order in eps");
  return ChartVectorField(chart, cv.without_truncations(), cy.without_truncations(),
                          SparseExpr());
}

}  // namespace

FundamentalFields generate_fundamental_fields(const LieAlgebraBasis& basis,
                                              const StructureConstants& s) {
  FundamentalFields ff;
  for (int i = 0; i < 7; ++i) {
    ff.chart1.push_back(expand_action("W", basis.e[i], false));
    ff.chart2.push_back(expand_action("Wp", basis.e[i], true));
  }
  if (verify_bracket_table(ff.chart1, s).pass) return ff;
  FundamentalFields flipped;
  flipped.sign_flipped = true;
  for (int i = 0; i < 7; ++i) {
    flipped.chart1.push_back(ff.chart1[i].scaled(Rational(-1)));
    flipped.chart2.push_back(ff.chart2[i].scaled(Rational(-1)));
  }
  if (verify_bracket_table(flipped.chart1, s).pass) return flipped;
  return ff;  // neither orientation matches; let the caller report failures
}

bool fundamental_fields_cross_chart_ok(const FundamentalFields& ff,
                                       const Transition& t0) {
  if (ff.chart1.size() != 7 || ff.chart2.size() != 7)
    throw DimensionMismatch("expected 7 fundamental fields per chart");
  for (int i = 0; i < 7; ++i) {
    Derivation img = pushforward(ff.chart1[i], t0);
    if (!(img == ff.chart2[i].as_derivation())) return false;
  }
  return true;
}

BracketTableReport verify_bracket_table(const std::vector<ChartVectorField>& fields,
                                        const StructureConstants& s) {
  if (fields.size() != 7) throw DimensionMismatch("expected 7 fields");
  BracketTableReport rep;
  rep.pass = true;
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j) {
      ChartVectorField lhs = bracket(fields[i - 1], fields[j - 1]);
      ChartVectorField rhs = fields[0].scaled(Rational(0));
      for (int k = 1; k <= 7; ++k) rhs = rhs + fields[k - 1].scaled(s.c(i, j, k));
      ChartVectorField res = lhs - rhs;
      BracketRelationResult r;
      r.i = i;
      r.j = j;
      r.pass = res.is_zero();
      if (!r.pass) {
        r.residual = "v: " + res.coeff_v().canonical_string() +
                     "; y: " + res.coeff_y().canonical_string();
        rep.pass = false;
      }
      rep.relations.push_back(std::move(r));
      ++rep.checked;
    }
  return rep;
}

bool verify_filtration_facts(uint64_t seed, int samples, int order) {
  Rng rng(seed);
  VarId t = var_t();
  for (int s = 0; s < samples; ++s) {
    int p = static_cast<int>(rng.range(1, order));
    int q = static_cast<int>(rng.range(1, order));
    auto sample_val_ge = [&](int val) {
      SparseExpr k;
      for (int d = val; d <= order + 2; ++d)
        k = k + rng.rational() * SparseExpr::term(Rational(1), Monomial::var(t, d));
      return k;
    };
    SparseExpr k1 = sample_val_ge(p);
    SparseExpr k2 = sample_val_ge(q);
    auto val_pq = base_bracket(k1, k2).t_valuation();
    if (val_pq && *val_pq < p + q - 1) return false;
    // Equal filtration levels: the leading terms cancel one order deeper.
    SparseExpr k3 = sample_val_ge(p);
    auto val_pp = base_bracket(k1, k3).t_valuation();
    if (val_pp && *val_pp < 2 * p) return false;
  }
  return true;
}

}  // namespace f2v
