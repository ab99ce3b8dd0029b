#include "f2v/cohomology.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "f2v/linalg.hpp"
#include "linear_rows.hpp"

namespace f2v {

using detail::RowMap;
using detail::accumulate_rows;
using detail::rows_to_matrix;

namespace {

VarId pair_symbol(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "r%04d", index);
  return VarId::intern(buf);
}

struct PairAnsatz {
  std::vector<VarId> unknowns;
  SparseExpr cv0, cy0, cv1, cy1;
};

// Generic chart pair: polynomial fields of the given v-degree on each chart,
// y-degree at most 2 on the d/dy coefficient.
PairAnsatz make_pair_ansatz(int degree) {
  PairAnsatz a;
  auto fresh = [&]() {
    VarId q = pair_symbol(static_cast<int>(a.unknowns.size()) + 1);
    a.unknowns.push_back(q);
    return SparseExpr::variable(q);
  };
  for (int side = 0; side < 2; ++side) {
    SparseExpr& cv = side == 0 ? a.cv0 : a.cv1;
    SparseExpr& cy = side == 0 ? a.cy0 : a.cy1;
    for (int ve = 0; ve <= degree; ++ve)
      cv = cv + fresh() * SparseExpr::term(Rational(1), Monomial::var(var_v(), ve));
    for (int ye = 0; ye <= 2; ++ye)
      for (int ve = 0; ve <= degree; ++ve)
        cy = cy + fresh() * SparseExpr::term(
                                Rational(1),
                                Monomial::from_factors({{var_v(), ve}, {var_y(), ye}}));
  }
  return a;
}

struct DeltaSystem {
  std::vector<VarId> unknowns;
  std::map<VarId, size_t, VarLess> index;
  RowMap rows;  // comp 0 is d/dv, 1 is d/dy, keyed by base monomial in (v, y)
};

// Coefficient rows of delta(xi0, xi1) = pushforward(xi0) - xi1 over the
// central fiber, in primed coordinates.
DeltaSystem assemble_delta(const GluedFamily& fam, int degree) {
  PairAnsatz a = make_pair_ansatz(degree);
  Transition t0 = specialize_transition(fam.transition("W", "Wp"), Rational(0));
  ChartVectorField xi0("W", a.cv0, a.cy0, SparseExpr());
  Derivation delta = pushforward(xi0, t0);
  delta.comp[var_v()] = delta.component(var_v()) - a.cv1;
  delta.comp[var_y()] = delta.component(var_y()) - a.cy1;
  for (const auto& [x, c] : delta.comp) {
    if (x != var_v() && x != var_y() && !c.is_zero())
      throw InternalCheckFailure("overlap section has a component outside (v, y)");
    if (c.contains(var_t()))
      throw InternalCheckFailure("central-fiber section depends on t");
  }
  DeltaSystem s;
  s.unknowns = a.unknowns;
  for (size_t i = 0; i < s.unknowns.size(); ++i) s.index.emplace(s.unknowns[i], i);
  auto all = [](const Monomial&) { return true; };
  accumulate_rows(s.rows, 0, delta.component(var_v()), s.index, all);
  accumulate_rows(s.rows, 1, delta.component(var_y()), s.index, all);
  return s;
}

bool inside_window(const std::pair<int, Monomial>& key, int window, bool exclude) {
  int ve = key.second.exponent(var_v());
  if (ve < -window || ve > window) return false;
  if (exclude && key.first == 1 && ve == -1 && key.second.exponent(var_y()) == 0)
    return false;
  return true;
}

}  // namespace

WindowComputation h1_window(const GluedFamily& fam, int window,
                            bool exclude_obstruction_slot) {
  if (window < 3) throw DimensionMismatch("window must be >= 3");
  int degree = window + 3;
  DeltaSystem s = assemble_delta(fam, degree);

  RowMap out_rows, in_rows;
  for (const auto& [key, row] : s.rows)
    (inside_window(key, window, exclude_obstruction_slot) ? in_rows : out_rows)
        .emplace(key, row);

  // Pairs whose coboundary stays inside the window, then the rank of their
  // image there. Out-of-window slots include the excluded one, forcing it to
  // zero on both sides of the quotient.
  RationalMatrix mo = rows_to_matrix(out_rows, s.unknowns.size());
  RationalMatrix mi = rows_to_matrix(in_rows, s.unknowns.size());
  std::vector<std::vector<Rational>> k = kernel_basis(mo);
  RationalMatrix img(mi.rows(), k.size());
  for (size_t j = 0; j < k.size(); ++j) {
    std::vector<Rational> col = mi.apply(k[j]);
    for (size_t i = 0; i < col.size(); ++i) img.at(i, j) = col[i];
  }

  WindowComputation w;
  w.window = window;
  w.degree_bound = degree;
  w.section_dim = 4 * (2 * static_cast<size_t>(window) + 1) -
                  (exclude_obstruction_slot ? 1 : 0);
  w.coboundary_dim = rank(img);
  w.h1 = w.section_dim - w.coboundary_dim;
  w.slot_excluded = exclude_obstruction_slot;
  return w;
}

size_t h0_dimension(const GluedFamily& fam, int degree_bound) {
  if (degree_bound < 2) throw DimensionMismatch("degree bound must be >= 2");
  DeltaSystem s = assemble_delta(fam, degree_bound);
  return kernel_basis(rows_to_matrix(s.rows, s.unknowns.size())).size();
}

bool is_coboundary(const GluedFamily& fam, const Derivation& section, int window) {
  if (window < 3) throw DimensionMismatch("window must be >= 3");
  for (const auto& [x, c] : section.comp)
    if (x != var_v() && x != var_y() && !c.is_zero())
      throw ChartMismatch("overlap section has a component outside (v, y)");

  DeltaSystem s = assemble_delta(fam, window + 3);
  RowMap rows = s.rows;
  for (int comp = 0; comp < 2; ++comp) {
    const SparseExpr c = section.component(comp == 0 ? var_v() : var_y());
    for (const auto& [m, coeff] : c.terms()) {
      (void)coeff;
      rows.emplace(std::make_pair(comp, m),
                   std::vector<Rational>(s.unknowns.size(), Rational(0)));
    }
  }
  RationalMatrix m = rows_to_matrix(rows, s.unknowns.size());
  std::vector<Rational> rhs;
  rhs.reserve(rows.size());
  for (const auto& [key, row] : rows) {
    (void)row;
    rhs.push_back(section.component(key.first == 0 ? var_v() : var_y()).coeff(key.second));
  }
  return solve_affine(m, rhs).consistent;
}

Derivation deformation_cocycle(const GluedFamily& fam) {
  const Transition& tr = fam.transition("W", "Wp");
  VarId eps = var_eps();
  SparseExpr first_order = SparseExpr::variable(eps).with_truncation(eps, 1);
  std::map<VarId, SparseExpr, VarLess> to_eps{{var_t(), first_order}};

  Transition te;
  te.source = tr.source;
  te.target = tr.target;
  for (const auto& [w, e] : tr.rules)
    if (w != var_t()) te.rules.emplace(w, e.substitute(to_eps));
  for (const auto& [w, e] : tr.inverse_rules)
    if (w != var_t()) te.inverse_rules.emplace(w, e.substitute(to_eps));
  te.rules.emplace(eps, first_order);
  te.inverse_rules.emplace(eps, first_order);

  Derivation along;
  along.comp.emplace(eps, SparseExpr::constant(Rational(1)));
  Derivation coc = pushforward(along, te);
  coc.comp[eps] = coc.component(eps) - SparseExpr::constant(Rational(1));
  if (!coc.component(eps).is_zero())
    throw InternalCheckFailure("deformation direction does not survive the flip");
  coc.comp.erase(eps);
  for (auto& [x, c] : coc.comp) {
    (void)x;
    if (c.contains(eps))
      throw InternalCheckFailure("deformation class is not eps-free");
    c = c.without_truncations();
  }
  return coc;
}

CohomologyReport cohomology_report(const GluedFamily& fam,
                                   const std::vector<int>& windows) {
  if (windows.empty()) throw DimensionMismatch("at least one window is required");
  std::vector<int> ws = windows;
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());

  CohomologyReport rep;
  for (int w : ws) rep.windows.push_back(h1_window(fam, w));
  rep.h1 = rep.windows.back().h1;
  rep.stabilized =
      rep.windows.size() >= 2 &&
      std::all_of(rep.windows.begin(), rep.windows.end(),
                  [&](const WindowComputation& w) { return w.h1 == rep.h1; });

  int wmax = ws.back();
  rep.h0 = h0_dimension(fam, wmax + 3);

  Derivation coc = deformation_cocycle(fam);
  std::string s;
  SparseExpr cvd = coc.component(var_v());
  SparseExpr cyd = coc.component(var_y());
  if (!cvd.is_zero()) s += "(" + cvd.canonical_string() + ") d/dv";
  if (!cyd.is_zero()) {
    if (!s.empty()) s += " + ";
    s += "(" + cyd.canonical_string() + ") d/dy";
  }
  rep.cocycle = s.empty() ? "0" : s;
  rep.cocycle_is_coboundary = is_coboundary(fam, coc, wmax);
  rep.h1_excluding_slot = h1_window(fam, wmax, true).h1;
  return rep;
}

}  // namespace f2v
