#include "f2v/groebner.hpp"

#include <algorithm>
#include <set>

namespace f2v {

namespace {

void require_polynomial(const SparseExpr& f) {
  for (const auto& [m, c] : f.terms()) {
    (void)c;
    if (m.has_negative_exponent())
      throw F2VError("Groebner input must be polynomial, found negative exponent");
  }
  if (!f.truncations().empty())
    throw F2VError("Groebner input must not carry truncation bounds");
}

std::vector<int> exponents(const Monomial& m, const std::vector<VarId>& vars) {
  std::vector<int> e(vars.size(), 0);
  long covered = 0;
  for (size_t i = 0; i < vars.size(); ++i) {
    e[i] = m.exponent(vars[i]);
    if (e[i] != 0) ++covered;
  }
  if (covered != static_cast<long>(m.factors().size()))
    throw F2VError("monomial uses a variable outside the declared order");
  return e;
}

}  // namespace

bool monomial_less(const Monomial& a, const Monomial& b, MonomialOrder order,
                   const std::vector<VarId>& vars) {
  std::vector<int> ea = exponents(a, vars), eb = exponents(b, vars);
  if (order == MonomialOrder::lex) {
    for (size_t i = 0; i < vars.size(); ++i)
      if (ea[i] != eb[i]) return ea[i] < eb[i];
    return false;
  }
  long da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  // Graded reverse lex: the rightmost difference decides, larger exponent in
  // the least significant place means smaller monomial.
  for (size_t i = vars.size(); i-- > 0;)
    if (ea[i] != eb[i]) return ea[i] > eb[i];
  return false;
}

Monomial leading_monomial(const SparseExpr& f, MonomialOrder order,
                          const std::vector<VarId>& vars) {
  if (f.is_zero()) throw F2VError("leading monomial of zero");
  const Monomial* best = nullptr;
  for (const auto& [m, c] : f.terms()) {
    (void)c;
    if (!best || monomial_less(*best, m, order, vars)) best = &m;
  }
  return *best;
}

SparseExpr normal_form(const SparseExpr& f, const std::vector<SparseExpr>& divisors,
                       MonomialOrder order, const std::vector<VarId>& vars) {
  require_polynomial(f);
  struct Divisor {
    Monomial lm;
    Rational lc;
    const SparseExpr* poly;
  };
  std::vector<Divisor> divs;
  for (const auto& d : divisors) {
    if (d.is_zero()) continue;
    require_polynomial(d);
    Monomial lm = leading_monomial(d, order, vars);
    divs.push_back({lm, d.coeff(lm), &d});
  }

  SparseExpr r = f;
  for (;;) {
    // Largest reducible term, first matching divisor; fixed choices keep the
    // computation deterministic.
    const Monomial* target = nullptr;
    const Divisor* by = nullptr;
    for (const auto& [m, c] : r.terms()) {
      (void)c;
      if (target && monomial_less(m, *target, order, vars)) continue;
      for (const auto& d : divs)
        if (m.divide_nonneg(d.lm)) {
          target = &m;
          by = &d;
          break;
        }
    }
    if (!target) return r;
    Rational factor = r.coeff(*target) / by->lc;
    SparseExpr quotient = SparseExpr::term(factor, target->times(by->lm.inverse()));
    r = r - quotient * (*by->poly);
  }
}

SparseExpr s_polynomial(const SparseExpr& f, const SparseExpr& g,
                        MonomialOrder order, const std::vector<VarId>& vars) {
  Monomial lf = leading_monomial(f, order, vars);
  Monomial lg = leading_monomial(g, order, vars);
  std::vector<std::pair<VarId, int>> lcm_factors;
  for (VarId x : vars) {
    int e = std::max(lf.exponent(x), lg.exponent(x));
    if (e != 0) lcm_factors.emplace_back(x, e);
  }
  Monomial lcm = Monomial::from_factors(lcm_factors);
  SparseExpr uf = SparseExpr::term(Rational(1) / f.coeff(lf), lcm.times(lf.inverse()));
  SparseExpr ug = SparseExpr::term(Rational(1) / g.coeff(lg), lcm.times(lg.inverse()));
  return uf * f - ug * g;
}

std::vector<VarId> significance_order(const std::vector<SparseExpr>& gens) {
  std::set<VarId, VarLess> seen;
  for (const auto& g : gens)
    for (VarId x : g.variables()) seen.insert(x);
  return {seen.begin(), seen.end()};
}

bool GroebnerBasis::is_unit_ideal() const {
  return polys.size() == 1 && polys[0].is_constant() &&
         polys[0].constant_value() == Rational(1);
}

GroebnerBasis groebner_basis(const std::vector<SparseExpr>& gens, MonomialOrder order) {
  return groebner_basis(gens, order, significance_order(gens));
}

GroebnerBasis groebner_basis(const std::vector<SparseExpr>& gens, MonomialOrder order,
                             std::vector<VarId> vars) {
  std::vector<SparseExpr> basis;
  for (const auto& g : gens) {
    require_polynomial(g);
    if (!g.is_zero()) basis.push_back(g.without_truncations());
  }

  struct Pair {
    size_t i, j;
    long lcm_degree;
  };
  auto lcm_degree = [&](size_t i, size_t j) {
    Monomial a = leading_monomial(basis[i], order, vars);
    Monomial b = leading_monomial(basis[j], order, vars);
    long d = 0;
    for (VarId x : vars) d += std::max(a.exponent(x), b.exponent(x));
    return d;
  };
  std::vector<Pair> pending;
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j)
      pending.push_back({i, j, lcm_degree(i, j)});

  while (!pending.empty()) {
    // Normal selection: smallest lcm degree first, then insertion order.
    size_t pick = 0;
    for (size_t k = 1; k < pending.size(); ++k)
      if (pending[k].lcm_degree < pending[pick].lcm_degree) pick = k;
    Pair p = pending[pick];
    pending.erase(pending.begin() + static_cast<long>(pick));

    Monomial a = leading_monomial(basis[p.i], order, vars);
    Monomial b = leading_monomial(basis[p.j], order, vars);
    // Coprime leading monomials reduce to zero automatically.
    if (a.times(b) == Monomial::from_factors([&] {
          std::vector<std::pair<VarId, int>> f;
          for (VarId x : vars) {
            int e = std::max(a.exponent(x), b.exponent(x));
            if (e != 0) f.emplace_back(x, e);
          }
          return f;
        }()))
      continue;

    SparseExpr s = s_polynomial(basis[p.i], basis[p.j], order, vars);
    SparseExpr r = normal_form(s, basis, order, vars);
    if (r.is_zero()) continue;
    basis.push_back(r);
    for (size_t i = 0; i + 1 < basis.size(); ++i)
      pending.push_back({i, basis.size() - 1, lcm_degree(i, basis.size() - 1)});
  }

  // Reduce: monic, minimal, inter-reduced, sorted by leading monomial.
  for (auto& f : basis) {
    Monomial lm = leading_monomial(f, order, vars);
    f = (Rational(1) / f.coeff(lm)) * f;
  }
  std::vector<SparseExpr> minimal;
  for (size_t i = 0; i < basis.size(); ++i) {
    Monomial lm = leading_monomial(basis[i], order, vars);
    bool redundant = false;
    for (size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      Monomial other = leading_monomial(basis[j], order, vars);
      if (!lm.divide_nonneg(other)) continue;
      // Equal leading monomials: keep the earlier element only.
      if (other == lm && i < j) continue;
      redundant = true;
    }
    if (!redundant) minimal.push_back(basis[i]);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < minimal.size(); ++i) {
      std::vector<SparseExpr> others;
      for (size_t j = 0; j < minimal.size(); ++j)
        if (j != i) others.push_back(minimal[j]);
      SparseExpr r = normal_form(minimal[i], others, order, vars);
      if (r != minimal[i]) {
        if (r.is_zero())
          throw InternalCheckFailure("minimal basis element reduced to zero");
        Monomial lm = leading_monomial(r, order, vars);
        minimal[i] = (Rational(1) / r.coeff(lm)) * r;
        changed = true;
      }
    }
  }
  std::sort(minimal.begin(), minimal.end(), [&](const SparseExpr& x, const SparseExpr& y) {
    return monomial_less(leading_monomial(x, order, vars),
                         leading_monomial(y, order, vars), order, vars);
  });

  GroebnerBasis out;
  out.polys = std::move(minimal);
  out.order = order;
  out.vars = std::move(vars);
  return out;
}

bool certify_empty(const std::vector<SparseExpr>& gens) {
  std::vector<VarId> vars = significance_order(gens);
  bool grevlex = groebner_basis(gens, MonomialOrder::grevlex, vars).is_unit_ideal();
  bool lex = groebner_basis(gens, MonomialOrder::lex, vars).is_unit_ideal();
  if (grevlex != lex)
    throw InternalCheckFailure("monomial orders disagree on the unit ideal");
  return grevlex;
}

}  // namespace f2v
