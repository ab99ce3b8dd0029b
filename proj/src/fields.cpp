#include "f2v/fields.hpp"

#include <cstdio>
#include <functional>
#include <map>

#include "linear_rows.hpp"

namespace f2v {

using detail::RowMap;
using detail::accumulate_rows;
using detail::rows_to_matrix;

namespace {

VarId unknown_symbol(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "q%04d", index);
  return VarId::intern(buf);
}

// Slot 0 is the d/dv coefficient, 1 the d/dy coefficient, 2 the d/dt one.
struct Slot {
  int comp;
  Monomial base;
};

struct Ansatz {
  std::vector<VarId> unknowns;
  std::vector<Slot> slots;
  SparseExpr cv, cy, ct;
};

void add_slot(Ansatz& a, int comp, const Monomial& base) {
  VarId q = unknown_symbol(static_cast<int>(a.unknowns.size()) + 1);
  a.unknowns.push_back(q);
  a.slots.push_back({comp, base});
  SparseExpr term = SparseExpr::term(Rational(1), base.times(Monomial::var(q)));
  if (comp == 0)
    a.cv = a.cv + term;
  else if (comp == 1)
    a.cy = a.cy + term;
  else
    a.ct = a.ct + term;
}

Ansatz make_family_ansatz(int order, int degree) {
  Ansatz a;
  for (int ve = 0; ve <= degree; ++ve)
    for (int te = 0; te <= order; ++te)
      add_slot(a, 0, Monomial::from_factors({{var_t(), te}, {var_v(), ve}}));
  for (int ye = 0; ye <= 2; ++ye)
    for (int ve = 0; ve <= degree; ++ve)
      for (int te = 0; te <= order; ++te)
        add_slot(a, 1,
                 Monomial::from_factors({{var_t(), te}, {var_v(), ve}, {var_y(), ye}}));
  for (int te = 0; te <= order; ++te) add_slot(a, 2, Monomial::var(var_t(), te));
  a.cv = a.cv.with_truncation(var_t(), order);
  a.cy = a.cy.with_truncation(var_t(), order);
  a.ct = a.ct.with_truncation(var_t(), order);
  return a;
}

Ansatz make_fiber_ansatz(int degree) {
  Ansatz a;
  for (int ve = 0; ve <= degree; ++ve) add_slot(a, 0, Monomial::var(var_v(), ve));
  for (int ye = 0; ye <= 2; ++ye)
    for (int ve = 0; ve <= degree; ++ve)
      add_slot(a, 1, Monomial::from_factors({{var_v(), ve}, {var_y(), ye}}));
  return a;
}

SparseExpr instantiate(const Ansatz& a, int comp, const std::vector<Rational>& values) {
  SparseExpr out;
  for (size_t i = 0; i < a.slots.size(); ++i)
    if (a.slots[i].comp == comp && !is_zero(values[i]))
      out = out + SparseExpr::term(values[i], a.slots[i].base);
  return out;
}

bool negative_v(const Monomial& m) { return m.exponent(var_v()) < 0; }

}  // namespace

GlobalFieldBasis solve_global_fields(const GluedFamily& fam, int order, int degree) {
  if (order < 0) throw DimensionMismatch("order must be >= 0");
  if (degree < 2) throw DimensionMismatch("ansatz degree must be >= 2");

  Ansatz a = make_family_ansatz(order, degree);
  ChartVectorField generic("W", a.cv, a.cy, a.ct);
  const Transition& tr = fam.transition("W", "Wp");
  Derivation img = pushforward(generic, tr);

  // The gluing constraints are exactly the negative v-exponent rows; the rest
  // of the target profile holds identically and is asserted, not imposed.
  if (img.component(var_v()).contains(var_y()))
    throw InternalCheckFailure("image d/dv coefficient depends on y");
  if (img.component(var_y()).degree_in(var_y()) > 2)
    throw InternalCheckFailure("image d/dy coefficient exceeds y-degree 2");
  if (img.component(var_t()).contains(var_v()) ||
      img.component(var_t()).contains(var_y()))
    throw InternalCheckFailure("image d/dt coefficient depends on fiber coordinates");

  std::map<VarId, size_t, VarLess> index;
  for (size_t i = 0; i < a.unknowns.size(); ++i) index.emplace(a.unknowns[i], i);

  RowMap rows;
  accumulate_rows(rows, 0, img.component(var_v()), index, negative_v);
  accumulate_rows(rows, 1, img.component(var_y()), index, negative_v);
  accumulate_rows(rows, 2, img.component(var_t()), index, negative_v);

  RationalMatrix m = rows_to_matrix(rows, a.unknowns.size());
  GlobalFieldBasis basis;
  basis.order = order;
  basis.degree = degree;
  for (const auto& w : kernel_basis(m)) {
    SparseExpr cv = instantiate(a, 0, w).with_truncation(var_t(), order);
    SparseExpr cy = instantiate(a, 1, w).with_truncation(var_t(), order);
    SparseExpr ct = instantiate(a, 2, w).with_truncation(var_t(), order);
    ChartVectorField f1("W", cv, cy, ct);
    basis.chart1.push_back(f1);
    basis.chart2.push_back(ChartVectorField::from_derivation("Wp", pushforward(f1, tr)));
  }
  return basis;
}

std::pair<ChartVectorField, ChartVectorField> field_from_parameters(
    const FieldParameters& p, const GluedFamily& fam, int order) {
  for (const SparseExpr* s : {&p.A, &p.B, &p.C, &p.a, &p.b, &p.c, &p.e})
    if (s->contains(var_v()) || s->contains(var_y()))
      throw F2VError("field parameters must not involve fiber coordinates");

  auto ctx = [&](const SparseExpr& s) { return s.with_truncation(var_t(), order); };
  SparseExpr A = ctx(p.A), B = ctx(p.B), C = ctx(p.C);
  SparseExpr a = ctx(p.a), b = ctx(p.b), c = ctx(p.c), e = ctx(p.e);
  SparseExpr T = ctx(SparseExpr::variable(var_t()));
  SparseExpr V = SparseExpr::variable(var_v());
  SparseExpr Y = SparseExpr::variable(var_y());

  SparseExpr g = (A * V + B) * V + C;
  SparseExpr al = (a * V + b) * V + c;
  SparseExpr be = rat(-2) * (a * T + A) * V + e;
  SparseExpr ga = T * T * a + T * A;
  SparseExpr k = T * T * b + T * e + T * B;

  ChartVectorField f1("W", g, (al * Y + be) * Y + ga, k);
  Derivation d2 = pushforward(f1, fam.transition("W", "Wp"));
  return {f1, ChartVectorField::from_derivation("Wp", d2)};
}

FieldParameters parameters_of(const ChartVectorField& f) {
  SparseExpr al = f.coeff_y().coefficient_of(var_y(), 2);
  SparseExpr be = f.coeff_y().coefficient_of(var_y(), 1);
  FieldParameters p;
  p.A = f.coeff_v().coefficient_of(var_v(), 2);
  p.B = f.coeff_v().coefficient_of(var_v(), 1);
  p.C = f.coeff_v().coefficient_of(var_v(), 0);
  p.a = al.coefficient_of(var_v(), 2);
  p.b = al.coefficient_of(var_v(), 1);
  p.c = al.coefficient_of(var_v(), 0);
  p.e = be.coefficient_of(var_v(), 0);
  return p;
}

ParametrizationReport verify_field_parametrization(const GluedFamily& fam,
                                                   const GlobalFieldBasis& basis) {
  (void)fam;
  ParametrizationReport rep;
  int N = basis.order;
  auto TR = [&](const SparseExpr& x) { return x.with_truncation(var_t(), N); };
  SparseExpr T = TR(SparseExpr::variable(var_t()));
  SparseExpr V = SparseExpr::variable(var_v());
  SparseExpr V2 = V * V;
  std::map<VarId, SparseExpr, VarLess> flip{{var_v(), parse_expr("1 * v^-1")}};

  auto fail = [&](size_t i, const std::string& what, const SparseExpr& residual) {
    rep.pass = false;
    if (rep.detail.empty())
      rep.detail = "element " + std::to_string(i) + ": " + what + ", residual " +
                   residual.canonical_string();
  };

  for (size_t i = 0; i < basis.chart1.size(); ++i) {
    const ChartVectorField& f1 = basis.chart1[i];
    const ChartVectorField& f2 = basis.chart2[i];
    SparseExpr g = TR(f1.coeff_v());
    SparseExpr al = TR(f1.coeff_y().coefficient_of(var_y(), 2));
    SparseExpr be = TR(f1.coeff_y().coefficient_of(var_y(), 1));
    SparseExpr ga = TR(f1.coeff_y().coefficient_of(var_y(), 0));
    SparseExpr k = TR(f1.coeff_t());
    FieldParameters p = parameters_of(f1);
    SparseExpr A = TR(p.A), B = TR(p.B), a = TR(p.a), b = TR(p.b), e = TR(p.e);

    if (g.degree_in(var_v()) > 2) fail(i, "dv_degree", g);
    if (al.degree_in(var_v()) > 2) fail(i, "ysq_degree", al);
    if (be.degree_in(var_v()) > 1) fail(i, "ylin_degree", be);
    if (ga.contains(var_v())) fail(i, "yconst_vfree", ga);

    SparseExpr r1 = be.coefficient_of(var_v(), 1) - rat(-2) * (a * T + A);
    if (!r1.is_zero()) fail(i, "ylin_determined", r1);
    SparseExpr r2 = ga - (T * T * a + T * A);
    if (!r2.is_zero()) fail(i, "yconst_determined", r2);
    SparseExpr r3 = k - (T * T * b + T * e + T * B);
    if (!r3.is_zero()) fail(i, "base_formula", r3);
    if (!k.coefficient_of(var_t(), 0).is_zero())
      fail(i, "base_vanishes_at_origin", k.coefficient_of(var_t(), 0));

    // Primed-chart reconstruction from the unprimed data.
    SparseExpr gs = g.substitute(flip), als = al.substitute(flip),
               bes = be.substitute(flip), gas = ga.substitute(flip);
    SparseExpr g2 = TR(f2.coeff_v());
    SparseExpr al2 = TR(f2.coeff_y().coefficient_of(var_y(), 2));
    SparseExpr be2 = TR(f2.coeff_y().coefficient_of(var_y(), 1));
    SparseExpr ga2 = TR(f2.coeff_y().coefficient_of(var_y(), 0));
    SparseExpr k2 = TR(f2.coeff_t());
    SparseExpr vinv = parse_expr("1 * v^-1");

    SparseExpr r4 = g2 - (-(V2 * gs));
    if (!r4.is_zero()) fail(i, "primed_dv", r4);
    SparseExpr r5 = al2 - V2 * als;
    if (!r5.is_zero()) fail(i, "primed_ysq", r5);
    SparseExpr r6 = be2 - (rat(2) * T * V * als + bes + rat(2) * V * gs);
    if (!r6.is_zero()) fail(i, "primed_ylin", r6);
    SparseExpr r7 =
        ga2 - (T * T * als + T * vinv * bes + vinv * vinv * gas + T * gs - k * vinv);
    if (!r7.is_zero()) fail(i, "primed_yconst", r7);
    SparseExpr r8 = k2 - k;
    if (!r8.is_zero()) fail(i, "primed_base", r8);

    ++rep.elements_checked;
  }
  return rep;
}

size_t fiber_field_dimension(const GluedFamily& fam, const Rational& tau, int degree) {
  if (degree < 2) throw DimensionMismatch("ansatz degree must be >= 2");

  Ansatz a = make_fiber_ansatz(degree);
  ChartVectorField generic("W", a.cv, a.cy, SparseExpr());
  Transition tr = specialize_transition(fam.transition("W", "Wp"), tau);
  Derivation img = pushforward(generic, tr);

  std::map<VarId, size_t, VarLess> index;
  for (size_t i = 0; i < a.unknowns.size(); ++i) index.emplace(a.unknowns[i], i);
  RowMap rows;
  accumulate_rows(rows, 0, img.component(var_v()), index, negative_v);
  accumulate_rows(rows, 1, img.component(var_y()), index, negative_v);
  return kernel_basis(rows_to_matrix(rows, a.unknowns.size())).size();
}

}  // namespace f2v
