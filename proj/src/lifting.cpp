#include "f2v/lifting.hpp"

#include <cstdio>
#include <set>

#include "f2v/rng.hpp"
#include "linear_rows.hpp"

namespace f2v {

namespace {

VarId order_unknown(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "q%03d", index);
  return VarId::intern(buf);
}

VarId free_symbol(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "p%03d", index);
  return VarId::intern(buf);
}

SparseExpr& slot(FieldParameters& p, int s) {
  switch (s) {
    case 0: return p.A;
    case 1: return p.B;
    case 2: return p.C;
    case 3: return p.a;
    case 4: return p.b;
    case 5: return p.c;
    case 6: return p.e;
  }
  throw F2VError("parameter slot out of range");
}

struct AffineRow {
  std::vector<Rational> a;
  SparseExpr rhs;
};

using AffineRows = std::map<std::pair<int, Monomial>, AffineRow, detail::RowKeyLess>;

AffineRow& row_at(AffineRows& rows, int comp, std::vector<std::pair<VarId, int>> vy,
                  size_t qcount) {
  return rows
      .emplace(std::make_pair(comp, Monomial::from_factors(std::move(vy))),
               AffineRow{std::vector<Rational>(qcount, Rational(0)), SparseExpr()})
      .first->second;
}

// Residual of the accumulated series, free of order unknowns: its t^m terms
// are the right-hand sides, and everything below must already have cancelled.
void split_rhs_rows(AffineRows& rows, int comp, const SparseExpr& expr, size_t qcount,
                    int m) {
  for (const auto& [mono, coeff] : expr.terms()) {
    int alpha = mono.exponent(var_t());
    if (alpha > m) continue;
    if (alpha < m)
      throw InternalCheckFailure("residual term survives below the working order");
    std::vector<std::pair<VarId, int>> vy, aux;
    for (const auto& [x, e] : mono.factors()) {
      if (x == var_t()) continue;
      if (x == var_v() || x == var_y())
        vy.emplace_back(x, e);
      else
        aux.emplace_back(x, e);
    }
    AffineRow& row = row_at(rows, comp, std::move(vy), qcount);
    row.rhs = row.rhs - SparseExpr::term(coeff, Monomial::from_factors(aux));
  }
}

// Residual of gauge + t^m unknowns. Only the unknown-linear t^m terms are the
// matrix entries; the gauge's own residual terms here are the business of the
// rhs pass and are skipped.
void split_matrix_rows(AffineRows& rows, int comp, const SparseExpr& expr,
                       const std::map<VarId, size_t, VarLess>& qindex, int m) {
  for (const auto& [mono, coeff] : expr.terms()) {
    if (mono.exponent(var_t()) != m) continue;
    std::vector<std::pair<VarId, int>> vy, aux;
    for (const auto& [x, e] : mono.factors()) {
      if (x == var_t()) continue;
      if (x == var_v() || x == var_y())
        vy.emplace_back(x, e);
      else
        aux.emplace_back(x, e);
    }
    if (aux.empty()) continue;
    if (aux.size() != 1 || aux[0].second != 1 || !qindex.count(aux[0].first))
      throw InternalCheckFailure("order unknown enters nonlinearly");
    AffineRow& row = row_at(rows, comp, std::move(vy), qindex.size());
    row.a[qindex.at(aux[0].first)] += coeff;
  }
}

struct StepSystem {
  std::vector<VarId> unknowns;
  RationalMatrix matrix;
  std::vector<SparseExpr> rhs;
};

// Order-zero part of the series; the free parameters only enter at t >= 1.
std::array<FieldParameters, 7> gauge_part(const std::array<FieldParameters, 7>& series) {
  std::array<FieldParameters, 7> g = series;
  for (int i = 0; i < 7; ++i)
    for (int sl = 0; sl < 7; ++sl) {
      SparseExpr& e = slot(g[i], sl);
      e = e.coefficient_of(var_t(), 0);
      if (!e.is_constant())
        throw InternalCheckFailure("series head is not the constant gauge");
    }
  return g;
}

// Bracket residuals at t-order m, assembled in two passes. The unknown
// columns only interact with the order-zero gauge: a t^m unknown times any
// t^r series tail lands above m, and the d/dt coupling reads the t-linear
// base coefficient, which is gauge data. So the matrix comes from perturbing
// the bare gauge, and the right-hand sides from the series alone, which keeps
// the heavy symbolic products free of the 49 unknown symbols. Fields are
// truncated one order above m: base components vanish at t = 0, so every t^m
// residual coefficient is complete, while d/dt would otherwise clip it.
StepSystem assemble_step(const GluedFamily& fam, const StructureConstants& s,
                         const std::array<FieldParameters, 7>& series, int m) {
  StepSystem sys;
  std::map<VarId, size_t, VarLess> qindex;
  if (m > 0)
    for (int i = 0; i < 7; ++i)
      for (int sl = 0; sl < 7; ++sl) {
        VarId q = order_unknown(i * 7 + sl + 1);
        qindex.emplace(q, sys.unknowns.size());
        sys.unknowns.push_back(q);
      }

  auto residual_rows = [&](const std::array<FieldParameters, 7>& params,
                           AffineRows& rows, bool matrix_pass) {
    std::vector<ChartVectorField> lifted;
    for (int i = 0; i < 7; ++i)
      lifted.push_back(field_from_parameters(params[i], fam, m + 1).first);
    int pair_idx = 0;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j, ++pair_idx) {
        ChartVectorField r = bracket(lifted[i], lifted[j]);
        for (int k = 1; k <= 7; ++k) {
          const Rational& c = s.c(i + 1, j + 1, k);
          if (!is_zero(c)) r = r - lifted[k - 1].scaled(c);
        }
        const SparseExpr comps[3] = {r.coeff_v(), r.coeff_y(), r.coeff_t()};
        for (int c3 = 0; c3 < 3; ++c3) {
          if (matrix_pass)
            split_matrix_rows(rows, pair_idx * 3 + c3, comps[c3], qindex, m);
          else
            split_rhs_rows(rows, pair_idx * 3 + c3, comps[c3], qindex.size(), m);
        }
      }
  };

  AffineRows rows;
  residual_rows(series, rows, false);
  if (m > 0) {
    std::array<FieldParameters, 7> pert = gauge_part(series);
    Monomial tm = Monomial::var(var_t(), m);
    for (int i = 0; i < 7; ++i)
      for (int sl = 0; sl < 7; ++sl)
        slot(pert[i], sl) =
            slot(pert[i], sl) +
            SparseExpr::term(Rational(1),
                             tm.times(Monomial::var(order_unknown(i * 7 + sl + 1))));
    residual_rows(pert, rows, true);
  }

  sys.matrix = RationalMatrix(rows.size(), sys.unknowns.size());
  size_t ri = 0;
  for (const auto& [key, row] : rows) {
    (void)key;
    for (size_t c = 0; c < sys.unknowns.size(); ++c) sys.matrix.at(ri, c) = row.a[c];
    sys.rhs.push_back(row.rhs);
    ++ri;
  }
  return sys;
}

struct StepOutcome {
  OrderReport report;
  std::vector<VarId> fresh;
  std::map<VarId, SparseExpr, VarLess> solution;
  bool specialize_at_zero = false;
};

StepOutcome solve_step(const StepSystem& sys, int m, int& psym_counter) {
  RrefResult rr = rref(sys.matrix);
  StepOutcome out;
  OrderReport& rep = out.report;
  rep.order = m;
  rep.unknown_count = sys.unknowns.size();
  rep.equation_count = sys.matrix.rows();
  rep.matrix_rank = rr.rank;
  rep.matrix = sys.matrix;
  rep.rhs = sys.rhs;

  auto transformed_rhs = [&](size_t r) {
    SparseExpr acc;
    for (size_t c = 0; c < sys.matrix.rows(); ++c)
      acc = acc + rr.transform.at(r, c) * sys.rhs[c];
    return acc;
  };

  for (size_t r = rr.rank; r < sys.matrix.rows(); ++r) {
    SparseExpr cond = transformed_rhs(r);
    if (!cond.is_zero()) rep.conditions.push_back(cond);
  }
  if (!rep.conditions.empty()) {
    bool zero_solves = true;
    for (const auto& cond : rep.conditions)
      if (!is_zero(cond.coeff(Monomial()))) {
        zero_solves = false;
        break;
      }
    if (zero_solves) {
      // Satisfiable but not void: every condition vanishes when the earlier
      // free parameters are all zero, so that branch of the lift continues.
      out.specialize_at_zero = true;
      return out;
    }
    rep.status = LiftStatus::obstructed;
    rep.certificate = groebner_basis(rep.conditions);
    rep.certified_empty = certify_empty(rep.conditions);
    return out;
  }

  rep.status = LiftStatus::solvable;
  std::vector<bool> pivot(sys.unknowns.size(), false);
  for (size_t c : rr.pivot_cols) pivot[c] = true;
  std::map<size_t, SparseExpr> free_expr;
  for (size_t c = 0; c < sys.unknowns.size(); ++c)
    if (!pivot[c]) {
      VarId p = free_symbol(++psym_counter);
      out.fresh.push_back(p);
      free_expr.emplace(c, SparseExpr::variable(p));
    }
  rep.fresh_parameters = out.fresh.size();
  for (size_t r = 0; r < rr.rank; ++r) {
    SparseExpr val = transformed_rhs(r);
    for (const auto& [fc, fe] : free_expr)
      if (!is_zero(rr.reduced.at(r, fc))) val = val - rr.reduced.at(r, fc) * fe;
    out.solution.emplace(sys.unknowns[rr.pivot_cols[r]], val);
  }
  for (const auto& [fc, fe] : free_expr) out.solution.emplace(sys.unknowns[fc], fe);
  return out;
}

SparseExpr low_part(const SparseExpr& e, int order) {
  SparseExpr out;
  for (const auto& [m, c] : e.terms())
    if (m.exponent(var_t()) <= order) out = out + SparseExpr::term(c, m);
  return out;
}

}  // namespace

std::array<FieldParameters, 7> fundamental_gauge(const StructureConstants& s) {
  FundamentalFields ff = generate_fundamental_fields(LieAlgebraBasis::standard(), s);
  std::array<FieldParameters, 7> gauge;
  for (int i = 0; i < 7; ++i) gauge[i] = parameters_of(ff.chart1[i]);
  return gauge;
}

LiftResult run_lift(const GluedFamily& fam, const StructureConstants& s,
                    const std::array<FieldParameters, 7>& gauge, int target_order) {
  if (target_order < 0) throw DimensionMismatch("target order must be >= 0");
  for (const auto& g : gauge)
    for (const SparseExpr* e : {&g.A, &g.B, &g.C, &g.a, &g.b, &g.c, &g.e})
      if (!e->is_constant()) throw F2VError("gauge parameters must be constants");

  LiftResult lift;
  lift.target_order = target_order;
  lift.parameters = gauge;
  int psym = 0;
  for (int m = 0; m <= target_order; ++m) {
    StepSystem sys = assemble_step(fam, s, lift.parameters, m);
    StepOutcome out = solve_step(sys, m, psym);
    if (out.specialize_at_zero) {
      std::map<VarId, SparseExpr, VarLess> zeros;
      for (VarId p : lift.free_symbols) zeros.emplace(p, SparseExpr());
      for (int i = 0; i < 7; ++i)
        for (int sl = 0; sl < 7; ++sl)
          slot(lift.parameters[i], sl) = slot(lift.parameters[i], sl).substitute(zeros);
      lift.free_symbols.clear();
      sys = assemble_step(fam, s, lift.parameters, m);
      out = solve_step(sys, m, psym);
      out.report.specialized = true;
      if (out.specialize_at_zero || out.report.status != LiftStatus::solvable)
        throw InternalCheckFailure("zero specialization did not resolve the order");
    }
    if (out.report.status == LiftStatus::obstructed) {
      if (!out.report.certified_empty)
        throw F2VError("order " + std::to_string(m) +
                       " conditions are neither void nor certified empty");
      lift.status = LiftStatus::obstructed;
      lift.obstructed_order = m;
      lift.orders.push_back(std::move(out.report));
      break;
    }
    if (m > 0) {
      SparseExpr tm = SparseExpr::term(Rational(1), Monomial::var(var_t(), m));
      for (int i = 0; i < 7; ++i)
        for (int sl = 0; sl < 7; ++sl) {
          VarId q = order_unknown(i * 7 + sl + 1);
          slot(lift.parameters[i], sl) =
              slot(lift.parameters[i], sl) + tm * out.solution.at(q);
        }
    }
    lift.free_symbols.insert(lift.free_symbols.end(), out.fresh.begin(),
                             out.fresh.end());
    lift.orders.push_back(std::move(out.report));
  }

  for (int i = 0; i < 7; ++i) {
    Rational kappa = gauge[i].e.constant_value() + gauge[i].B.constant_value();
    lift.base.linear[i] = kappa;
    if (is_zero(kappa)) lift.base.vanishing.push_back(i + 1);
  }
  return lift;
}

std::string lift_residuals(const GluedFamily& fam, const StructureConstants& s,
                           const LiftResult& lift,
                           const std::map<VarId, Rational, VarLess>& values) {
  int solved = lift.status == LiftStatus::obstructed ? lift.obstructed_order - 1
                                                     : lift.target_order;
  if (solved < 0) return "no solved orders";

  std::map<VarId, SparseExpr, VarLess> assign;
  for (VarId p : lift.free_symbols) {
    auto it = values.find(p);
    assign.emplace(
        p, SparseExpr::constant(it == values.end() ? Rational(0) : it->second));
  }
  std::array<FieldParameters, 7> inst = lift.parameters;
  std::vector<ChartVectorField> fields;
  for (int i = 0; i < 7; ++i) {
    for (int sl = 0; sl < 7; ++sl) {
      SparseExpr& e = slot(inst[i], sl);
      e = e.substitute(assign);
      for (VarId x : e.variables())
        if (x != var_t()) return "parameter not numeric after substitution";
    }
    fields.push_back(field_from_parameters(inst[i], fam, solved + 1).first);
  }

  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) {
      ChartVectorField r = bracket(fields[i], fields[j]);
      for (int k = 1; k <= 7; ++k) {
        const Rational& c = s.c(i + 1, j + 1, k);
        if (!is_zero(c)) r = r - fields[k - 1].scaled(c);
      }
      const char* names[3] = {"d/dv", "d/dy", "d/dt"};
      const SparseExpr comps[3] = {r.coeff_v(), r.coeff_y(), r.coeff_t()};
      for (int c3 = 0; c3 < 3; ++c3) {
        SparseExpr low = low_part(comps[c3], solved);
        if (!low.is_zero())
          return "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                 ") " + names[c3] + " residual: " + low.canonical_string();
      }
    }
  return "";
}

SoundnessReport obstruction_soundness(const LiftResult& lift, uint64_t seed,
                                      size_t samples) {
  if (lift.status != LiftStatus::obstructed)
    throw F2VError("soundness check requires an obstructed lift");
  const OrderReport& rep = lift.orders.back();

  std::set<VarId, VarLess> vars;
  for (const auto& e : rep.rhs)
    for (VarId x : e.variables()) vars.insert(x);

  Rng rng(seed);
  SoundnessReport out;
  out.samples = samples;
  for (size_t n = 0; n < samples; ++n) {
    std::map<VarId, SparseExpr, VarLess> assign;
    for (VarId x : vars) assign.emplace(x, SparseExpr::constant(rng.rational()));
    std::vector<Rational> b;
    b.reserve(rep.rhs.size());
    for (const auto& e : rep.rhs) {
      SparseExpr v = e.substitute(assign);
      if (!v.is_constant())
        throw InternalCheckFailure("rhs not numeric after substitution");
      b.push_back(v.constant_value());
    }
    if (!solve_affine(rep.matrix, b).consistent) ++out.inconsistent;
  }
  return out;
}

}  // namespace f2v
