#pragma once

// Buchberger's algorithm over Q on SparseExpr polynomials (no Laurent
// exponents, no truncation). Reduced bases are deterministic; the emptiness
// certificate for a polynomial system is reduced basis == {1}, computed under
// grevlex and cross-checked under lex.

#include <vector>

#include "f2v/expr.hpp"

namespace f2v {

enum class MonomialOrder { grevlex, lex };

// Strict a < b. `vars` lists the variables most significant first; every
// variable occurring in compared monomials must be listed.
bool monomial_less(const Monomial& a, const Monomial& b, MonomialOrder order,
                   const std::vector<VarId>& vars);

Monomial leading_monomial(const SparseExpr& f, MonomialOrder order,
                          const std::vector<VarId>& vars);

// Fully reduced remainder: no term of the result is divisible by any leading
// monomial of the divisors.
SparseExpr normal_form(const SparseExpr& f, const std::vector<SparseExpr>& divisors,
                       MonomialOrder order, const std::vector<VarId>& vars);

SparseExpr s_polynomial(const SparseExpr& f, const SparseExpr& g,
                        MonomialOrder order, const std::vector<VarId>& vars);

struct GroebnerBasis {
  std::vector<SparseExpr> polys;  // reduced: monic, minimal, inter-reduced,
                                  // sorted ascending by leading monomial
  MonomialOrder order = MonomialOrder::grevlex;
  std::vector<VarId> vars;        // significance order, most significant first

  bool is_unit_ideal() const;
};

// Variable significance defaults to ascending canonical name order (the first
// listed variable is the most significant).
std::vector<VarId> significance_order(const std::vector<SparseExpr>& gens);

GroebnerBasis groebner_basis(const std::vector<SparseExpr>& gens,
                             MonomialOrder order = MonomialOrder::grevlex);
GroebnerBasis groebner_basis(const std::vector<SparseExpr>& gens,
                             MonomialOrder order, std::vector<VarId> vars);

// True iff the system has no common zero over any field extension, certified
// by the reduced basis being {1} under both monomial orders.
bool certify_empty(const std::vector<SparseExpr>& gens);

}  // namespace f2v
