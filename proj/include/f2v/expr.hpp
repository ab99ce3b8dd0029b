#pragma once

// Sparse multivariate polynomials over Q, with two opt-in extensions that the
// chart computations need: per-variable Laurent exponents and per-variable
// series truncation (arithmetic mod x^(N+1)). Values are immutable; every
// operation returns a fresh expression in canonical form.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "f2v/rational.hpp"
#include "f2v/symbols.hpp"

namespace f2v {

class Monomial {
 public:
  Monomial() = default;

  static Monomial unit() { return Monomial(); }
  static Monomial var(VarId x, int exp = 1);

  // Factors are kept sorted in canonical variable order with no zero exponents.
  const std::vector<std::pair<VarId, int>>& factors() const { return factors_; }
  int exponent(VarId x) const;
  bool is_unit() const { return factors_.empty(); }
  long total_degree() const;

  Monomial times(const Monomial& o) const;
  Monomial pow(int k) const;
  Monomial inverse() const { return pow(-1); }
  // Exact division; nullopt when any exponent would go negative.
  std::optional<Monomial> divide_nonneg(const Monomial& o) const;

  bool has_negative_exponent() const;

  // Canonical comparison: ascending by (t-exp, v-exp, y-exp, then auxiliary
  // exponents in name order). This is also the printing order.
  static int compare(const Monomial& a, const Monomial& b);
  bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

  static Monomial from_factors(std::vector<std::pair<VarId, int>> raw);

 private:
  std::vector<std::pair<VarId, int>> factors_;
};

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return Monomial::compare(a, b) < 0;
  }
};

class SparseExpr {
 public:
  using TermMap = std::map<Monomial, Rational, MonoLess>;

  SparseExpr() = default;  // zero

  static SparseExpr constant(const Rational& c);
  static SparseExpr constant(long c) { return constant(Rational(c)); }
  static SparseExpr variable(VarId x);
  static SparseExpr term(const Rational& c, const Monomial& m);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // coefficient of the unit monomial
  Rational coeff(const Monomial& m) const;
  size_t term_count() const { return terms_.size(); }

  bool laurent_allowed(VarId x) const;
  const std::vector<VarId>& laurent_vars() const { return laurent_; }
  std::optional<int> truncation(VarId x) const;
  const std::vector<std::pair<VarId, int>>& truncations() const { return trunc_; }

  SparseExpr with_laurent(VarId x) const;
  SparseExpr with_truncation(VarId x, int order) const;
  SparseExpr without_truncations() const;
  // Re-truncates to the bounds carried by `like` (used to push fixed context
  // onto freshly parsed or constructed expressions).
  SparseExpr like_context(const SparseExpr& like) const;

  SparseExpr operator-() const;
  friend SparseExpr operator+(const SparseExpr& a, const SparseExpr& b);
  friend SparseExpr operator-(const SparseExpr& a, const SparseExpr& b);
  friend SparseExpr operator*(const SparseExpr& a, const SparseExpr& b);
  friend SparseExpr operator*(const Rational& c, const SparseExpr& a);

  SparseExpr partial_derivative(VarId x) const;
  SparseExpr substitute(const std::map<VarId, SparseExpr, VarLess>& rules) const;
  // Multiplicative inverse of a unit: a single invertible monomial times a
  // series with nonzero constant term whose tail dies under the truncation
  // bounds. Anything else throws NonInvertibleSubstitution.
  SparseExpr inverse() const;

  std::optional<long> t_valuation() const;  // nullopt encodes +infinity (zero expr)

  long degree_in(VarId x) const;      // 0 when x is absent
  long min_exponent(VarId x) const;   // 0 when x is absent
  bool contains(VarId x) const;
  std::vector<VarId> variables() const;
  // Terms with exponent of x exactly k, with the x-factor removed.
  SparseExpr coefficient_of(VarId x, int k) const;
  SparseExpr substitute_zero(VarId x) const;  // drop terms with positive x-exponent

  std::string canonical_string() const;

  // Equality is on the term association only; Laurent flags and truncation
  // bounds are context, not value.
  bool operator==(const SparseExpr& o) const { return terms_ == o.terms_; }
  bool operator!=(const SparseExpr& o) const { return !(*this == o); }

 private:
  TermMap terms_;
  std::vector<VarId> laurent_;               // sorted canonical, unique
  std::vector<std::pair<VarId, int>> trunc_;  // sorted canonical, unique vars

  void normalize();
  static std::vector<VarId> merge_laurent(const std::vector<VarId>& a,
                                          const std::vector<VarId>& b);
  static std::vector<std::pair<VarId, int>> merge_trunc(
      const std::vector<std::pair<VarId, int>>& a,
      const std::vector<std::pair<VarId, int>>& b);
  friend class ExprBuilder;
};

// Shared grammar for fixtures, reports and tests:
//   expr   := term ('+' term)*
//   term   := rational ('*' factor+)?
//   factor := ident '^' int
// Whitespace-insensitive; rationals are "p" or "p/q" with an optional sign.
// canonical_string() output always round-trips through parse_expr().
SparseExpr parse_expr(const std::string& text);

}  // namespace f2v
