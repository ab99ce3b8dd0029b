#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "f2v/groebner.hpp"
#include "f2v/rng.hpp"

using namespace f2v;

namespace {

VarId W() { return VarId::intern("w"); }
VarId X() { return VarId::intern("x"); }

std::vector<VarId> wx() { return {W(), X()}; }

SparseExpr random_poly(Rng& rng, const std::vector<VarId>& vars, int degree,
                       int terms) {
  SparseExpr out;
  for (int i = 0; i < terms; ++i) {
    std::vector<std::pair<VarId, int>> factors;
    for (VarId x : vars) {
      int e = static_cast<int>(rng.range(0, degree));
      if (e != 0) factors.emplace_back(x, e);
    }
    out = out + SparseExpr::term(rng.rational(), Monomial::from_factors(factors));
  }
  return out;
}

}  // namespace

TEST_CASE("grevlex orders by degree then rightmost difference") {
  auto m = [](int we, int xe) {
    return Monomial::from_factors({{W(), we}, {X(), xe}});
  };
  // 1 < x < w < x^2 < wx < w^2
  CHECK(monomial_less(m(0, 0), m(0, 1), MonomialOrder::grevlex, wx()));
  CHECK(monomial_less(m(0, 1), m(1, 0), MonomialOrder::grevlex, wx()));
  CHECK(monomial_less(m(1, 0), m(0, 2), MonomialOrder::grevlex, wx()));
  CHECK(monomial_less(m(0, 2), m(1, 1), MonomialOrder::grevlex, wx()));
  CHECK(monomial_less(m(1, 1), m(2, 0), MonomialOrder::grevlex, wx()));
  CHECK_FALSE(monomial_less(m(1, 1), m(1, 1), MonomialOrder::grevlex, wx()));
  CHECK_FALSE(monomial_less(m(1, 1), m(0, 2), MonomialOrder::grevlex, wx()));
}

TEST_CASE("lex orders by the most significant variable first") {
  auto m = [](int we, int xe) {
    return Monomial::from_factors({{W(), we}, {X(), xe}});
  };
  // x < x^2 < x^3 < w < wx
  CHECK(monomial_less(m(0, 1), m(0, 2), MonomialOrder::lex, wx()));
  CHECK(monomial_less(m(0, 3), m(1, 0), MonomialOrder::lex, wx()));
  CHECK(monomial_less(m(1, 0), m(1, 1), MonomialOrder::lex, wx()));
  CHECK_FALSE(monomial_less(m(1, 0), m(0, 3), MonomialOrder::lex, wx()));
}

TEST_CASE("monomial outside the declared order is rejected") {
  Monomial stray = Monomial::var(VarId::intern("zz"));
  CHECK_THROWS_AS(monomial_less(stray, Monomial(), MonomialOrder::lex, wx()),
                  F2VError);
}

TEST_CASE("leading monomial respects the order") {
  SparseExpr f = parse_expr("1 * x^2 + -1 * w^1");
  CHECK(leading_monomial(f, MonomialOrder::grevlex, wx()) ==
        Monomial::var(X(), 2));
  CHECK(leading_monomial(f, MonomialOrder::lex, wx()) == Monomial::var(W()));
  CHECK_THROWS_AS(leading_monomial(SparseExpr(), MonomialOrder::lex, wx()),
                  F2VError);
}

TEST_CASE("normal form divides out leading terms") {
  SparseExpr f1 = parse_expr("1 * x^2 + -1 * w^1");
  SparseExpr f2 = parse_expr("1 * w^2 + -1 * x^1");
  std::vector<SparseExpr> basis{f1, f2};

  SparseExpr x4 = parse_expr("1 * x^4 + -1 * x^1");
  CHECK(normal_form(x4, basis, MonomialOrder::grevlex, wx()).is_zero());

  SparseExpr x3 = parse_expr("1 * x^3");
  SparseExpr wx1 = parse_expr("1 * w^1 x^1");
  CHECK(normal_form(x3, {f1}, MonomialOrder::grevlex, wx()) == wx1);

  SparseExpr untouched = parse_expr("3 * x^1 + 5");
  CHECK(normal_form(untouched, basis, MonomialOrder::grevlex, wx()) == untouched);
}

TEST_CASE("s-polynomial cancels the leading terms") {
  SparseExpr f1 = parse_expr("1 * x^2 + -1 * w^1");
  SparseExpr f2 = parse_expr("1 * w^2 + -1 * x^1");
  SparseExpr s = s_polynomial(f1, f2, MonomialOrder::grevlex, wx());
  CHECK(s == parse_expr("1 * x^3 + -1 * w^3"));
}

TEST_CASE("reduced basis under grevlex keeps both generators") {
  std::vector<SparseExpr> gens{parse_expr("1 * x^2 + -1 * w^1"),
                               parse_expr("1 * w^2 + -1 * x^1")};
  GroebnerBasis gb = groebner_basis(gens, MonomialOrder::grevlex);
  REQUIRE(gb.polys.size() == 2);
  CHECK(gb.polys[0] == parse_expr("1 * x^2 + -1 * w^1"));
  CHECK(gb.polys[1] == parse_expr("1 * w^2 + -1 * x^1"));
  CHECK_FALSE(gb.is_unit_ideal());
}

TEST_CASE("reduced basis under lex eliminates the significant variable") {
  std::vector<SparseExpr> gens{parse_expr("1 * x^2 + -1 * w^1"),
                               parse_expr("1 * w^2 + -1 * x^1")};
  GroebnerBasis gb = groebner_basis(gens, MonomialOrder::lex);
  REQUIRE(gb.polys.size() == 2);
  CHECK(gb.polys[0] == parse_expr("1 * x^4 + -1 * x^1"));
  CHECK(gb.polys[1] == parse_expr("1 * w^1 + -1 * x^2"));
  CHECK(normal_form(parse_expr("1 * x^4 + -1 * x^1"), gb.polys,
                    MonomialOrder::lex, gb.vars)
            .is_zero());
}

TEST_CASE("inconsistent linear system certifies empty") {
  std::vector<SparseExpr> gens{parse_expr("1 * x^1"), parse_expr("1 * x^1 + -1")};
  GroebnerBasis gb = groebner_basis(gens);
  REQUIRE(gb.polys.size() == 1);
  CHECK(gb.is_unit_ideal());
  CHECK(certify_empty(gens));
}

TEST_CASE("solvable systems are not certified empty") {
  CHECK_FALSE(certify_empty({parse_expr("1 * x^2 + 1")}));
  CHECK_FALSE(certify_empty({parse_expr("1 * x^2 + -1 * w^1"),
                             parse_expr("1 * w^2 + -1 * x^1")}));
  CHECK_FALSE(certify_empty({}));
}

TEST_CASE("nonzero constants generate the unit ideal") {
  CHECK(certify_empty({parse_expr("2")}));
  GroebnerBasis gb = groebner_basis({parse_expr("-1/3")});
  CHECK(gb.is_unit_ideal());
}

TEST_CASE("laurent and truncated inputs are rejected") {
  CHECK_THROWS_AS(groebner_basis({parse_expr("1 * v^-1")}), F2VError);
  SparseExpr capped = parse_expr("1 * x^1").with_truncation(X(), 3);
  CHECK_THROWS_AS(groebner_basis({capped}), F2VError);
}

TEST_CASE("every s-polynomial of a computed basis reduces to zero") {
  Rng rng(29);
  std::vector<VarId> vars{W(), X(), VarId::intern("z")};
  int checked = 0;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<SparseExpr> gens;
    int n = 2 + static_cast<int>(rng.range(0, 1));
    for (int i = 0; i < n; ++i) {
      SparseExpr g = random_poly(rng, vars, 2, 3);
      if (!g.is_zero()) gens.push_back(g);
    }
    GroebnerBasis gb = groebner_basis(gens, MonomialOrder::grevlex, vars);
    for (const auto& g : gens)
      CHECK(normal_form(g, gb.polys, gb.order, gb.vars).is_zero());
    for (size_t i = 0; i < gb.polys.size(); ++i)
      for (size_t j = i + 1; j < gb.polys.size(); ++j) {
        SparseExpr s = s_polynomial(gb.polys[i], gb.polys[j], gb.order, gb.vars);
        CHECK(normal_form(s, gb.polys, gb.order, gb.vars).is_zero());
        ++checked;
      }
  }
  CHECK(checked > 0);
}

TEST_CASE("normal form is idempotent") {
  Rng rng(31);
  std::vector<VarId> vars{W(), X()};
  for (int trial = 0; trial < 50; ++trial) {
    SparseExpr f = random_poly(rng, vars, 3, 4);
    std::vector<SparseExpr> divs{random_poly(rng, vars, 2, 2),
                                 random_poly(rng, vars, 2, 2)};
    divs.erase(std::remove_if(divs.begin(), divs.end(),
                              [](const SparseExpr& d) { return d.is_zero(); }),
               divs.end());
    SparseExpr r = normal_form(f, divs, MonomialOrder::grevlex, vars);
    CHECK(normal_form(r, divs, MonomialOrder::grevlex, vars) == r);
  }
}
