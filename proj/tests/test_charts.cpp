#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "f2v/charts.hpp"
#include "f2v/rng.hpp"

using namespace f2v;

namespace {

SparseExpr E(const std::string& s) { return parse_expr(s); }

GluedFamily family() {
  return load_family_manifest(std::string(F2V_SOURCE_FIXTURES) + "/family_w.manifest");
}

}  // namespace

TEST_CASE("manifest loads charts, transition and models") {
  GluedFamily fam = family();
  CHECK(fam.charts.size() == 2);
  CHECK(fam.chart("W").coords.size() == 3);
  CHECK(fam.chart("Wp").coords.size() == 3);
  const Transition& tr = fam.transition("W", "Wp");
  CHECK(tr.rules.size() == 3);
  CHECK(tr.inverse_rules.size() == 3);
  CHECK(tr.rules.at(var_v()) == E("1 * v^-1"));
  CHECK(tr.rules.at(var_y()) == E("1 * v^2 y^1 + -1 * t^1 v^1"));
  CHECK(fam.models.count("f2") == 1);
  CHECK(fam.models.count("family") == 1);
  CHECK_THROWS_AS(fam.chart("X"), F2VError);
  CHECK_THROWS_AS(fam.transition("Wp", "W"), F2VError);
}

TEST_CASE("manifest parse failures carry line context") {
  CHECK_THROWS_AS(load_family_manifest("/nonexistent/file.manifest"), ParseError);

  std::string dir = "/tmp/f2v_charts_test";
  std::string bad = dir + "/bad.manifest";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(bad);
    out << "chart W : t v y\n";
    out << "rule v = 1 * v^-1\n";  // outside a transition block
  }
  CHECK_THROWS_AS(load_family_manifest(bad), ParseError);
  {
    std::ofstream out(bad);
    out << "# only comments\n";
  }
  CHECK_THROWS_AS(load_family_manifest(bad), ParseError);
}

TEST_CASE("transition is involutive and round-trips fields") {
  GluedFamily fam = family();
  ConsistencyCheck c = verify_transition_consistency(fam.transition("W", "Wp"), 1, 8);
  CHECK(c.pass);
  CHECK(c.failed_identity.empty());
}

TEST_CASE("corrupted rule is caught with an exact residual") {
  GluedFamily fam = family();
  Transition tr = fam.transition("W", "Wp");
  // Flip the sign of the shear term in the y-rule.
  tr.rules[var_y()] = E("1 * v^2 y^1 + 1 * t^1 v^1");
  ConsistencyCheck c = verify_transition_consistency(tr);
  CHECK(!c.pass);
  CHECK(c.failed_identity == "rules_then_inverse:y");
  CHECK(c.residual.canonical_string() == "2 * t^1 v^-1");
}

TEST_CASE("pushforward reproduces the coordinate frame images") {
  GluedFamily fam = family();
  const Transition& tr = fam.transition("W", "Wp");
  SparseExpr zero, one = SparseExpr::constant(1);

  ChartVectorField dv("W", one, zero, zero);
  Derivation img_v = pushforward(dv, tr);
  CHECK(img_v.component(var_v()) == E("-1 * v^2"));
  CHECK(img_v.component(var_y()) == E("2 * v^1 y^1 + 1 * t^1"));
  CHECK(img_v.component(var_t()).is_zero());

  ChartVectorField dy("W", zero, one, zero);
  Derivation img_y = pushforward(dy, tr);
  CHECK(img_y.component(var_v()).is_zero());
  CHECK(img_y.component(var_y()) == E("1 * v^-2"));

  ChartVectorField dt("W", zero, zero, one);
  Derivation img_t = pushforward(dt, tr);
  CHECK(img_t.component(var_v()).is_zero());
  CHECK(img_t.component(var_y()) == E("-1 * v^-1"));
  CHECK(img_t.component(var_t()) == one);

  // The frame images are Laurent, hence fail the chart regularity profile.
  CHECK(!regularity_check(img_y).ok);
  CHECK(regularity_check(dv.as_derivation()).ok);

  ChartVectorField wrong_chart("Wp", one, zero, zero);
  CHECK_THROWS_AS(pushforward(wrong_chart, tr), ChartMismatch);
}

TEST_CASE("chart field shape constraints are enforced") {
  SparseExpr zero, one = SparseExpr::constant(1);
  CHECK_THROWS_AS(ChartVectorField("W", SparseExpr::variable(var_y()), zero, zero),
                  F2VError);
  CHECK_THROWS_AS(ChartVectorField("W", zero, E("1 * y^3"), zero), F2VError);
  CHECK_THROWS_AS(ChartVectorField("W", zero, zero, SparseExpr::variable(var_v())),
                  F2VError);
  CHECK_THROWS_AS(ChartVectorField("W", E("1 * v^-1"), zero, zero), F2VError);

  Derivation d;
  d.comp.emplace(VarId::intern("q1"), one);
  CHECK_THROWS_AS(ChartVectorField::from_derivation("W", d), ChartMismatch);

  // Auxiliary parameter symbols are scalars and pass the profile.
  SparseExpr param = SparseExpr::variable(VarId::intern("a0"));
  ChartVectorField with_param("W", param * SparseExpr::variable(var_v()), zero, zero);
  CHECK(regularity_check(with_param.as_derivation()).ok);
}

TEST_CASE("fiber specialization drops the base coordinate") {
  GluedFamily fam = family();
  Transition t0 = specialize_transition(fam.transition("W", "Wp"), Rational(0));
  CHECK(t0.rules.size() == 2);
  CHECK(t0.rules.at(var_y()) == E("1 * v^2 y^1"));
  CHECK(t0.inverse_rules.at(var_y()) == E("1 * v^2 y^1"));

  Transition t2 = specialize_transition(fam.transition("W", "Wp"), Rational(2));
  CHECK(t2.rules.at(var_y()) == E("1 * v^2 y^1 + -2 * v^1"));
  ConsistencyCheck c = verify_transition_consistency(t2, 5, 4);
  CHECK(c.pass);
}

TEST_CASE("ambient model identities") {
  GluedFamily fam = family();
  auto checks = verify_surface_models(fam);
  CHECK(checks.size() == 8);
  for (const auto& c : checks) {
    INFO(c.id, ": ", c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("projective comparison helpers") {
  SparseExpr one = SparseExpr::constant(1);
  SparseExpr v = SparseExpr::variable(var_v());
  CHECK(proj_equal({one, v}, {E("1 * v^-1"), one}));
  CHECK(!proj_equal({one, v}, {one, one + v}));

  auto m = common_monomial_factor({one, v}, {E("1 * v^-1"), one});
  REQUIRE(m.has_value());
  CHECK(*m == E("1 * v^-1"));

  auto none = common_monomial_factor({one, v}, {one, one + v});
  CHECK(!none.has_value());

  // Proportional but not by a single monomial.
  auto poly = common_monomial_factor({one, one}, {one + v, one + v});
  CHECK(!poly.has_value());
}

TEST_CASE("pushforward is a bracket homomorphism on random fields") {
  GluedFamily fam = family();
  const Transition& tr = fam.transition("W", "Wp");
  Rng rng(31);
  auto rand_poly = [&](int deg_v, int deg_t, int terms) {
    SparseExpr p;
    for (int k = 0; k < terms; ++k) {
      Monomial m = Monomial::from_factors(
          {{var_v(), static_cast<int>(rng.range(0, deg_v))},
           {var_t(), static_cast<int>(rng.range(0, deg_t))}});
      p = p + SparseExpr::term(rng.rational(), m);
    }
    return p;
  };
  SparseExpr yv = SparseExpr::variable(var_y());
  for (int iter = 0; iter < 40; ++iter) {
    ChartVectorField f("W", rand_poly(2, 2, 2),
                       (rand_poly(2, 2, 2) * yv + rand_poly(2, 2, 2)) * yv +
                           rand_poly(2, 2, 2),
                       rand_poly(0, 2, 2));
    ChartVectorField g("W", rand_poly(2, 2, 2),
                       (rand_poly(2, 2, 2) * yv + rand_poly(2, 2, 2)) * yv +
                           rand_poly(2, 2, 2),
                       rand_poly(0, 2, 2));
    Derivation fg;
    {
      Derivation a = f.as_derivation(), b = g.as_derivation();
      Derivation lhs;
      for (VarId x : {var_t(), var_v(), var_y()})
        lhs.comp.emplace(x, a.apply_to(b.component(x)) - b.apply_to(a.component(x)));
      fg = lhs;
    }
    Derivation push_of_bracket = pushforward(fg, tr);
    Derivation fstar = pushforward(f, tr), gstar = pushforward(g, tr);
    Derivation bracket_of_push;
    for (VarId x : {var_t(), var_v(), var_y()})
      bracket_of_push.comp.emplace(x, fstar.apply_to(gstar.component(x)) -
                                          gstar.apply_to(fstar.component(x)));
    CHECK(push_of_bracket == bracket_of_push);
  }
}
