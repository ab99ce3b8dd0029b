#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "f2v/fields.hpp"
#include "f2v/lie.hpp"
#include "f2v/linalg.hpp"

using namespace f2v;

namespace {

const GluedFamily& family() {
  static GluedFamily fam = load_family_manifest(std::string(F2V_SOURCE_FIXTURES) +
                                                "/family_w.manifest");
  return fam;
}

StructureConstants table() {
  return StructureConstants::load(std::string(F2V_SOURCE_FIXTURES) +
                                  "/structure_constants.table");
}

// Flatten the seven parameter series of a chart-1 field into one coefficient
// vector of length 7 (order + 1).
std::vector<Rational> parameter_vector(const ChartVectorField& f, int order) {
  FieldParameters p = parameters_of(f);
  std::vector<Rational> row;
  for (const SparseExpr* s : {&p.A, &p.B, &p.C, &p.a, &p.b, &p.c, &p.e})
    for (int d = 0; d <= order; ++d) {
      SparseExpr c = s->coefficient_of(var_t(), d);
      if (!c.is_constant()) FAIL("parameter is not a pure t-series");
      row.push_back(c.constant_value());
    }
  return row;
}

size_t parameter_rank(const GlobalFieldBasis& basis) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& f : basis.chart1) rows.push_back(parameter_vector(f, basis.order));
  return rank(RationalMatrix::from_rows(rows));
}

}  // namespace

TEST_CASE("solution dimension is seven per retained t-order") {
  for (auto [order, degree] : std::vector<std::pair<int, int>>{
           {0, 2}, {0, 5}, {1, 2}, {2, 3}, {3, 4}}) {
    GlobalFieldBasis basis = solve_global_fields(family(), order, degree);
    CHECK(basis.dimension() == 7 * static_cast<size_t>(order + 1));
    CHECK(basis.chart2.size() == basis.chart1.size());
    // The parameter map is injective on the solution space.
    CHECK(parameter_rank(basis) == basis.dimension());
  }
}

TEST_CASE("ansatz guards reject bad shapes") {
  CHECK_THROWS_AS(solve_global_fields(family(), -1, 3), DimensionMismatch);
  CHECK_THROWS_AS(solve_global_fields(family(), 1, 1), DimensionMismatch);
}

TEST_CASE("basis elements glue and round-trip across charts") {
  GlobalFieldBasis basis = solve_global_fields(family(), 1, 3);
  const Transition& tr = family().transition("W", "Wp");
  Transition back = tr.inverted();
  for (size_t i = 0; i < basis.dimension(); ++i) {
    CHECK_FALSE(basis.chart1[i].is_zero());
    Derivation round = pushforward(basis.chart2[i], back);
    SparseExpr rv = round.component(var_v()) - basis.chart1[i].coeff_v();
    SparseExpr ry = round.component(var_y()) - basis.chart1[i].coeff_y();
    SparseExpr rt = round.component(var_t()) - basis.chart1[i].coeff_t();
    CHECK(rv.is_zero());
    CHECK(ry.is_zero());
    CHECK(rt.is_zero());
    // The base component always vanishes at the origin.
    CHECK(basis.chart1[i].coeff_t().coefficient_of(var_t(), 0).is_zero());
  }
}

TEST_CASE("parametrization report passes on solved bases") {
  for (auto [order, degree] :
       std::vector<std::pair<int, int>>{{0, 2}, {2, 3}, {1, 5}}) {
    GlobalFieldBasis basis = solve_global_fields(family(), order, degree);
    ParametrizationReport rep = verify_field_parametrization(family(), basis);
    INFO(rep.detail);
    CHECK(rep.pass);
    CHECK(rep.elements_checked == basis.dimension());
  }
}

TEST_CASE("raising the ansatz degree does not enlarge the space") {
  GlobalFieldBasis low = solve_global_fields(family(), 1, 2);
  GlobalFieldBasis high = solve_global_fields(family(), 1, 6);
  REQUIRE(low.dimension() == 14);
  REQUIRE(high.dimension() == 14);
  std::vector<std::vector<Rational>> rows;
  for (const auto& f : low.chart1) rows.push_back(parameter_vector(f, 1));
  for (const auto& f : high.chart1) rows.push_back(parameter_vector(f, 1));
  CHECK(rank(RationalMatrix::from_rows(rows)) == 14);
}

TEST_CASE("field reconstruction from parameters round-trips") {
  GlobalFieldBasis basis = solve_global_fields(family(), 2, 3);
  for (size_t i = 0; i < basis.dimension(); ++i) {
    FieldParameters p = parameters_of(basis.chart1[i]);
    auto [f1, f2] = field_from_parameters(p, family(), basis.order);
    CHECK(f1 == basis.chart1[i]);
    CHECK(f2 == basis.chart2[i]);
  }
}

TEST_CASE("parameters must be t-series") {
  FieldParameters p;
  p.A = SparseExpr::variable(var_v());
  CHECK_THROWS_AS(field_from_parameters(p, family(), 1), F2VError);
}

TEST_CASE("fundamental fields sit at the expected parameter gauge") {
  FundamentalFields ff = generate_fundamental_fields(LieAlgebraBasis::standard(),
                                                     table());
  REQUIRE(ff.chart1.size() == 7);
  // Row i holds (A, B, C, a, b, c, e) of the i-th field at order zero.
  std::vector<std::vector<Rational>> expected{
      {0, 0, 0, -1, 0, 0, 0},  //
      {0, 0, 0, 0, 0, -1, 0},  //
      {0, 0, 1, 0, 0, 0, 0},   //
      {0, 0, 0, 0, -1, 0, 0},  //
      {0, -1, 0, 0, 0, 0, 2},  //
      {0, 1, 0, 0, 0, 0, 0},   //
      {-1, 0, 0, 0, 0, 0, 0},  //
  };
  for (size_t i = 0; i < 7; ++i) {
    std::vector<Rational> got = parameter_vector(ff.chart1[i], 0);
    CHECK(got == expected[i]);
    // Membership in the solved space, constructively: the parametrized
    // reconstruction reproduces the field and its primed image over t = 0.
    auto [f1, f2] = field_from_parameters(parameters_of(ff.chart1[i]), family(), 0);
    CHECK(f1 == ff.chart1[i]);
    Transition t0 = specialize_transition(family().transition("W", "Wp"), rat(0));
    Derivation img = pushforward(ff.chart1[i], t0);
    CHECK(f2.coeff_v() == img.component(var_v()));
    CHECK(f2.coeff_y() == img.component(var_y()));
    CHECK(f2.coeff_t().is_zero());
  }
}

TEST_CASE("fiber field dimension jumps at the origin") {
  CHECK(fiber_field_dimension(family(), rat(0), 2) == 7);
  CHECK(fiber_field_dimension(family(), rat(0), 5) == 7);
  CHECK(fiber_field_dimension(family(), rat(1), 2) == 6);
  CHECK(fiber_field_dimension(family(), rat(2), 4) == 6);
  CHECK(fiber_field_dimension(family(), rat(-3, 2), 3) == 6);
  CHECK(fiber_field_dimension(family(), rat(1, 7), 2) == 6);
}

TEST_CASE("fiber solver rejects degenerate ansatz degrees") {
  CHECK_THROWS_AS(fiber_field_dimension(family(), rat(1), 1), DimensionMismatch);
  CHECK_THROWS_AS(fiber_field_dimension(family(), rat(0), 0), DimensionMismatch);
}
