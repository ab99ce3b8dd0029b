#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <string>

#include "f2v/lifting.hpp"
#include "f2v/rng.hpp"

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

// Lifts against the real table are expensive; share one result per order.
const LiftResult& lift_to(int order) {
  static std::map<int, LiftResult> cache;
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache
             .emplace(order,
                      run_lift(family(), table(), fundamental_gauge(table()), order))
             .first;
  return it->second;
}

}  // namespace

TEST_CASE("gauge parameters reproduce the fundamental fields") {
  std::array<FieldParameters, 7> gauge = fundamental_gauge(table());
  CHECK(gauge[0].a == SparseExpr::constant(rat(-1)));
  CHECK(gauge[1].c == SparseExpr::constant(rat(-1)));
  CHECK(gauge[2].C == SparseExpr::constant(rat(1)));
  CHECK(gauge[3].b == SparseExpr::constant(rat(-1)));
  CHECK(gauge[4].B == SparseExpr::constant(rat(-1)));
  CHECK(gauge[4].e == SparseExpr::constant(rat(2)));
  CHECK(gauge[5].B == SparseExpr::constant(rat(1)));
  CHECK(gauge[6].A == SparseExpr::constant(rat(-1)));
}

TEST_CASE("order zero accepts the gauge") {
  const LiftResult& lift = lift_to(0);
  CHECK(lift.status == LiftStatus::solvable);
  CHECK(lift.obstructed_order == -1);
  REQUIRE(lift.orders.size() == 1);
  CHECK(lift.orders[0].equation_count == 0);
  CHECK(lift.orders[0].unknown_count == 0);
  CHECK(lift.free_symbols.empty());
  CHECK(lift_residuals(family(), table(), lift, {}) == "");
}

TEST_CASE("base components carry the forced t-coefficients") {
  const LiftResult& lift = lift_to(0);
  std::array<Rational, 7> expected{rat(0), rat(0), rat(0), rat(0),
                                   rat(1), rat(1), rat(0)};
  CHECK(lift.base.linear == expected);
  CHECK(lift.base.vanishing == std::vector<int>{1, 2, 3, 4, 7});
}

TEST_CASE("first order is solvable and its lifts satisfy the table") {
  const LiftResult& lift = lift_to(1);
  CHECK(lift.status == LiftStatus::solvable);
  REQUIRE(lift.orders.size() == 2);
  const OrderReport& step = lift.orders[1];
  CHECK(step.unknown_count == 49);
  CHECK(step.status == LiftStatus::solvable);
  CHECK(step.matrix_rank + step.fresh_parameters == 49);
  CHECK(lift.free_symbols.size() == step.fresh_parameters);
  INFO("rank ", step.matrix_rank, " free ", step.fresh_parameters);

  // The canonical representative and random members of the family all solve
  // the relations mod t^2.
  CHECK(lift_residuals(family(), table(), lift, {}) == "");
  Rng rng(71);
  for (int trial = 0; trial < 3; ++trial) {
    std::map<VarId, Rational, VarLess> values;
    for (VarId p : lift.free_symbols) values.emplace(p, rng.rational());
    CHECK(lift_residuals(family(), table(), lift, values) == "");
  }
}

TEST_CASE("second order is obstructed with a unit-ideal certificate") {
  const LiftResult& lift = lift_to(2);
  CHECK(lift.status == LiftStatus::obstructed);
  CHECK(lift.obstructed_order == 2);
  REQUIRE(lift.orders.size() == 3);
  const OrderReport& step = lift.orders[2];
  CHECK(step.status == LiftStatus::obstructed);
  CHECK_FALSE(step.conditions.empty());
  CHECK(step.certified_empty);
  CHECK(step.certificate.is_unit_ideal());

  // The solved prefix still satisfies the relations mod t^2.
  CHECK(lift_residuals(family(), table(), lift, {}) == "");

  SoundnessReport sound = obstruction_soundness(lift, 97, 20);
  CHECK(sound.samples == 20);
  CHECK(sound.inconsistent == 20);
  CHECK(sound.all_inconsistent());
}

TEST_CASE("asking beyond the obstruction stops at it") {
  const LiftResult& lift = lift_to(3);
  CHECK(lift.status == LiftStatus::obstructed);
  CHECK(lift.obstructed_order == 2);
  CHECK(lift.orders.size() == 3);
}

TEST_CASE("commuting gauge under the zero table lifts at every order") {
  StructureConstants zero = StructureConstants::zero();
  std::array<FieldParameters, 7> gauge;
  for (int i = 0; i < 7; ++i) gauge[i].C = SparseExpr::constant(rat(i + 1));
  LiftResult lift = run_lift(family(), zero, gauge, 3);
  CHECK(lift.status == LiftStatus::solvable);
  CHECK(lift.obstructed_order == -1);
  CHECK(lift.orders.size() == 4);
  for (const auto& step : lift.orders) CHECK(step.status == LiftStatus::solvable);
  // The second-order conditions are satisfiable quadratics, not void, so this
  // exercises the zero-specialization branch.
  CHECK(lift.orders[2].specialized);
  CHECK(lift_residuals(family(), zero, lift, {}) == "");
  for (const auto& v : lift.base.linear) CHECK(is_zero(v));
}

TEST_CASE("lift guards") {
  CHECK_THROWS_AS(run_lift(family(), table(), fundamental_gauge(table()), -1),
                  DimensionMismatch);
  std::array<FieldParameters, 7> bad = fundamental_gauge(table());
  bad[0].A = SparseExpr::variable(var_t());
  CHECK_THROWS_AS(run_lift(family(), table(), bad, 1), F2VError);
  CHECK_THROWS_AS(obstruction_soundness(lift_to(1), 1, 5), F2VError);
}
