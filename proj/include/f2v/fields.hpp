#pragma once

// Global vector fields on the glued family truncated at a given t-order:
// generic ansatz per chart-regularity profile, gluing constraints from the
// pushforward, kernel extraction, and the closed-form parametrization of the
// solution space by seven free t-series.

#include <utility>
#include <vector>

#include "f2v/charts.hpp"
#include "f2v/linalg.hpp"

namespace f2v {

struct GlobalFieldBasis {
  int order = 0;   // N: computations run mod t^(N+1)
  int degree = 0;  // D: ansatz degree in v
  std::vector<ChartVectorField> chart1;  // basis on W
  std::vector<ChartVectorField> chart2;  // matching pushforward images on Wp
  size_t dimension() const { return chart1.size(); }
};

// Solve the gluing constraints for the full ansatz of shape
//   g(v,t) d/dv + (al(v,t) y^2 + be(v,t) y + ga(v,t)) d/dy + k(t) d/dt
// with v-degrees <= degree and t-degrees <= order. The constraint rows are
// exactly the negative v-exponents of the pushforward; the remaining
// regularity of the image is checked, not imposed.
GlobalFieldBasis solve_global_fields(const GluedFamily& fam, int order, int degree);

// The seven free t-series determining a glued field. The v-linear part of the
// y-coefficient, its v-free part of degree zero in y, and the base component
// are determined by these.
struct FieldParameters {
  SparseExpr A, B, C;  // d/dv part: A v^2 + B v + C
  SparseExpr a, b, c;  // y^2 part:  a v^2 + b v + c
  SparseExpr e;        // free term of the y^1 part
};

// Build the glued pair from parameters, mod t^(order+1). Throws if the
// parameters depend on chart coordinates.
std::pair<ChartVectorField, ChartVectorField> field_from_parameters(
    const FieldParameters& p, const GluedFamily& fam, int order);

// Extract the parameters of a chart-1 field of the parametrized shape.
FieldParameters parameters_of(const ChartVectorField& chart1_field);

struct ParametrizationReport {
  bool pass = true;
  std::string detail;  // first failing check, empty when pass
  size_t elements_checked = 0;
};

// Per basis element: degree profile of the solved coefficients, the
// determined-coefficient identities, the base-component formula with its
// forced vanishing at t = 0, and the primed-chart reconstruction formulas.
ParametrizationReport verify_field_parametrization(const GluedFamily& fam,
                                                   const GlobalFieldBasis& basis);

// Dimension of the regular field space on the fiber over t = tau, via the
// specialized two-coordinate transition. Jumps from 7 at tau = 0 to 6 nearby.
size_t fiber_field_dimension(const GluedFamily& fam, const Rational& tau,
                             int degree);

}  // namespace f2v
