#pragma once

// Lie brackets of chart fields, the seven fundamental vector fields of the
// automorphism action on the central fiber, and the bracket-constant table
// they must reproduce.

#include <array>
#include <string>
#include <vector>

#include "f2v/charts.hpp"

namespace f2v {

ChartVectorField bracket(const ChartVectorField& f, const ChartVectorField& g);
Derivation bracket(const Derivation& f, const Derivation& g);

// Bracket of base fields k1(t) d/dt, k2(t) d/dt, returned as the coefficient
// series k1 k2' - k2 k1'.
SparseExpr base_bracket(const SparseExpr& k1, const SparseExpr& k2);

SparseExpr base_component(const ChartVectorField& f);

// Generator of the automorphism group C^3 |x GL2: a translation triple acting
// on the affine part and a 2x2 matrix acting on the base P^1.
struct LieBasisElement {
  std::array<Rational, 3> translation{};           // (a0, a1, a2)
  std::array<std::array<Rational, 2>, 2> matrix{};  // [[a, b], [c, d]]
};

struct LieAlgebraBasis {
  std::array<LieBasisElement, 7> e;
  static LieAlgebraBasis standard();
};

class StructureConstants {
 public:
  static StructureConstants load(const std::string& path);
  static StructureConstants zero();

  // 1-based indices; storage keeps antisymmetry in sync.
  const Rational& c(int i, int j, int k) const;
  void set(int i, int j, int k, const Rational& value);

  bool jacobi_ok() const;
  // The i < j pairs with at least one nonzero coefficient, for reporting.
  std::vector<std::pair<int, int>> nonzero_pairs() const;

 private:
  std::array<Rational, 7 * 7 * 7> data_{};
};

struct FundamentalFields {
  std::vector<ChartVectorField> chart1;  // on W at t = 0, coeff_t = 0
  std::vector<ChartVectorField> chart2;  // on Wp at t = 0
  bool sign_flipped = false;
};

// First-order expansion of the group action along each basis direction, on
// both charts. If the bracket table only matches after negating every field,
// the flip is applied and recorded.
FundamentalFields generate_fundamental_fields(const LieAlgebraBasis& basis,
                                              const StructureConstants& s);

// Pushforward of each chart-1 field along the t=0 transition agrees with the
// independently generated chart-2 field.
bool fundamental_fields_cross_chart_ok(const FundamentalFields& ff,
                                       const Transition& t0);

struct BracketRelationResult {
  int i = 0, j = 0;
  bool pass = false;
  std::string residual;
};

struct BracketTableReport {
  bool pass = false;
  int checked = 0;
  std::vector<BracketRelationResult> relations;
};

BracketTableReport verify_bracket_table(const std::vector<ChartVectorField>& fields,
                                        const StructureConstants& s);

// Filtration facts for base fields: if val k1 >= p and val k2 >= p then the
// bracket has valuation >= 2p, and for p, q >= 1 valuation >= p + q - 1.
bool verify_filtration_facts(uint64_t seed, int samples, int order);

}  // namespace f2v
