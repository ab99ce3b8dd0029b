#pragma once

// Order-by-order lifting of a gauge of global fields along the family. At
// each t-order the bracket relations give an affine system in the fresh
// parameter coefficients: solvable orders extend the lift with free
// parameters, and an inconsistent order is certified by a Groebner basis and
// spot-checked by random substitution.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "f2v/fields.hpp"
#include "f2v/groebner.hpp"
#include "f2v/lie.hpp"
#include "f2v/linalg.hpp"

namespace f2v {

enum class LiftStatus { solvable, obstructed };

struct OrderReport {
  int order = 0;
  size_t unknown_count = 0;
  size_t equation_count = 0;
  size_t matrix_rank = 0;
  LiftStatus status = LiftStatus::solvable;
  size_t fresh_parameters = 0;         // free symbols introduced when solvable
  std::vector<SparseExpr> conditions;  // nonzero consistency conditions
  GroebnerBasis certificate;           // reduced basis of the conditions
  bool certified_empty = false;
  // Set when the conditions were satisfiable only after pinning every earlier
  // free parameter to zero; the reported system is the re-solve on that branch.
  bool specialized = false;
  RationalMatrix matrix;      // unknown-coefficient matrix, constant entries
  std::vector<SparseExpr> rhs;  // right-hand sides in earlier free parameters
};

struct BaseComponentReport {
  // t-coefficient of each lifted base component. The parametrization pins it
  // to gauge data, so it is shared by every member of the solution family.
  std::array<Rational, 7> linear{};
  std::vector<int> vanishing;  // 1-based indices with zero coefficient
};

struct LiftResult {
  int target_order = 0;
  LiftStatus status = LiftStatus::solvable;
  int obstructed_order = -1;  // -1 when every requested order is solvable
  std::vector<OrderReport> orders;
  BaseComponentReport base;
  std::vector<VarId> free_symbols;
  // Parameter series of the deepest solved lift, affine in the free symbols
  // order by order.
  std::array<FieldParameters, 7> parameters;
};

// Order-zero parameters of the seven fundamental fields.
std::array<FieldParameters, 7> fundamental_gauge(const StructureConstants& s);

// Lift through the given order; order 0 checks the gauge itself. Throws when
// an order is neither solvable nor certified inconsistent.
LiftResult run_lift(const GluedFamily& fam, const StructureConstants& s,
                    const std::array<FieldParameters, 7>& gauge, int target_order);

// Substitute values for the free symbols (absent symbols become zero) and
// recheck every bracket relation of the instantiated lift through the deepest
// solved order. Returns a description of the first surviving residual, empty
// when all vanish.
std::string lift_residuals(const GluedFamily& fam, const StructureConstants& s,
                           const LiftResult& lift,
                           const std::map<VarId, Rational, VarLess>& values);

struct SoundnessReport {
  size_t samples = 0;
  size_t inconsistent = 0;
  bool all_inconsistent() const { return samples > 0 && inconsistent == samples; }
};

// Random substitutions into the recorded system of an obstructed order: every
// sample must leave the affine system inconsistent.
SoundnessReport obstruction_soundness(const LiftResult& lift, uint64_t seed,
                                      size_t samples);

}  // namespace f2v
