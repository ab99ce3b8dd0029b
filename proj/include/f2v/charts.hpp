#pragma once

// Two-chart presentation of the deformation family: each chart is an affine
// slice C_t x C_v x P^1_y, vector fields are transported by the symbolic chain
// rule, and the ambient hypersurface models are checked by substitution.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "f2v/expr.hpp"

namespace f2v {

struct Chart {
  std::string name;
  std::vector<VarId> coords;
};

struct Transition {
  std::string source, target;
  // Forward: target coordinate (same VarId, read in the target chart) as a
  // function of the source coordinates. Inverse: the other way around.
  std::map<VarId, SparseExpr, VarLess> rules;
  std::map<VarId, SparseExpr, VarLess> inverse_rules;

  Transition inverted() const;
};

// Raw derivation: one coefficient expression per coordinate, no shape
// constraints. Overlap sections and pushforward images live here.
struct Derivation {
  std::map<VarId, SparseExpr, VarLess> comp;

  SparseExpr component(VarId x) const;
  SparseExpr apply_to(const SparseExpr& h) const;
  bool is_zero() const;

  Derivation operator+(const Derivation& o) const;
  Derivation operator-(const Derivation& o) const;
  Derivation operator-() const;
  bool operator==(const Derivation& o) const;
};

struct RegularityReport {
  bool ok = true;
  std::string reason;
};

// Regular chart field on C_t x C_v x P^1_y: no negative v or t exponents,
// the v-coefficient is y-free, the y-coefficient has y-degree at most 2, the
// t-coefficient depends on t alone. Auxiliary parameter symbols are scalars
// and are ignored by these constraints.
RegularityReport regularity_check(const Derivation& d);

class ChartVectorField {
 public:
  ChartVectorField(std::string chart, SparseExpr coeff_v, SparseExpr coeff_y,
                   SparseExpr coeff_t);

  static ChartVectorField from_derivation(const std::string& chart,
                                          const Derivation& d);

  const std::string& chart() const { return chart_; }
  const SparseExpr& coeff_v() const { return cv_; }
  const SparseExpr& coeff_y() const { return cy_; }
  const SparseExpr& coeff_t() const { return ct_; }

  Derivation as_derivation() const;

  ChartVectorField operator+(const ChartVectorField& o) const;
  ChartVectorField operator-(const ChartVectorField& o) const;
  ChartVectorField scaled(const Rational& c) const;
  bool operator==(const ChartVectorField& o) const;
  bool is_zero() const;

 private:
  std::string chart_;
  SparseExpr cv_, cy_, ct_;
};

// Chain rule. The result is expressed in target-chart coordinates and is in
// general Laurent in v; it is NOT assumed chart-regular.
Derivation pushforward(const Derivation& f, const Transition& tr);
Derivation pushforward(const ChartVectorField& f, const Transition& tr);

// Transition of the fiber over t = tau: every rule specialized at that value
// and the t coordinate dropped.
Transition specialize_transition(const Transition& tr, const Rational& tau);

struct GluedFamily {
  std::vector<Chart> charts;
  std::vector<Transition> transitions;
  std::map<std::string, SparseExpr> models;  // named ambient hypersurface equations

  const Chart& chart(const std::string& name) const;
  const Transition& transition(const std::string& source,
                               const std::string& target) const;
};

// Plain-text manifest: chart/transition/model declarations with rules in the
// shared expression grammar. Throws ParseError on malformed or empty input.
GluedFamily load_family_manifest(const std::string& path);

struct ConsistencyCheck {
  bool pass = true;
  std::string failed_identity;  // empty when pass
  SparseExpr residual;          // first failing residual
};

// rules o inverse_rules = identity both ways, then pushforward round-trips on
// randomly sampled chart fields.
ConsistencyCheck verify_transition_consistency(const Transition& tr,
                                               uint64_t seed = 1,
                                               int samples = 8);

struct IdentityCheck {
  std::string id;
  bool pass = false;
  std::string detail;  // residual or common-factor description
};

// Ambient-model identities: embeddings of both charts land on the declared
// hypersurfaces, the chart images agree on the overlap up to a common monomial
// factor per projective factor, the t=0 slice of the family model is the
// surface model, and the fiberwise trivialization identity holds.
std::vector<IdentityCheck> verify_surface_models(const GluedFamily& fam);

// Projective (cross-multiplication) equality and, where it holds, the single
// monomial M with B = M * A componentwise.
bool proj_equal(const std::vector<SparseExpr>& a, const std::vector<SparseExpr>& b);
std::optional<SparseExpr> common_monomial_factor(const std::vector<SparseExpr>& a,
                                                 const std::vector<SparseExpr>& b);

}  // namespace f2v
