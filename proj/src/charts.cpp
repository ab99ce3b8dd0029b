#include "f2v/charts.hpp"

#include <fstream>
#include <sstream>

#include "f2v/rng.hpp"

namespace f2v {

Transition Transition::inverted() const {
  Transition t;
  t.source = target;
  t.target = source;
  t.rules = inverse_rules;
  t.inverse_rules = rules;
  return t;
}

SparseExpr Derivation::component(VarId x) const {
  auto it = comp.find(x);
  return it == comp.end() ? SparseExpr() : it->second;
}

SparseExpr Derivation::apply_to(const SparseExpr& h) const {
  SparseExpr out;
  for (const auto& [x, c] : comp) out = out + c * h.partial_derivative(x);
  return out;
}

bool Derivation::is_zero() const {
  for (const auto& [x, c] : comp) {
    (void)x;
    if (!c.is_zero()) return false;
  }
  return true;
}

Derivation Derivation::operator+(const Derivation& o) const {
  Derivation d = *this;
  for (const auto& [x, c] : o.comp) {
    auto [it, fresh] = d.comp.emplace(x, c);
    if (!fresh) it->second = it->second + c;
  }
  return d;
}

Derivation Derivation::operator-() const {
  Derivation d = *this;
  for (auto& [x, c] : d.comp) c = -c;
  return d;
}

Derivation Derivation::operator-(const Derivation& o) const { return *this + (-o); }

bool Derivation::operator==(const Derivation& o) const {
  return (*this - o).is_zero();
}

RegularityReport regularity_check(const Derivation& d) {
  auto fail = [](std::string why) { return RegularityReport{false, std::move(why)}; };
  for (const auto& [x, c] : d.comp) {
    (void)x;
    if (c.min_exponent(var_v()) < 0) return fail("negative v exponent");
    if (c.min_exponent(var_t()) < 0) return fail("negative t exponent");
  }
  SparseExpr cv = d.component(var_v());
  SparseExpr cy = d.component(var_y());
  SparseExpr ct = d.component(var_t());
  if (cv.contains(var_y())) return fail("v-coefficient depends on y");
  if (cy.degree_in(var_y()) > 2) return fail("y-coefficient has y-degree > 2");
  if (ct.contains(var_v()) || ct.contains(var_y()))
    return fail("t-coefficient depends on fiber coordinates");
  return {};
}

ChartVectorField::ChartVectorField(std::string chart, SparseExpr coeff_v,
                                   SparseExpr coeff_y, SparseExpr coeff_t)
    : chart_(std::move(chart)),
      cv_(std::move(coeff_v)),
      cy_(std::move(coeff_y)),
      ct_(std::move(coeff_t)) {
  RegularityReport r = regularity_check(as_derivation());
  if (!r.ok) throw F2VError("not a regular chart field: " + r.reason);
}

ChartVectorField ChartVectorField::from_derivation(const std::string& chart,
                                                   const Derivation& d) {
  for (const auto& [x, c] : d.comp)
    if (x != var_t() && x != var_v() && x != var_y() && !c.is_zero())
      throw ChartMismatch("derivation has a component outside (t, v, y)");
  return ChartVectorField(chart, d.component(var_v()), d.component(var_y()),
                          d.component(var_t()));
}

Derivation ChartVectorField::as_derivation() const {
  Derivation d;
  d.comp.emplace(var_v(), cv_);
  d.comp.emplace(var_y(), cy_);
  d.comp.emplace(var_t(), ct_);
  return d;
}

ChartVectorField ChartVectorField::operator+(const ChartVectorField& o) const {
  if (chart_ != o.chart_) throw ChartMismatch("adding fields on different charts");
  return ChartVectorField(chart_, cv_ + o.cv_, cy_ + o.cy_, ct_ + o.ct_);
}

ChartVectorField ChartVectorField::operator-(const ChartVectorField& o) const {
  return *this + o.scaled(Rational(-1));
}

ChartVectorField ChartVectorField::scaled(const Rational& c) const {
  return ChartVectorField(chart_, c * cv_, c * cy_, c * ct_);
}

bool ChartVectorField::operator==(const ChartVectorField& o) const {
  return chart_ == o.chart_ && cv_ == o.cv_ && cy_ == o.cy_ && ct_ == o.ct_;
}

bool ChartVectorField::is_zero() const {
  return cv_.is_zero() && cy_.is_zero() && ct_.is_zero();
}

Derivation pushforward(const Derivation& f, const Transition& tr) {
  Derivation out;
  for (const auto& [w, rule] : tr.rules) {
    // (f*)_w = sum_u f_u d(rule_w)/du, rewritten in target coordinates.
    SparseExpr acc;
    for (const auto& [u, fu] : f.comp) acc = acc + fu * rule.partial_derivative(u);
    out.comp.emplace(w, acc.substitute(tr.inverse_rules));
  }
  return out;
}

Derivation pushforward(const ChartVectorField& f, const Transition& tr) {
  if (f.chart() != tr.source)
    throw ChartMismatch("pushforward source chart mismatch: field on " + f.chart() +
                        ", transition from " + tr.source);
  return pushforward(f.as_derivation(), tr);
}

Transition specialize_transition(const Transition& tr, const Rational& tau) {
  std::map<VarId, SparseExpr, VarLess> at_tau{{var_t(), SparseExpr::constant(tau)}};
  Transition out;
  out.source = tr.source;
  out.target = tr.target;
  for (const auto& [w, e] : tr.rules)
    if (w != var_t()) out.rules.emplace(w, e.substitute(at_tau));
  for (const auto& [w, e] : tr.inverse_rules)
    if (w != var_t()) out.inverse_rules.emplace(w, e.substitute(at_tau));
  return out;
}

const Chart& GluedFamily::chart(const std::string& name) const {
  for (const auto& c : charts)
    if (c.name == name) return c;
  throw F2VError("unknown chart " + name);
}

const Transition& GluedFamily::transition(const std::string& source,
                                          const std::string& target) const {
  for (const auto& t : transitions)
    if (t.source == source && t.target == target) return t;
  throw F2VError("unknown transition " + source + " -> " + target);
}

GluedFamily load_family_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest " + path);

  GluedFamily fam;
  Transition* open_transition = nullptr;
  std::string line;
  int lineno = 0;
  auto complain = [&](const std::string& why) {
    throw ParseError("manifest " + path + ":" + std::to_string(lineno) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == '#') continue;

    if (head == "chart") {
      std::string name, colon;
      if (!(ls >> name >> colon) || colon != ":") complain("chart NAME : coords...");
      Chart c{name, {}};
      std::string coord;
      while (ls >> coord) c.coords.push_back(VarId::intern(coord));
      if (c.coords.empty()) complain("chart without coordinates");
      fam.charts.push_back(std::move(c));
    } else if (head == "transition") {
      std::string src, arrow, dst;
      if (!(ls >> src >> arrow >> dst) || arrow != "->")
        complain("transition SRC -> DST");
      fam.transitions.push_back(Transition{src, dst, {}, {}});
      open_transition = &fam.transitions.back();
    } else if (head == "rule" || head == "inverse") {
      if (!open_transition) complain(head + " outside a transition block");
      std::string var, eq;
      if (!(ls >> var >> eq) || eq != "=") complain(head + " VAR = expr");
      std::string rest;
      std::getline(ls, rest);
      auto& table = head == "rule" ? open_transition->rules
                                   : open_transition->inverse_rules;
      table.emplace(VarId::intern(var), parse_expr(rest));
    } else if (head == "laurent") {
      if (!open_transition) complain("laurent outside a transition block");
      std::string var;
      while (ls >> var) {
        VarId x = VarId::intern(var);
        for (auto& [w, e] : open_transition->rules) {
          (void)w;
          e = e.with_laurent(x);
        }
        for (auto& [w, e] : open_transition->inverse_rules) {
          (void)w;
          e = e.with_laurent(x);
        }
      }
    } else if (head == "end") {
      open_transition = nullptr;
    } else if (head == "model") {
      std::string name, eq;
      if (!(ls >> name >> eq) || eq != "=") complain("model NAME = expr");
      std::string rest;
      std::getline(ls, rest);
      fam.models.emplace(name, parse_expr(rest));
    } else {
      complain("unknown directive " + head);
    }
  }
  if (fam.charts.empty()) throw ParseError("manifest " + path + " declares no charts");
  return fam;
}

namespace {

SparseExpr random_poly(Rng& rng, const std::vector<std::pair<VarId, int>>& degrees,
                       int terms) {
  SparseExpr p;
  for (int k = 0; k < terms; ++k) {
    std::vector<std::pair<VarId, int>> factors;
    for (const auto& [x, maxdeg] : degrees)
      factors.emplace_back(x, static_cast<int>(rng.range(0, maxdeg)));
    p = p + SparseExpr::term(rng.rational(), Monomial::from_factors(factors));
  }
  return p;
}

}  // namespace

ConsistencyCheck verify_transition_consistency(const Transition& tr, uint64_t seed,
                                               int samples) {
  auto fail = [](std::string id, SparseExpr residual) {
    return ConsistencyCheck{false, std::move(id), std::move(residual)};
  };

  for (const auto& [w, rule] : tr.rules) {
    SparseExpr back = rule.substitute(tr.inverse_rules);
    SparseExpr residual = back - SparseExpr::variable(w);
    if (!residual.is_zero())
      return fail("rules_then_inverse:" + w.name(), residual);
  }
  for (const auto& [u, rule] : tr.inverse_rules) {
    SparseExpr back = rule.substitute(tr.rules);
    SparseExpr residual = back - SparseExpr::variable(u);
    if (!residual.is_zero())
      return fail("inverse_then_rules:" + u.name(), residual);
  }

  // Round-trip random chart fields through the chain rule. A fiberwise
  // transition carries no t rule; then the sampled fields are t-free too.
  Rng rng(seed);
  Transition back = tr.inverted();
  bool has_t = tr.rules.count(var_t()) > 0;
  std::vector<std::pair<VarId, int>> degs{{var_v(), 2}};
  if (has_t) degs.emplace_back(var_t(), 2);
  for (int s = 0; s < samples; ++s) {
    SparseExpr g = random_poly(rng, degs, 3);
    SparseExpr al = random_poly(rng, degs, 2);
    SparseExpr be = random_poly(rng, degs, 2);
    SparseExpr ga = random_poly(rng, degs, 2);
    SparseExpr k = has_t ? random_poly(rng, {{var_t(), 2}}, 2) : SparseExpr();
    SparseExpr yy = SparseExpr::variable(var_y());
    ChartVectorField f(tr.source, g, (al * yy + be) * yy + ga, k);
    Derivation round = pushforward(pushforward(f, tr), back);
    Derivation residual = round - f.as_derivation();
    if (!residual.is_zero())
      for (const auto& [x, c] : residual.comp)
        if (!c.is_zero())
          return fail("pushforward_roundtrip:" + x.name(), c);
  }
  return {};
}

bool proj_equal(const std::vector<SparseExpr>& a, const std::vector<SparseExpr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (!(a[i] * b[j] - a[j] * b[i]).is_zero()) return false;
  return true;
}

std::optional<SparseExpr> common_monomial_factor(const std::vector<SparseExpr>& a,
                                                 const std::vector<SparseExpr>& b) {
  if (a.size() != b.size() || a.empty()) return std::nullopt;
  size_t lead = a.size();
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) {
      lead = i;
      break;
    }
  if (lead == a.size() || b[lead].is_zero()) return std::nullopt;
  // Monomial multiplication translates the canonical term order, so if
  // b = M * a the leading terms already determine M.
  const auto& [ma, ca] = *a[lead].terms().begin();
  const auto& [mb, cb] = *b[lead].terms().begin();
  SparseExpr m = SparseExpr::term(cb / ca, mb.times(ma.inverse()));
  for (size_t i = 0; i < a.size(); ++i)
    if (!(b[i] - m * a[i]).is_zero()) return std::nullopt;
  return m;
}

std::vector<IdentityCheck> verify_surface_models(const GluedFamily& fam) {
  VarId x = VarId::intern("x"), z = VarId::intern("z"), u = VarId::intern("u");
  VarId t = var_t(), v = var_v(), y = var_y();
  auto E = [](const std::string& s) { return parse_expr(s); };
  SparseExpr one = SparseExpr::constant(1);
  SparseExpr vv = SparseExpr::variable(v), yv = SparseExpr::variable(y),
             tv = SparseExpr::variable(t), xv = SparseExpr::variable(x);

  std::vector<IdentityCheck> out;
  auto residual_check = [&](const std::string& id, const SparseExpr& r) {
    out.push_back({id, r.is_zero(), "residual " + r.canonical_string()});
  };

  const SparseExpr& f2 = fam.models.at("f2");
  const SparseExpr& fammodel = fam.models.at("family");

  using Rules = std::map<VarId, SparseExpr, VarLess>;
  // Chart embeddings at the x = 1 slice: the five model symbols receive the
  // components of ([x:y:z],[u:v]).
  Rules rho1_f2{{x, one}, {z, E("1 * v^2 y^1")}, {u, one}};
  Rules rho2_f2{{x, one}, {y, E("1 * v^2 y^1")}, {z, yv}, {u, vv}, {v, one}};
  residual_check("f2_equation_chart1", f2.substitute(rho1_f2));
  residual_check("f2_equation_chart2", f2.substitute(rho2_f2));

  Rules rho1_fam{{x, one}, {z, E("1 * v^2 y^1 + -1 * t^1 v^1")}, {u, one}};
  Rules rho2_fam{{x, one}, {y, E("1 * v^2 y^1 + 1 * t^1 v^1")}, {z, yv}, {u, vv}, {v, one}};
  residual_check("family_equation_chart1", fammodel.substitute(rho1_fam));
  residual_check("family_equation_chart2", fammodel.substitute(rho2_fam));

  residual_check("family_t0_slice", fammodel.substitute_zero(t) - f2);

  // Overlap agreement: compose the second chart's embedding with the forward
  // transition and compare projectively with the first chart's embedding.
  auto overlap = [&](const std::string& id, const Transition& tr,
                     const std::vector<SparseExpr>& chart1_p2,
                     const std::vector<SparseExpr>& chart2_p2) {
    std::vector<SparseExpr> composed_p2, composed_p1;
    for (const auto& c : chart2_p2) composed_p2.push_back(c.substitute(tr.rules));
    std::vector<SparseExpr> chart2_p1{vv, one};
    for (const auto& c : chart2_p1) composed_p1.push_back(c.substitute(tr.rules));
    std::vector<SparseExpr> chart1_p1{one, vv};
    bool ok = proj_equal(chart1_p2, composed_p2) && proj_equal(chart1_p1, composed_p1);
    auto m2 = common_monomial_factor(chart1_p2, composed_p2);
    auto m1 = common_monomial_factor(chart1_p1, composed_p1);
    std::string detail = "factors ";
    detail += m2 ? m2->canonical_string() : "none";
    detail += " ; ";
    detail += m1 ? m1->canonical_string() : "none";
    ok = ok && m1.has_value() && m2.has_value();
    out.push_back({id, ok, detail});
  };

  const Transition& tr = fam.transition("W", "Wp");
  Transition tr0 = tr;
  for (auto& [w, e] : tr0.rules) e = e.substitute_zero(t);
  for (auto& [w, e] : tr0.inverse_rules) e = e.substitute_zero(t);

  overlap("f2_overlap_agreement", tr0, {one, yv, E("1 * v^2 y^1")},
          {one, E("1 * v^2 y^1"), yv});
  overlap("family_overlap_agreement", tr,
          {one, yv, E("1 * v^2 y^1 + -1 * t^1 v^1")},
          {one, E("1 * v^2 y^1 + 1 * t^1 v^1"), yv});

  // Trivialization of the family away from t = 0, fiber pair kept homogeneous:
  // phi(t, v, [x:y]) = (t, [1:v], [ty : vy - tx]) and the primed-chart formula
  // composed with the homogeneous transition must agree up to the factor v.
  {
    Rules hom{{v, tr.rules.at(v)},
              {y, E("1 * v^2 y^1 + -1 * t^1 v^1 x^1")},
              {t, tr.rules.at(t)}};
    std::vector<SparseExpr> phi_a{one, vv};
    std::vector<SparseExpr> phi_b{tv * yv, vv * yv - tv * xv};
    std::vector<SparseExpr> phip_a{vv, one};
    std::vector<SparseExpr> phip_b{tv * vv * yv + tv * tv * xv, yv};
    std::vector<SparseExpr> comp_a, comp_b;
    for (const auto& c : phip_a) comp_a.push_back(c.substitute(hom));
    for (const auto& c : phip_b) comp_b.push_back(c.substitute(hom));
    auto ma = common_monomial_factor(phi_a, comp_a);
    auto mb = common_monomial_factor(phi_b, comp_b);
    bool ok = proj_equal(phi_a, comp_a) && proj_equal(phi_b, comp_b) &&
              ma.has_value() && mb.has_value();
    std::string detail = "factors ";
    detail += ma ? ma->canonical_string() : "none";
    detail += " ; ";
    detail += mb ? mb->canonical_string() : "none";
    out.push_back({"trivialization_identity", ok, detail});
  }

  return out;
}

}  // namespace f2v
