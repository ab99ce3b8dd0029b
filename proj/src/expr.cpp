#include "f2v/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace f2v {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::var(VarId x, int exp) {
  Monomial m;
  if (exp != 0) m.factors_.emplace_back(x, exp);
  return m;
}

Monomial Monomial::from_factors(std::vector<std::pair<VarId, int>> raw) {
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    return VarId::canonical_less(a.first, b.first);
  });
  Monomial m;
  for (const auto& [x, e] : raw) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == x)
      throw F2VError("duplicate variable in monomial factors");
    m.factors_.emplace_back(x, e);
  }
  return m;
}

int Monomial::exponent(VarId x) const {
  for (const auto& [w, e] : factors_)
    if (w == x) return e;
  return 0;
}

long Monomial::total_degree() const {
  long d = 0;
  for (const auto& [w, e] : factors_) d += e;
  return d;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial m;
  auto a = factors_.begin(), b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() ||
        (a != factors_.end() && VarId::canonical_less(a->first, b->first))) {
      m.factors_.push_back(*a++);
    } else if (a == factors_.end() || VarId::canonical_less(b->first, a->first)) {
      m.factors_.push_back(*b++);
    } else {
      int e = a->second + b->second;
      if (e != 0) m.factors_.emplace_back(a->first, e);
      ++a, ++b;
    }
  }
  return m;
}

Monomial Monomial::pow(int k) const {
  Monomial m;
  if (k == 0) return m;
  for (const auto& [x, e] : factors_) m.factors_.emplace_back(x, e * k);
  return m;
}

std::optional<Monomial> Monomial::divide_nonneg(const Monomial& o) const {
  Monomial q = times(o.pow(-1));
  if (q.has_negative_exponent()) return std::nullopt;
  return q;
}

bool Monomial::has_negative_exponent() const {
  for (const auto& [x, e] : factors_)
    if (e < 0) return true;
  return false;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  auto i = a.factors_.begin(), j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    // Missing variable counts as exponent 0 at its canonical position.
    if (j == b.factors_.end() ||
        (i != a.factors_.end() && VarId::canonical_less(i->first, j->first))) {
      if (i->second != 0) return i->second < 0 ? -1 : 1;
      ++i;
    } else if (i == a.factors_.end() || VarId::canonical_less(j->first, i->first)) {
      if (j->second != 0) return j->second < 0 ? 1 : -1;
      ++j;
    } else {
      if (i->second != j->second) return i->second < j->second ? -1 : 1;
      ++i, ++j;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// SparseExpr construction and canonical form

SparseExpr SparseExpr::constant(const Rational& c) {
  SparseExpr p;
  if (!f2v::is_zero(c)) p.terms_.emplace(Monomial::unit(), c);
  return p;
}

SparseExpr SparseExpr::variable(VarId x) {
  SparseExpr p;
  p.terms_.emplace(Monomial::var(x), Rational(1));
  return p;
}

SparseExpr SparseExpr::term(const Rational& c, const Monomial& m) {
  SparseExpr p;
  if (!f2v::is_zero(c)) p.terms_.emplace(m, c);
  for (const auto& [x, e] : m.factors())
    if (e < 0) p.laurent_.push_back(x);
  std::sort(p.laurent_.begin(), p.laurent_.end(),
            [](VarId a, VarId b) { return VarId::canonical_less(a, b); });
  return p;
}

void SparseExpr::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    bool drop = f2v::is_zero(it->second);
    for (const auto& [x, bound] : trunc_)
      if (it->first.exponent(x) > bound) drop = true;
    for (const auto& [x, e] : it->first.factors())
      if (e < 0 && !laurent_allowed(x))
        throw F2VError("negative exponent of " + x.name() +
                       " without Laurent permission");
    it = drop ? terms_.erase(it) : std::next(it);
  }
}

bool SparseExpr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Rational SparseExpr::constant_value() const { return coeff(Monomial::unit()); }

Rational SparseExpr::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool SparseExpr::laurent_allowed(VarId x) const {
  return std::find(laurent_.begin(), laurent_.end(), x) != laurent_.end();
}

std::optional<int> SparseExpr::truncation(VarId x) const {
  for (const auto& [w, n] : trunc_)
    if (w == x) return n;
  return std::nullopt;
}

SparseExpr SparseExpr::with_laurent(VarId x) const {
  SparseExpr p = *this;
  if (!p.laurent_allowed(x)) {
    p.laurent_.push_back(x);
    std::sort(p.laurent_.begin(), p.laurent_.end(),
              [](VarId a, VarId b) { return VarId::canonical_less(a, b); });
  }
  return p;
}

SparseExpr SparseExpr::with_truncation(VarId x, int order) const {
  if (order < 0) throw F2VError("truncation order must be nonnegative");
  SparseExpr p = *this;
  bool found = false;
  for (auto& [w, n] : p.trunc_)
    if (w == x) {
      n = std::min(n, order);
      found = true;
    }
  if (!found) {
    p.trunc_.emplace_back(x, order);
    std::sort(p.trunc_.begin(), p.trunc_.end(), [](const auto& a, const auto& b) {
      return VarId::canonical_less(a.first, b.first);
    });
  }
  p.normalize();
  return p;
}

SparseExpr SparseExpr::without_truncations() const {
  SparseExpr p = *this;
  p.trunc_.clear();
  return p;
}

SparseExpr SparseExpr::like_context(const SparseExpr& like) const {
  SparseExpr p = *this;
  p.laurent_ = merge_laurent(p.laurent_, like.laurent_);
  p.trunc_ = merge_trunc(p.trunc_, like.trunc_);
  p.normalize();
  return p;
}

std::vector<VarId> SparseExpr::merge_laurent(const std::vector<VarId>& a,
                                             const std::vector<VarId>& b) {
  std::vector<VarId> out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](VarId x, VarId w) { return VarId::canonical_less(x, w); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<VarId, int>> SparseExpr::merge_trunc(
    const std::vector<std::pair<VarId, int>>& a,
    const std::vector<std::pair<VarId, int>>& b) {
  // Per variable: min when both sides carry a bound, otherwise whichever is set.
  std::vector<std::pair<VarId, int>> out;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && VarId::canonical_less(i->first, j->first)))
      out.push_back(*i++);
    else if (i == a.end() || VarId::canonical_less(j->first, i->first))
      out.push_back(*j++);
    else {
      out.emplace_back(i->first, std::min(i->second, j->second));
      ++i, ++j;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Arithmetic

SparseExpr operator+(const SparseExpr& a, const SparseExpr& b) {
  SparseExpr p;
  p.laurent_ = SparseExpr::merge_laurent(a.laurent_, b.laurent_);
  p.trunc_ = SparseExpr::merge_trunc(a.trunc_, b.trunc_);
  p.terms_ = a.terms_;
  for (const auto& [m, c] : b.terms_) {
    auto [it, fresh] = p.terms_.emplace(m, c);
    if (!fresh) it->second += c;
  }
  p.normalize();
  return p;
}

SparseExpr SparseExpr::operator-() const {
  SparseExpr p = *this;
  for (auto& [m, c] : p.terms_) c = -c;
  return p;
}

SparseExpr operator-(const SparseExpr& a, const SparseExpr& b) { return a + (-b); }

SparseExpr operator*(const SparseExpr& a, const SparseExpr& b) {
  SparseExpr p;
  p.laurent_ = SparseExpr::merge_laurent(a.laurent_, b.laurent_);
  p.trunc_ = SparseExpr::merge_trunc(a.trunc_, b.trunc_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma.times(mb);
      bool skip = false;
      for (const auto& [x, bound] : p.trunc_)
        if (m.exponent(x) > bound) skip = true;
      if (skip) continue;
      Rational c = ca * cb;
      auto [it, fresh] = p.terms_.emplace(std::move(m), c);
      if (!fresh) it->second += c;
    }
  p.normalize();
  return p;
}

SparseExpr operator*(const Rational& c, const SparseExpr& a) {
  SparseExpr p = a;
  for (auto& [m, w] : p.terms_) w *= c;
  p.normalize();
  return p;
}

SparseExpr SparseExpr::partial_derivative(VarId x) const {
  SparseExpr p;
  p.laurent_ = laurent_;
  p.trunc_ = trunc_;
  // d/dx maps information mod x^(N+1) to information mod x^N.
  for (auto& [w, n] : p.trunc_)
    if (w == x && n > 0) --n;
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(x);
    if (e == 0) continue;
    Monomial d = m.times(Monomial::var(x, -1));
    Rational cd = c * Rational(e);
    auto [it, fresh] = p.terms_.emplace(std::move(d), cd);
    if (!fresh) it->second += cd;
  }
  p.normalize();
  return p;
}

// ---------------------------------------------------------------------------
// Inversion and substitution

SparseExpr SparseExpr::inverse() const {
  if (terms_.empty()) throw NonInvertibleSubstitution("inverse of zero");
  // Strip the componentwise-minimal monomial M, so *this = M * u with all
  // exponents of u nonnegative.
  std::vector<std::pair<VarId, int>> mins;
  for (const auto& [m, c] : terms_) {
    (void)c;
    for (const auto& [x, e] : m.factors()) {
      bool seen = false;
      for (auto& [w, lo] : mins)
        if (w == x) {
          lo = std::min(lo, e);
          seen = true;
        }
      if (!seen) mins.emplace_back(x, e);
    }
  }
  // A variable absent from some term has exponent 0 there.
  for (auto& [x, lo] : mins) {
    for (const auto& [m, c] : terms_) {
      (void)c;
      if (m.exponent(x) == 0) lo = std::min(lo, 0);
    }
  }
  Monomial strip = Monomial::from_factors(mins);
  SparseExpr u;
  u.trunc_ = trunc_;
  for (const auto& [m, c] : terms_) u.terms_.emplace(m.times(strip.pow(-1)), c);

  Rational c0 = u.coeff(Monomial::unit());
  if (f2v::is_zero(c0))
    throw NonInvertibleSubstitution(
        "not a unit: no invertible monomial factors off a unit series");

  // u = c0 (1 + s); the geometric series for (1+s)^-1 must terminate, which
  // needs every term of s to carry positive degree in some truncated variable.
  SparseExpr s;
  s.trunc_ = trunc_;
  s.laurent_ = laurent_;
  long steps = 1;
  for (const auto& [x, n] : trunc_) {
    (void)x;
    steps += n;
  }
  for (const auto& [m, c] : u.terms_) {
    if (m.is_unit()) continue;
    bool dies = false;
    for (const auto& [x, n] : trunc_) {
      (void)n;
      if (m.exponent(x) > 0) dies = true;
    }
    if (!dies)
      throw NonInvertibleSubstitution(
          "unit-series tail does not vanish under the active truncation");
    s.terms_.emplace(m, c / c0);
  }

  SparseExpr inv_series = SparseExpr::constant(1);
  SparseExpr power = SparseExpr::constant(1);
  for (long k = 1; k <= steps; ++k) {
    power = power * (-s);
    if (power.is_zero()) break;
    inv_series = inv_series + power;
  }

  SparseExpr result =
      SparseExpr::term(Rational(1) / c0, strip.pow(-1)) * inv_series;
  for (const auto& [x, e] : strip.factors())
    if (e != 0) result = result.with_laurent(x);
  result.laurent_ = merge_laurent(result.laurent_, laurent_);
  result.normalize();
  return result;
}

SparseExpr SparseExpr::substitute(
    const std::map<VarId, SparseExpr, VarLess>& rules) const {
  // Context (truncation bounds, Laurent permissions) merges across the input
  // and every replacement that actually gets used.
  SparseExpr acc;
  acc.laurent_ = laurent_;
  acc.trunc_ = trunc_;
  for (const auto& [x, r] : rules) {
    (void)x;
    acc.laurent_ = merge_laurent(acc.laurent_, r.laurent_);
    acc.trunc_ = merge_trunc(acc.trunc_, r.trunc_);
  }

  std::map<VarId, std::map<int, SparseExpr>, VarLess> power_cache;
  auto power_of = [&](VarId x, int e) -> const SparseExpr& {
    auto& cache = power_cache[x];
    auto hit = cache.find(e);
    if (hit != cache.end()) return hit->second;
    SparseExpr base;
    auto rule = rules.find(x);
    if (rule != rules.end())
      base = rule->second.like_context(acc);
    else
      base = SparseExpr::variable(x).like_context(acc);
    SparseExpr value = SparseExpr::constant(1).like_context(acc);
    if (e > 0) {
      for (int k = 0; k < e; ++k) value = value * base;
    } else if (e < 0) {
      SparseExpr ib = base.inverse().like_context(acc);
      for (int k = 0; k < -e; ++k) value = value * ib;
    }
    return cache.emplace(e, std::move(value)).first->second;
  };

  SparseExpr out;
  out.laurent_ = acc.laurent_;
  out.trunc_ = acc.trunc_;
  for (const auto& [m, c] : terms_) {
    SparseExpr term_value = SparseExpr::constant(c).like_context(acc);
    for (const auto& [x, e] : m.factors()) term_value = term_value * power_of(x, e);
    out = out + term_value;
  }
  // Inversions performed inside replacements may widen the Laurent set.
  for (auto& [x, cache] : power_cache)
    for (auto& [e, value] : cache) {
      (void)e;
      out.laurent_ = merge_laurent(out.laurent_, value.laurent_vars());
    }
  out.normalize();
  return out;
}

SparseExpr SparseExpr::substitute_zero(VarId x) const {
  SparseExpr p;
  p.laurent_ = laurent_;
  p.trunc_ = trunc_;
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(x);
    if (e < 0)
      throw NonInvertibleSubstitution("substituting 0 into a negative power of " +
                                      x.name());
    if (e == 0) p.terms_.emplace(m, c);
  }
  p.normalize();
  return p;
}

// ---------------------------------------------------------------------------
// Queries

std::optional<long> SparseExpr::t_valuation() const {
  if (terms_.empty()) return std::nullopt;
  long best = 0;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    (void)c;
    int e = m.exponent(var_t());
    if (e < 0) throw NegativeTExponent("t_valuation on a Laurent-in-t expression");
    if (first || e < best) best = e;
    first = false;
  }
  return best;
}

long SparseExpr::degree_in(VarId x) const {
  long best = 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    best = std::max(best, static_cast<long>(m.exponent(x)));
  }
  return best;
}

long SparseExpr::min_exponent(VarId x) const {
  long best = 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    best = std::min(best, static_cast<long>(m.exponent(x)));
  }
  return best;
}

bool SparseExpr::contains(VarId x) const {
  for (const auto& [m, c] : terms_) {
    (void)c;
    if (m.exponent(x) != 0) return true;
  }
  return false;
}

std::vector<VarId> SparseExpr::variables() const {
  std::vector<VarId> out;
  for (const auto& [m, c] : terms_) {
    (void)c;
    for (const auto& [x, e] : m.factors()) {
      (void)e;
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end(),
            [](VarId a, VarId b) { return VarId::canonical_less(a, b); });
  return out;
}

SparseExpr SparseExpr::coefficient_of(VarId x, int k) const {
  SparseExpr p;
  p.laurent_ = laurent_;
  p.trunc_ = trunc_;
  for (const auto& [m, c] : terms_)
    if (m.exponent(x) == k) p.terms_.emplace(m.times(Monomial::var(x, -k)), c);
  p.normalize();
  return p;
}

// ---------------------------------------------------------------------------
// Printing and parsing

std::string SparseExpr::canonical_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << rat_string(c);
    for (size_t k = 0; k < m.factors().size(); ++k) {
      const auto& [x, e] = m.factors()[k];
      out << (k == 0 ? " * " : " ") << x.name() << "^" << e;
    }
  }
  return out.str();
}

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;

  explicit Lexer(const std::string& text) : s(text) {}

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw ParseError("expected digits at offset " + std::to_string(start));
    return s.substr(start, i - start);
  }
  std::string ident() {
    skip_ws();
    size_t start = i;
    auto head = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto tail = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (i >= s.size() || !head(s[i]))
      throw ParseError("expected identifier at offset " + std::to_string(start));
    ++i;
    while (i < s.size() && tail(s[i])) ++i;
    return s.substr(start, i - start);
  }
  long integer() {
    skip_ws();
    bool neg = eat('-');
    if (!neg) eat('+');
    std::string d = digits();
    try {
      return (neg ? -1 : 1) * std::stol(d);
    } catch (const std::out_of_range&) {
      throw ParseError("integer out of range: " + d);
    }
  }
};

}  // namespace

SparseExpr parse_expr(const std::string& text) {
  Lexer lex(text);
  if (lex.done()) throw ParseError("empty expression");
  SparseExpr out;
  bool expect_term = true;
  while (!lex.done()) {
    if (!expect_term) {
      if (!lex.eat('+')) throw ParseError("expected '+' between terms");
    }
    expect_term = false;

    bool neg = lex.eat('-');
    if (!neg) lex.eat('+');
    std::string num = lex.digits();
    std::string den = "1";
    if (lex.eat('/')) den = lex.digits();
    if (den.find_first_not_of('0') == std::string::npos)
      throw ParseError("zero denominator in coefficient");
    Rational c = rat_from_string((neg ? "-" : "") + num + "/" + den);

    std::vector<std::pair<VarId, int>> factors;
    if (lex.eat('*')) {
      do {
        std::string name = lex.ident();
        if (!lex.eat('^')) throw ParseError("expected '^' after variable " + name);
        long e = lex.integer();
        factors.emplace_back(VarId::intern(name), static_cast<int>(e));
      } while (!lex.done() && lex.peek() != '+');
    }
    SparseExpr term = SparseExpr::term(c, Monomial::from_factors(factors));
    out = out + term;
  }
  return out;
}

}  // namespace f2v
