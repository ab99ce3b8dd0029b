#pragma once

// Internal helper: turn unknown-linear symbolic expressions into exact
// coefficient rows keyed by (component slot, base monomial).

#include <functional>
#include <map>
#include <vector>

#include "f2v/expr.hpp"
#include "f2v/linalg.hpp"

namespace f2v::detail {

struct RowKeyLess {
  bool operator()(const std::pair<int, Monomial>& x,
                  const std::pair<int, Monomial>& y) const {
    if (x.first != y.first) return x.first < y.first;
    return Monomial::compare(x.second, y.second) < 0;
  }
};

using RowKey = std::pair<int, Monomial>;
using RowMap = std::map<RowKey, std::vector<Rational>, RowKeyLess>;

// Every term must carry exactly one unknown to the first power.
inline void accumulate_rows(RowMap& rows, int comp, const SparseExpr& expr,
                            const std::map<VarId, size_t, VarLess>& index,
                            const std::function<bool(const Monomial&)>& filter) {
  for (const auto& [m, c] : expr.terms()) {
    VarId q;
    int count = 0;
    std::vector<std::pair<VarId, int>> base_factors;
    for (const auto& [x, e] : m.factors()) {
      if (index.count(x)) {
        if (e != 1) throw InternalCheckFailure("unknown appears with exponent != 1");
        q = x;
        ++count;
      } else {
        base_factors.emplace_back(x, e);
      }
    }
    if (count != 1) throw InternalCheckFailure("term is not linear in the unknowns");
    Monomial base = Monomial::from_factors(std::move(base_factors));
    if (!filter(base)) continue;
    auto [it, fresh] = rows.emplace(std::make_pair(comp, base),
                                    std::vector<Rational>(index.size(), Rational(0)));
    (void)fresh;
    it->second[index.at(q)] += c;
  }
}

inline RationalMatrix rows_to_matrix(const RowMap& rows, size_t cols) {
  RationalMatrix m(rows.size(), cols);
  size_t i = 0;
  for (const auto& [key, row] : rows) {
    (void)key;
    for (size_t j = 0; j < cols; ++j) m.at(i, j) = row[j];
    ++i;
  }
  return m;
}

}  // namespace f2v::detail
