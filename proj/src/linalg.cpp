#include "f2v/linalg.hpp"

namespace f2v {

RationalMatrix RationalMatrix::identity(size_t n) {
  RationalMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(
    const std::vector<std::vector<Rational>>& rows) {
  size_t nc = rows.empty() ? 0 : rows.front().size();
  RationalMatrix m(rows.size(), nc);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw DimensionMismatch("ragged row list");
    for (size_t j = 0; j < nc; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

std::vector<Rational> RationalMatrix::row(size_t i) const {
  std::vector<Rational> out(cols_);
  for (size_t j = 0; j < cols_; ++j) out[j] = at(i, j);
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix m(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

std::vector<Rational> RationalMatrix::apply(const std::vector<Rational>& x) const {
  if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
  std::vector<Rational> out(rows_, Rational(0));
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (!is_zero(at(i, j))) out[i] += at(i, j) * x[j];
  return out;
}

RrefResult rref(const RationalMatrix& a) {
  RrefResult res;
  res.reduced = a;
  res.transform = RationalMatrix::identity(a.rows());
  RationalMatrix& r = res.reduced;
  RationalMatrix& t = res.transform;

  size_t pivot_row = 0;
  for (size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
    size_t found = a.rows();
    for (size_t i = pivot_row; i < a.rows(); ++i)
      if (!is_zero(r.at(i, col))) {
        found = i;
        break;
      }
    if (found == a.rows()) continue;
    if (found != pivot_row) {
      for (size_t j = 0; j < r.cols(); ++j) std::swap(r.at(found, j), r.at(pivot_row, j));
      for (size_t j = 0; j < t.cols(); ++j) std::swap(t.at(found, j), t.at(pivot_row, j));
    }
    Rational inv = 1 / r.at(pivot_row, col);
    for (size_t j = 0; j < r.cols(); ++j) r.at(pivot_row, j) *= inv;
    for (size_t j = 0; j < t.cols(); ++j) t.at(pivot_row, j) *= inv;
    for (size_t i = 0; i < a.rows(); ++i) {
      if (i == pivot_row || is_zero(r.at(i, col))) continue;
      Rational f = r.at(i, col);
      for (size_t j = 0; j < r.cols(); ++j) r.at(i, j) -= f * r.at(pivot_row, j);
      for (size_t j = 0; j < t.cols(); ++j) t.at(i, j) -= f * t.at(pivot_row, j);
    }
    res.pivot_cols.push_back(col);
    ++pivot_row;
  }
  res.rank = pivot_row;
  return res;
}

std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& a) {
  RrefResult res = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (size_t c : res.pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(a.cols(), Rational(0));
    v[f] = 1;
    for (size_t r = 0; r < res.rank; ++r)
      v[res.pivot_cols[r]] = -res.reduced.at(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

AffineSolutionSpace solve_affine(const RationalMatrix& a,
                                 const std::vector<Rational>& rhs) {
  if (rhs.size() != a.rows()) throw DimensionMismatch("rhs size mismatch");
  RrefResult res = rref(a);
  std::vector<Rational> c = res.transform.apply(rhs);

  AffineSolutionSpace out;
  for (size_t r = res.rank; r < a.rows(); ++r)
    if (!is_zero(c[r])) return out;  // inconsistent

  out.consistent = true;
  out.particular.assign(a.cols(), Rational(0));
  for (size_t r = 0; r < res.rank; ++r) out.particular[res.pivot_cols[r]] = c[r];
  out.kernel = kernel_basis(a);
  return out;
}

std::vector<std::vector<Rational>> left_nullspace(const RationalMatrix& a) {
  RrefResult res = rref(a);
  std::vector<std::vector<Rational>> rows;
  for (size_t r = res.rank; r < a.rows(); ++r) rows.push_back(res.transform.row(r));
  return rows;
}

size_t rank(const RationalMatrix& a) { return rref(a).rank; }

}  // namespace f2v
