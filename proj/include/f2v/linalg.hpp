#pragma once

// Dense exact linear algebra over Q. Small systems only; determinism matters
// more than speed, so pivoting is fixed: first nonzero entry scanning rows in
// order, columns left to right.

#include <vector>

#include "f2v/rational.hpp"
#include "f2v/symbols.hpp"

namespace f2v {

class RationalMatrix {
 public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(size_t n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Rational& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Rational> row(size_t i) const;
  RationalMatrix transpose() const;
  std::vector<Rational> apply(const std::vector<Rational>& x) const;  // A * x

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  size_t rows_, cols_;
  std::vector<Rational> data_;
};

struct RrefResult {
  RationalMatrix reduced;          // R, fully reduced row echelon form
  RationalMatrix transform;        // T with T * input = R
  std::vector<size_t> pivot_cols;  // column of the pivot in row r, r < rank
  size_t rank = 0;
};

RrefResult rref(const RationalMatrix& a);

// Basis of { x : A x = 0 }; one vector per free column, ascending.
std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& a);

struct AffineSolutionSpace {
  bool consistent = false;
  std::vector<Rational> particular;             // empty when inconsistent
  std::vector<std::vector<Rational>> kernel;    // homogeneous basis
  size_t dimension() const { return kernel.size(); }
};

AffineSolutionSpace solve_affine(const RationalMatrix& a,
                                 const std::vector<Rational>& rhs);

// Basis of { y : y^T A = 0 }, read off the transform rows that map onto the
// zero rows of the echelon form.
std::vector<std::vector<Rational>> left_nullspace(const RationalMatrix& a);

size_t rank(const RationalMatrix& a);

}  // namespace f2v
