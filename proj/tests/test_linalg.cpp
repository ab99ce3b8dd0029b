#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "f2v/linalg.hpp"
#include "f2v/rng.hpp"

using namespace f2v;

namespace {

RationalMatrix random_matrix(Rng& rng, size_t m, size_t n) {
  RationalMatrix a(m, n);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j)
      if (rng.range(0, 2) != 0) a.at(i, j) = rng.rational(5, 3);
  return a;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k)
      for (size_t j = 0; j < b.cols(); ++j) {
        Rational add = a.at(i, k) * b.at(k, j);
        c.at(i, j) += add;
      }
  return c;
}

// Independent rank oracle: eliminate twice, on the matrix and its transpose,
// with naive fraction-free forward elimination.
size_t elimination_rank(RationalMatrix a) {
  size_t rank = 0;
  size_t m = a.rows(), n = a.cols();
  for (size_t col = 0; col < n && rank < m; ++col) {
    size_t pivot = m;
    for (size_t i = rank; i < m; ++i)
      if (!is_zero(a.at(i, col))) {
        pivot = i;
        break;
      }
    if (pivot == m) continue;
    for (size_t j = 0; j < n; ++j) std::swap(a.at(rank, j), a.at(pivot, j));
    for (size_t i = rank + 1; i < m; ++i) {
      if (is_zero(a.at(i, col))) continue;
      Rational f = a.at(i, col) / a.at(rank, col);
      for (size_t j = col; j < n; ++j) {
        Rational sub = f * a.at(rank, j);
        a.at(i, j) -= sub;
      }
    }
    ++rank;
  }
  return rank;
}

bool is_rref(const RationalMatrix& r, const std::vector<size_t>& pivots) {
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (r.at(i, pivots[i]) != Rational(1)) return false;
    for (size_t k = 0; k < r.rows(); ++k)
      if (k != i && !is_zero(r.at(k, pivots[i]))) return false;
    for (size_t j = 0; j < pivots[i]; ++j)
      if (!is_zero(r.at(i, j))) return false;
    if (i > 0 && pivots[i] <= pivots[i - 1]) return false;
  }
  for (size_t i = pivots.size(); i < r.rows(); ++i)
    for (size_t j = 0; j < r.cols(); ++j)
      if (!is_zero(r.at(i, j))) return false;
  return true;
}

}  // namespace

TEST_CASE("rref on a fixed matrix") {
  RationalMatrix a = RationalMatrix::from_rows({
      {Rational(1), Rational(2), Rational(3)},
      {Rational(2), Rational(4), Rational(7)},
      {Rational(1), Rational(2), Rational(4)},
  });
  RrefResult r = rref(a);
  CHECK(r.rank == 2);
  CHECK(r.pivot_cols == std::vector<size_t>{0, 2});
  CHECK(multiply(r.transform, a) == r.reduced);

  auto ker = kernel_basis(a);
  REQUIRE(ker.size() == 1);
  // Free column v gets coefficient 1.
  CHECK(ker[0] == std::vector<Rational>{Rational(-2), Rational(1), Rational(0)});
}

TEST_CASE("from_rows rejects ragged input") {
  CHECK_THROWS_AS(RationalMatrix::from_rows({{Rational(1)}, {Rational(1), Rational(2)}}),
                  DimensionMismatch);
}

TEST_CASE("solve_affine consistent and inconsistent cases") {
  RationalMatrix a = RationalMatrix::from_rows({
      {Rational(1), Rational(1)},
      {Rational(2), Rational(2)},
  });
  auto bad = solve_affine(a, {Rational(1), Rational(3)});
  CHECK(!bad.consistent);
  CHECK(bad.particular.empty());

  auto good = solve_affine(a, {Rational(1), Rational(2)});
  REQUIRE(good.consistent);
  CHECK(good.dimension() == 1);
  auto residual = a.apply(good.particular);
  CHECK(residual == std::vector<Rational>{Rational(1), Rational(2)});
}

TEST_CASE("left_nullspace annihilates the matrix") {
  RationalMatrix a = RationalMatrix::from_rows({
      {Rational(1), Rational(0)},
      {Rational(2), Rational(0)},
      {Rational(0), Rational(1)},
  });
  auto rows = left_nullspace(a);
  REQUIRE(rows.size() == 1);
  for (size_t j = 0; j < a.cols(); ++j) {
    Rational s(0);
    for (size_t i = 0; i < a.rows(); ++i) {
      Rational add = rows[0][i] * a.at(i, j);
      s += add;
    }
    CHECK(is_zero(s));
  }
}

TEST_CASE("randomized rank-nullity, transform and solver checks") {
  Rng rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    size_t m = static_cast<size_t>(rng.range(1, 6));
    size_t n = static_cast<size_t>(rng.range(1, 6));
    RationalMatrix a = random_matrix(rng, m, n);

    RrefResult r = rref(a);
    CHECK(is_rref(r.reduced, r.pivot_cols));
    CHECK(multiply(r.transform, a) == r.reduced);
    CHECK(r.rank == elimination_rank(a));
    CHECK(r.rank == elimination_rank(a.transpose()));

    auto ker = kernel_basis(a);
    CHECK(r.rank + ker.size() == n);
    for (const auto& k : ker) {
      auto img = a.apply(k);
      for (const auto& c : img) CHECK(is_zero(c));
    }

    auto lnull = left_nullspace(a);
    CHECK(lnull.size() == m - r.rank);

    // Right-hand side built from a known solution is always consistent.
    std::vector<Rational> x0(n);
    for (auto& c : x0) c = rng.rational(4, 2);
    auto b = a.apply(x0);
    auto sol = solve_affine(a, b);
    REQUIRE(sol.consistent);
    CHECK(sol.dimension() == ker.size());
    CHECK(a.apply(sol.particular) == b);

    // Consistency flag matches the rank test on the augmented matrix.
    std::vector<Rational> b2(m);
    for (auto& c : b2) c = rng.rational(4, 2);
    RationalMatrix aug(m, n + 1);
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
      aug.at(i, n) = b2[i];
    }
    bool expect_consistent = rank(aug) == r.rank;
    CHECK(solve_affine(a, b2).consistent == expect_consistent);
  }
}
