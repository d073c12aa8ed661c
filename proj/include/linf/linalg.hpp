// Exact dense linear algebra over the rationals: reduced row echelon form with
// deterministic lexicographic pivoting, kernels, images, and linear solves.
// Everything is a free function on Eigen types so callers can pass expressions.
#pragma once

#include <linf/rational.hpp>

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace linf {

using Mat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

inline Mat mat_zero(Eigen::Index r, Eigen::Index c) { return Mat::Zero(r, c); }
inline Mat mat_identity(Eigen::Index n) {
  Mat m = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

// In-place RREF. Pivots are chosen scanning columns left to right and, within a
// column, the first nonzero row; this makes every derived basis reproducible.
// Returns the pivot column indices in order.
inline std::vector<Eigen::Index> rref_in_place(Mat& m) {
  std::vector<Eigen::Index> pivots;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < rows; ++i)
      if (m(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    const Rational inv = 1 / m(r, c);
    for (Eigen::Index j = c; j < cols; ++j) m(r, j) = m(r, j) * inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (Eigen::Index j = c; j < cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <typename Derived>
Eigen::Index rank(const Eigen::MatrixBase<Derived>& a) {
  Mat m = a;
  return static_cast<Eigen::Index>(rref_in_place(m).size());
}

// Basis of ker(a) as matrix columns, in the canonical RREF parametrization
// (one column per free variable, free variables in increasing order).
template <typename Derived>
Mat kernel_basis(const Eigen::MatrixBase<Derived>& a) {
  Mat m = a;
  const auto pivots = rref_in_place(m);
  const Eigen::Index cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat k = Mat::Zero(cols, static_cast<Eigen::Index>(free_cols.size()));
  for (size_t j = 0; j < free_cols.size(); ++j) {
    k(free_cols[j], static_cast<Eigen::Index>(j)) = 1;
    for (size_t i = 0; i < pivots.size(); ++i)
      k(pivots[i], static_cast<Eigen::Index>(j)) = -m(static_cast<Eigen::Index>(i), free_cols[j]);
  }
  return k;
}

// Basis of the column space: the original columns at the lexicographically
// first independent positions.
template <typename Derived>
Mat image_basis(const Eigen::MatrixBase<Derived>& a) {
  Mat m = a;
  const auto pivots = rref_in_place(m);
  Mat img(a.rows(), static_cast<Eigen::Index>(pivots.size()));
  for (size_t j = 0; j < pivots.size(); ++j) img.col(static_cast<Eigen::Index>(j)) = a.col(pivots[j]);
  return img;
}

// One solution of a x = b, or nullopt when inconsistent. Free variables are 0.
template <typename DA, typename DB>
std::optional<Mat> solve_consistent(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Mat aug(a.rows(), a.cols() + b.cols());
  aug.leftCols(a.cols()) = a;
  aug.rightCols(b.cols()) = b;
  const auto pivots = rref_in_place(aug);
  for (auto c : pivots)
    if (c >= a.cols()) return std::nullopt;
  Mat x = Mat::Zero(a.cols(), b.cols());
  for (size_t i = 0; i < pivots.size(); ++i)
    x.row(pivots[i]) = aug.block(static_cast<Eigen::Index>(i), a.cols(), 1, b.cols());
  return x;
}

// Canonical representative of v modulo the column space of a: eliminate the
// columns in order with lexicographic pivot rows. Zero iff v is in the span.
template <typename Derived>
Vec reduce_against_columns(const Eigen::MatrixBase<Derived>& a, Vec v) {
  std::vector<std::pair<Eigen::Index, Vec>> pivots;  // (pivot row, reduced column)
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Vec c = a.col(j);
    for (const auto& [pr, pc] : pivots)
      if (c(pr) != 0) c -= pc * (c(pr) / pc(pr));
    Eigen::Index lead = -1;
    for (Eigen::Index i = 0; i < c.size(); ++i)
      if (c(i) != 0) { lead = i; break; }
    if (lead >= 0) pivots.emplace_back(lead, std::move(c));
  }
  for (const auto& [pr, pc] : pivots)
    if (v(pr) != 0) v -= pc * (v(pr) / pc(pr));
  return v;
}

// Columns of `cand` that extend the span of `base` to a larger space, taken in
// order; base columns are assumed independent.
inline Mat extend_basis(const Mat& base, const Mat& cand) {
  Mat work(base.rows(), base.cols() + cand.cols());
  if (base.cols() > 0) work.leftCols(base.cols()) = base;
  work.rightCols(cand.cols()) = cand;
  Mat m = work;
  const auto pivots = rref_in_place(m);
  std::vector<Eigen::Index> chosen;
  for (auto c : pivots)
    if (c >= base.cols()) chosen.push_back(c - base.cols());
  Mat out(base.rows(), static_cast<Eigen::Index>(chosen.size()));
  for (size_t j = 0; j < chosen.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cand.col(chosen[j]);
  return out;
}

// Coordinates of the columns of v in the column basis `basis` (must lie in the
// span; throws otherwise).
inline Mat coordinates_in(const Mat& basis, const Mat& v) {
  auto x = solve_consistent(basis, v);
  if (!x) throw std::logic_error("coordinates_in: vector outside span");
  return *x;
}

}  // namespace linf
