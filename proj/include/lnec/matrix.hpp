#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "lnec/gf.hpp"

namespace lnec {

using Vec = std::vector<uint16_t>;

// Dense matrix over one field, row-major, values in canonical encoding.
class Mat {
 public:
  Mat(Field f, int rows, int cols);
  static Mat identity(const Field& f, int n);
  static Mat from_rows(const Field& f,
                       std::initializer_list<std::initializer_list<int>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Field& field() const { return f_; }

  uint16_t at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
  void set(int r, int c, uint16_t v) { a_[static_cast<size_t>(r) * cols_ + c] = v; }

  std::span<const uint16_t> row(int r) const {
    return {a_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)};
  }
  Vec row_vec(int r) const;
  Vec col_vec(int c) const;
  void set_row(int r, std::span<const uint16_t> v);
  void set_col(int c, std::span<const uint16_t> v);

  Mat mul(const Mat& o) const;
  Mat transpose() const;
  Mat select_rows(std::span<const int> idx) const;
  Mat select_cols(std::span<const int> idx) const;

  // Reduced row echelon form: leftmost-nonzero pivoting, smallest-row-index
  // tie-break. Canonical, so equal row spaces of full matrices reduce to
  // equal forms.
  Mat rref(int* rank_out = nullptr) const;
  int rank() const;

  // Throws std::invalid_argument on non-square or singular input.
  Mat inverse() const;

  bool operator==(const Mat& o) const {
    return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  Field f_;
  int rows_, cols_;
  std::vector<uint16_t> a_;
};

Mat vstack(const Mat& a, const Mat& b);

// Solution set of A x = b (x, b column vectors): either inconsistent or a
// particular solution plus a nullspace basis (rows of `nullspace`).
struct SolveResult {
  bool consistent = false;
  Vec particular;  // length = A.cols()
  std::vector<Vec> nullspace;
};
SolveResult solve(const Mat& a, std::span<const uint16_t> b);

// Incrementally maintained reduced echelon basis of a row span. Rows are
// fully reduced and pivot-normalized, kept sorted by pivot column, so the
// basis is the canonical RREF of the span.
class Eliminator {
 public:
  Eliminator(Field f, int ambient);

  // Reduces v against the basis; if a nonzero residual remains it joins the
  // basis and the call returns true.
  bool add(std::span<const uint16_t> v);
  bool contains(std::span<const uint16_t> v) const;
  int rank() const { return static_cast<int>(rows_.size()); }
  int ambient() const { return ambient_; }
  const Field& field() const { return f_; }
  const std::vector<Vec>& basis() const { return rows_; }

  bool operator==(const Eliminator& o) const {
    return f_ == o.f_ && ambient_ == o.ambient_ && rows_ == o.rows_;
  }

 private:
  Vec reduce(std::span<const uint16_t> v) const;

  Field f_;
  int ambient_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;  // parallel to rows_, strictly increasing
};

// Canonical subspace of row vectors (basis in reduced echelon form).
// Equality of subspaces is equality of bases.
class RowSpace {
 public:
  RowSpace(Field f, int ambient) : e_(std::move(f), ambient) {}
  static RowSpace span(const Mat& rows);
  static RowSpace span(const Field& f, int ambient, const std::vector<Vec>& rows);

  int dim() const { return e_.rank(); }
  int ambient() const { return e_.ambient(); }
  const Field& field() const { return e_.field(); }
  bool contains(std::span<const uint16_t> v) const { return e_.contains(v); }
  bool contains(const RowSpace& o) const;
  const std::vector<Vec>& basis() const { return e_.basis(); }

  bool operator==(const RowSpace& o) const { return e_ == o.e_; }

 private:
  Eliminator e_;
};

// dim(A) + dim(B) > dim(A + B), i.e. the subspaces share a nonzero vector.
bool intersects_nontrivially(const RowSpace& a, const RowSpace& b);

}  // namespace lnec
