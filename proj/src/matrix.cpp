#include "lnec/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace lnec {

Mat::Mat(Field f, int rows, int cols)
    : f_(std::move(f)), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  a_.assign(static_cast<size_t>(rows) * cols, 0);
}

Mat Mat::identity(const Field& f, int n) {
  Mat m(f, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Mat Mat::from_rows(const Field& f,
                   std::initializer_list<std::initializer_list<int>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows.begin()->size()) : 0;
  Mat m(f, r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c)
      throw std::invalid_argument("ragged rows");
    int j = 0;
    for (int v : row) m.set(i, j++, static_cast<uint16_t>(v));
    ++i;
  }
  return m;
}

Vec Mat::row_vec(int r) const {
  auto s = row(r);
  return Vec(s.begin(), s.end());
}

Vec Mat::col_vec(int c) const {
  Vec v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

void Mat::set_row(int r, std::span<const uint16_t> v) {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("row size mismatch");
  std::copy(v.begin(), v.end(), a_.begin() + static_cast<size_t>(r) * cols_);
}

void Mat::set_col(int c, std::span<const uint16_t> v) {
  if (static_cast<int>(v.size()) != rows_) throw std::invalid_argument("column size mismatch");
  for (int r = 0; r < rows_; ++r) set(r, c, v[r]);
}

Mat Mat::mul(const Mat& o) const {
  if (f_ != o.f_) throw std::invalid_argument("matrices over different fields");
  if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch in product");
  Mat out(f_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      uint16_t aik = at(i, k);
      if (!aik) continue;
      for (int j = 0; j < o.cols_; ++j) {
        uint16_t prod = f_.mul(aik, o.at(k, j));
        if (prod) out.set(i, j, f_.add(out.at(i, j), prod));
      }
    }
  return out;
}

Mat Mat::transpose() const {
  Mat out(f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
  return out;
}

Mat Mat::select_rows(std::span<const int> idx) const {
  Mat out(f_, static_cast<int>(idx.size()), cols_);
  for (size_t i = 0; i < idx.size(); ++i) out.set_row(static_cast<int>(i), row(idx[i]));
  return out;
}

Mat Mat::select_cols(std::span<const int> idx) const {
  Mat out(f_, rows_, static_cast<int>(idx.size()));
  for (int r = 0; r < rows_; ++r)
    for (size_t j = 0; j < idx.size(); ++j) out.set(r, static_cast<int>(j), at(r, idx[j]));
  return out;
}

Mat Mat::rref(int* rank_out) const {
  Mat m = *this;
  int lead = 0;
  for (int col = 0; col < cols_ && lead < rows_; ++col) {
    int pivot = -1;
    for (int r = lead; r < rows_; ++r)
      if (m.at(r, col)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != lead)
      for (int c = 0; c < cols_; ++c) {
        uint16_t tmp = m.at(pivot, c);
        m.set(pivot, c, m.at(lead, c));
        m.set(lead, c, tmp);
      }
    uint16_t piv_inv = f_.inv(m.at(lead, col));
    for (int c = col; c < cols_; ++c) m.set(lead, c, f_.mul(m.at(lead, c), piv_inv));
    for (int r = 0; r < rows_; ++r) {
      if (r == lead) continue;
      uint16_t factor = m.at(r, col);
      if (!factor) continue;
      for (int c = col; c < cols_; ++c)
        m.set(r, c, f_.sub(m.at(r, c), f_.mul(factor, m.at(lead, c))));
    }
    ++lead;
  }
  if (rank_out) *rank_out = lead;
  return m;
}

int Mat::rank() const {
  int r = 0;
  rref(&r);
  return r;
}

Mat Mat::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  Mat aug(f_, rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.set(i, j, at(i, j));
    aug.set(i, cols_ + i, 1);
  }
  int rank = 0;
  Mat red = aug.rref(&rank);
  for (int i = 0; i < rows_; ++i)
    if (red.at(i, i) != 1) throw std::invalid_argument("matrix is singular");
  Mat out(f_, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(i, j, red.at(i, cols_ + j));
  return out;
}

Mat vstack(const Mat& a, const Mat& b) {
  if (a.field() != b.field()) throw std::invalid_argument("matrices over different fields");
  if (a.cols() != b.cols()) throw std::invalid_argument("column mismatch in vstack");
  Mat out(a.field(), a.rows() + b.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) out.set_row(r, a.row(r));
  for (int r = 0; r < b.rows(); ++r) out.set_row(a.rows() + r, b.row(r));
  return out;
}

SolveResult solve(const Mat& a, std::span<const uint16_t> b) {
  if (static_cast<int>(b.size()) != a.rows())
    throw std::invalid_argument("right-hand side length mismatch");
  const Field& f = a.field();
  Mat aug(f, a.rows(), a.cols() + 1);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) aug.set(r, c, a.at(r, c));
    aug.set(r, a.cols(), b[r]);
  }
  Mat red = aug.rref();

  SolveResult res;
  std::vector<int> pivot_col(a.rows(), -1);
  std::vector<char> is_pivot(a.cols(), 0);
  for (int r = 0; r < a.rows(); ++r) {
    int c = 0;
    while (c < a.cols() + 1 && red.at(r, c) == 0) ++c;
    if (c == a.cols() + 1) continue;  // zero row
    if (c == a.cols()) return res;    // 0 = nonzero: inconsistent
    pivot_col[r] = c;
    is_pivot[c] = 1;
  }
  res.consistent = true;
  res.particular.assign(a.cols(), 0);
  for (int r = 0; r < a.rows(); ++r)
    if (pivot_col[r] >= 0) res.particular[pivot_col[r]] = red.at(r, a.cols());
  for (int c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    Vec n(a.cols(), 0);
    n[c] = 1;
    for (int r = 0; r < a.rows(); ++r)
      if (pivot_col[r] >= 0) n[pivot_col[r]] = f.neg(red.at(r, c));
    res.nullspace.push_back(std::move(n));
  }
  return res;
}

Eliminator::Eliminator(Field f, int ambient)
    : f_(std::move(f)), ambient_(ambient) {}

Vec Eliminator::reduce(std::span<const uint16_t> v) const {
  Vec w(v.begin(), v.end());
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint16_t c = w[pivots_[i]];
    if (!c) continue;
    const Vec& row = rows_[i];
    for (int j = pivots_[i]; j < ambient_; ++j)
      if (row[j]) w[j] = f_.sub(w[j], f_.mul(c, row[j]));
  }
  return w;
}

bool Eliminator::add(std::span<const uint16_t> v) {
  if (static_cast<int>(v.size()) != ambient_)
    throw std::invalid_argument("vector length mismatch");
  Vec w = reduce(v);
  int pivot = -1;
  for (int j = 0; j < ambient_; ++j)
    if (w[j]) {
      pivot = j;
      break;
    }
  if (pivot < 0) return false;
  uint16_t piv_inv = f_.inv(w[pivot]);
  for (int j = pivot; j < ambient_; ++j) w[j] = f_.mul(w[j], piv_inv);
  // keep existing rows reduced against the new one
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint16_t c = rows_[i][pivot];
    if (!c) continue;
    for (int j = pivot; j < ambient_; ++j)
      rows_[i][j] = f_.sub(rows_[i][j], f_.mul(c, w[j]));
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot);
  size_t idx = static_cast<size_t>(pos - pivots_.begin());
  pivots_.insert(pos, pivot);
  rows_.insert(rows_.begin() + idx, std::move(w));
  return true;
}

bool Eliminator::contains(std::span<const uint16_t> v) const {
  if (static_cast<int>(v.size()) != ambient_)
    throw std::invalid_argument("vector length mismatch");
  Vec w = reduce(v);
  for (uint16_t x : w)
    if (x) return false;
  return true;
}

RowSpace RowSpace::span(const Mat& rows) {
  RowSpace s(rows.field(), rows.cols());
  for (int r = 0; r < rows.rows(); ++r) s.e_.add(rows.row(r));
  return s;
}

RowSpace RowSpace::span(const Field& f, int ambient, const std::vector<Vec>& rows) {
  RowSpace s(f, ambient);
  for (const Vec& r : rows) s.e_.add(r);
  return s;
}

bool RowSpace::contains(const RowSpace& o) const {
  for (const Vec& r : o.basis())
    if (!contains(r)) return false;
  return true;
}

bool intersects_nontrivially(const RowSpace& a, const RowSpace& b) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("subspaces of different ambient dimension");
  if (a.dim() == 0 || b.dim() == 0) return false;
  Eliminator e(a.field(), a.ambient());
  for (const Vec& r : a.basis()) e.add(r);
  int joint = a.dim();
  for (const Vec& r : b.basis())
    if (e.add(r)) ++joint;
  return a.dim() + b.dim() > joint;
}

}  // namespace lnec
