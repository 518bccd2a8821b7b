#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cdec/sparse.hpp"

namespace cdec {

/// Column echelon form with deterministic pivoting: a column's pivot is its
/// lowest nonzero row index, and columns are inserted in the order given.
/// Each stored column is normalized to pivot value 1 and optionally carries a
/// "tail" expressing it as a combination of the inserted input columns.
template <class S>
class Echelon {
 public:
  explicit Echelon(bool track_tails = false) : track_(track_tails) {}

  int rank() const { return int(cols_.size()); }
  bool tracks_tails() const { return track_; }

  /// Reduce v in place against the current echelon; if `comb` is non-null it
  /// accumulates the combination of input columns that was subtracted.
  void reduce(SpVec<S>& v, SpVec<S>* comb = nullptr) const {
    while (!v.empty()) {
      int r = v.lowest_index();
      auto it = by_pivot_.find(r);
      if (it == by_pivot_.end()) return;  // r has no pivot: fully reduced here
      const Col& col = cols_[it->second];
      S c = v.nz.front().second;  // pivot entry of col is 1
      v.axpy(-c, col.v);
      if (comb && track_) comb->axpy(c, col.tail);
      // loop continues with a strictly larger lowest index
    }
  }

  /// Insert a column. Returns the assigned pivot row, or -1 if the column
  /// reduced to zero (it was already in the span).  `tail_index` names the
  /// input column for tail tracking.
  int insert(SpVec<S> v, int tail_index) {
    SpVec<S> comb;
    reduce(v, track_ ? &comb : nullptr);
    return insert_prereduced(std::move(v), std::move(comb), tail_index);
  }

  /// Variant for callers that already ran reduce(); `comb` must be the
  /// combination accumulated by that reduction.
  int insert_prereduced(SpVec<S> v, SpVec<S> comb, int tail_index) {
    if (v.empty()) return -1;
    int pivot = v.lowest_index();
    S inv = scalar_traits<S>::one() / v.nz.front().second;
    v.scale(inv);
    Col col;
    col.v = std::move(v);
    if (track_) {
      // normalized column = (input[tail_index] - comb) / pivot_value
      col.tail = SpVec<S>::unit(tail_index);
      col.tail.axpy(-scalar_traits<S>::one(), comb);
      col.tail.scale(inv);
    }
    by_pivot_[pivot] = int(cols_.size());
    cols_.push_back(std::move(col));
    return pivot;
  }

  /// Membership test: returns a combination of inserted input columns
  /// expressing b, or nullopt if b is not in the span.
  std::optional<SpVec<S>> solve(SpVec<S> b) const {
    SpVec<S> comb;
    reduce(b, &comb);
    if (!b.empty()) return std::nullopt;
    return comb;
  }

  bool contains(SpVec<S> b) const {
    reduce(b);
    return b.empty();
  }

 private:
  struct Col {
    SpVec<S> v;
    SpVec<S> tail;
  };
  bool track_;
  std::vector<Col> cols_;
  std::map<int, int> by_pivot_;
};

template <class S>
int rank(const SpMat<S>& a) {
  Echelon<S> e;
  for (int c = 0; c < a.ncols(); ++c) e.insert(a.cols[c], c);
  return e.rank();
}

/// Basis of { x : A x = 0 }, deterministic.
template <class S>
std::vector<SpVec<S>> nullspace(const SpMat<S>& a) {
  Echelon<S> e(true);
  std::vector<SpVec<S>> basis;
  for (int c = 0; c < a.ncols(); ++c) {
    SpVec<S> v = a.cols[c];
    SpVec<S> comb;
    e.reduce(v, &comb);
    if (v.empty()) {
      // column c = combination of earlier independent columns
      SpVec<S> x = SpVec<S>::unit(c);
      x.axpy(-scalar_traits<S>::one(), comb);
      basis.push_back(std::move(x));
    } else {
      e.insert_prereduced(std::move(v), std::move(comb), c);
    }
  }
  return basis;
}

/// Exact determinant by dense elimination; intended for the small matrices
/// that show up in pairing and evaluation certificates.
template <class S>
S determinant(const SpMat<S>& a) {
  if (a.rows != a.ncols()) throw error("determinant: matrix not square");
  int n = a.rows;
  std::vector<std::vector<S>> m(n, std::vector<S>(n, scalar_traits<S>::zero()));
  for (int c = 0; c < n; ++c)
    for (auto& e : a.cols[c].nz) m[e.first][c] = e.second;
  S det = scalar_traits<S>::one();
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int r = k; r < n; ++r)
      if (!scalar_traits<S>::is_zero(m[r][k])) {
        piv = r;
        break;
      }
    if (piv < 0) return scalar_traits<S>::zero();
    if (piv != k) {
      std::swap(m[piv], m[k]);
      det = -det;
    }
    det *= m[k][k];
    S inv = scalar_traits<S>::one() / m[k][k];
    for (int r = k + 1; r < n; ++r) {
      if (scalar_traits<S>::is_zero(m[r][k])) continue;
      S f = m[r][k] * inv;
      for (int c = k; c < n; ++c) m[r][c] -= f * m[k][c];
    }
  }
  return det;
}

}  // namespace cdec
