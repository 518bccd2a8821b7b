#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "cdec/rational.hpp"

namespace cdec {

/// Sparse vector: entries sorted by index, no explicit zeros.
template <class S>
struct SpVec {
  std::vector<std::pair<int, S>> nz;

  bool empty() const { return nz.empty(); }
  int size() const { return int(nz.size()); }
  void clear() { nz.clear(); }

  S at(int i) const {
    auto it = std::lower_bound(nz.begin(), nz.end(), i,
                               [](const auto& e, int k) { return e.first < k; });
    if (it != nz.end() && it->first == i) return it->second;
    return scalar_traits<S>::zero();
  }

  void set(int i, const S& v) {
    auto it = std::lower_bound(nz.begin(), nz.end(), i,
                               [](const auto& e, int k) { return e.first < k; });
    if (it != nz.end() && it->first == i) {
      if (scalar_traits<S>::is_zero(v))
        nz.erase(it);
      else
        it->second = v;
    } else if (!scalar_traits<S>::is_zero(v)) {
      nz.insert(it, {i, v});
    }
  }

  void add(int i, const S& v) { set(i, at(i) + v); }

  int lowest_index() const { return nz.empty() ? -1 : nz.front().first; }

  void scale(const S& c) {
    if (scalar_traits<S>::is_zero(c)) {
      nz.clear();
      return;
    }
    for (auto& e : nz) e.second *= c;
  }

  /// this += c * w  (merge of sorted entry lists)
  void axpy(const S& c, const SpVec& w) {
    if (scalar_traits<S>::is_zero(c) || w.nz.empty()) return;
    std::vector<std::pair<int, S>> out;
    out.reserve(nz.size() + w.nz.size());
    size_t a = 0, b = 0;
    while (a < nz.size() || b < w.nz.size()) {
      if (b == w.nz.size() || (a < nz.size() && nz[a].first < w.nz[b].first)) {
        out.push_back(nz[a++]);
      } else if (a == nz.size() || w.nz[b].first < nz[a].first) {
        S v = c * w.nz[b].second;
        if (!scalar_traits<S>::is_zero(v)) out.push_back({w.nz[b].first, std::move(v)});
        ++b;
      } else {
        S v = nz[a].second + c * w.nz[b].second;
        if (!scalar_traits<S>::is_zero(v)) out.push_back({nz[a].first, std::move(v)});
        ++a;
        ++b;
      }
    }
    nz = std::move(out);
  }

  S dot(const SpVec& w) const {
    S acc = scalar_traits<S>::zero();
    size_t a = 0, b = 0;
    while (a < nz.size() && b < w.nz.size()) {
      if (nz[a].first < w.nz[b].first)
        ++a;
      else if (w.nz[b].first < nz[a].first)
        ++b;
      else
        acc += nz[a++].second * w.nz[b++].second;
    }
    return acc;
  }

  std::vector<S> dense(int n) const {
    std::vector<S> d(n, scalar_traits<S>::zero());
    for (auto& e : nz) d[e.first] = e.second;
    return d;
  }

  static SpVec from_dense(const std::vector<S>& d) {
    SpVec v;
    for (int i = 0; i < int(d.size()); ++i)
      if (!scalar_traits<S>::is_zero(d[i])) v.nz.push_back({i, d[i]});
    return v;
  }

  static SpVec unit(int i) {
    SpVec v;
    v.nz.push_back({i, scalar_traits<S>::one()});
    return v;
  }

  bool operator==(const SpVec& w) const { return nz == w.nz; }
};

/// Sparse matrix, stored column-major (the engine reduces columns).
template <class S>
struct SpMat {
  int rows = 0;
  std::vector<SpVec<S>> cols;

  SpMat() = default;
  SpMat(int r, int c) : rows(r), cols(c) {}

  int ncols() const { return int(cols.size()); }

  void set(int r, int c, const S& v) { cols[c].set(r, v); }
  void add(int r, int c, const S& v) { cols[c].add(r, v); }
  S at(int r, int c) const { return cols[c].at(r); }

  SpVec<S> apply(const SpVec<S>& x) const {
    SpVec<S> y;
    for (auto& e : x.nz) y.axpy(e.second, cols[e.first]);
    return y;
  }

  std::vector<S> apply_dense(const std::vector<S>& x) const {
    std::vector<S> y(rows, scalar_traits<S>::zero());
    for (int c = 0; c < ncols(); ++c) {
      if (scalar_traits<S>::is_zero(x[c])) continue;
      for (auto& e : cols[c].nz) y[e.first] += e.second * x[c];
    }
    return y;
  }

  SpMat transposed() const {
    SpMat t(ncols(), rows);
    for (int c = 0; c < ncols(); ++c)
      for (auto& e : cols[c].nz) t.cols[e.first].nz.push_back({c, e.second});
    return t;  // entries pushed in increasing c, already sorted per row
  }

  /// this * other
  SpMat mul(const SpMat& other) const {
    SpMat out(rows, other.ncols());
    for (int c = 0; c < other.ncols(); ++c) out.cols[c] = apply(other.cols[c]);
    return out;
  }

  static SpMat identity(int n) {
    SpMat m(n, n);
    for (int i = 0; i < n; ++i) m.cols[i] = SpVec<S>::unit(i);
    return m;
  }

  /// Diagonal scaling on the left: D * this.
  void scale_rows(const std::vector<S>& d) {
    for (auto& col : cols)
      for (auto& e : col.nz) e.second *= d[e.first];
  }

  /// Diagonal scaling on the right: this * D.
  void scale_cols(const std::vector<S>& d) {
    for (int c = 0; c < ncols(); ++c) cols[c].scale(d[c]);
  }
};

}  // namespace cdec
