#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdec/cochain.hpp"
#include "cdec/linalg.hpp"

namespace cdec {

namespace detail {

template <class X>
std::vector<int> allowed_cells(const X& x, int k, Support s) {
  std::vector<int> ids;
  for (int id = 0; id < x.n_cells(k); ++id)
    if (x.allowed(k, id, s)) ids.push_back(id);
  return ids;
}

/// Coboundary d_k with columns restricted to the allowed k-cells (rows stay
/// ambient; d preserves every support class, so no row restriction needed).
template <class S, class X>
SpMat<S> coboundary_on(const X& x, int k, Support s, const std::vector<int>& cols) {
  SpMat<S> d(x.n_cells(k + 1), int(cols.size()));
  if (k < 0 || k >= x.dimension()) return d;
  std::vector<int> col_of(x.n_cells(k), -1);
  for (int c = 0; c < int(cols.size()); ++c) col_of[cols[c]] = c;
  for (const auto& t : x.cob_triples(k)) {
    int c = col_of[t.col];
    if (c >= 0) d.cols[c].nz.push_back({t.row, scalar_traits<S>::from_int(t.sign)});
  }
  for (auto& col : d.cols)
    std::sort(col.nz.begin(), col.nz.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  (void)s;
  return d;
}

template <class S>
SpVec<S> expand_indices(const SpVec<S>& packed, const std::vector<int>& ids) {
  SpVec<S> out;
  out.nz.reserve(packed.nz.size());
  for (auto& e : packed.nz) out.nz.push_back({ids[e.first], e.second});
  std::sort(out.nz.begin(), out.nz.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace detail

/// Basis of a finite-dimensional quotient ker / im with explicit cocycle
/// representatives and an exact coordinate functional.
template <class S>
class QuotientBasis {
 public:
  int degree = 0;
  Support support = Support::Free;
  std::vector<SpVec<S>> reps;  // ambient cell coordinates

  int dim() const { return int(reps.size()); }

  /// Class coordinates of a cocycle; throws if z is not in the cocycle span.
  std::vector<S> coordinates(const SpVec<S>& z) const {
    auto c = try_coordinates(z);
    if (!c) throw error("coordinates: vector is not a cocycle of this quotient");
    return *c;
  }

  std::optional<std::vector<S>> try_coordinates(const SpVec<S>& z) const {
    auto comb = ech_.solve(z);
    if (!comb) return std::nullopt;
    std::vector<S> out(reps.size(), scalar_traits<S>::zero());
    for (auto& e : comb->nz)
      if (e.first >= n_image_) out[e.first - n_image_] = e.second;
    return out;
  }

  bool is_class_zero(const SpVec<S>& z) const {
    auto c = try_coordinates(z);
    if (!c) return false;
    for (auto& v : *c)
      if (!scalar_traits<S>::is_zero(v)) return false;
    return true;
  }

  /// Build from image generators and kernel candidates (deterministic order).
  static QuotientBasis build(int degree, Support support,
                             const std::vector<SpVec<S>>& image_gens,
                             const std::vector<SpVec<S>>& kernel_basis) {
    QuotientBasis q;
    q.degree = degree;
    q.support = support;
    int idx = 0;
    for (const auto& g : image_gens) q.ech_.insert(g, idx++);
    q.n_image_ = idx;
    for (const auto& z : kernel_basis) {
      // a candidate that reduces to zero is a dependent class; it gets no
      // tail index, keeping representative indices contiguous
      int tail = q.n_image_ + int(q.reps.size());
      if (q.ech_.insert(z, tail) >= 0) q.reps.push_back(z);
    }
    return q;
  }

 private:
  Echelon<S> ech_{true};
  int n_image_ = 0;
};

/// Basis of H^k with the given support class: ker(d_k) over allowed cells
/// modulo d of allowed (k-1)-cochains, by exact elimination with
/// deterministic lowest-cell-id pivoting.
template <class S, class X>
QuotientBasis<S> cohomology_basis(const X& x, int k, Support s) {
  if (k < 0 || k > x.dimension()) throw error("cohomology_basis: bad degree");
  auto cols_k = detail::allowed_cells(x, k, s);
  SpMat<S> dk = detail::coboundary_on<S>(x, k, s, cols_k);
  auto kernel_packed = nullspace(dk);
  std::vector<SpVec<S>> kernel;
  kernel.reserve(kernel_packed.size());
  for (auto& z : kernel_packed) kernel.push_back(detail::expand_indices(z, cols_k));

  std::vector<SpVec<S>> image;
  if (k >= 1) {
    auto cols_lo = detail::allowed_cells(x, k - 1, s);
    SpMat<S> dlo = detail::coboundary_on<S>(x, k - 1, s, cols_lo);
    for (auto& col : dlo.cols)
      if (!col.empty()) image.push_back(col);
  }
  return QuotientBasis<S>::build(k, s, image, kernel);
}

template <class S, class X>
int betti_number(const X& x, int k, Support s) {
  auto cols_k = detail::allowed_cells(x, k, s);
  int rk = rank(detail::coboundary_on<S>(x, k, s, cols_k));
  int rlo = 0;
  if (k >= 1) {
    auto cols_lo = detail::allowed_cells(x, k - 1, s);
    rlo = rank(detail::coboundary_on<S>(x, k - 1, s, cols_lo));
  }
  return int(cols_k.size()) - rk - rlo;
}

/// Cohomology dimensions in every degree.
template <class S, class X>
std::vector<int> betti_profile(const X& x, Support s) {
  std::vector<int> out;
  std::vector<int> ranks(x.dimension() + 2, 0);
  std::vector<int> ncols(x.dimension() + 1, 0);
  for (int k = 0; k <= x.dimension(); ++k) {
    auto cols = detail::allowed_cells(x, k, s);
    ncols[k] = int(cols.size());
    ranks[k + 1] = k < x.dimension() ? rank(detail::coboundary_on<S>(x, k, s, cols)) : 0;
  }
  for (int k = 0; k <= x.dimension(); ++k)
    out.push_back(ncols[k] - ranks[k + 1] - ranks[k]);
  return out;
}

/// A linear map given degree-wise on ambient cochain vectors.
template <class S>
using DegreeMap = std::function<SpVec<S>(int degree, const SpVec<S>&)>;

template <class S>
struct InducedMapResult {
  SpMat<S> matrix;
  bool chain_map_ok = true;
  std::string failure;
  SpVec<S> witness;
};

/// Matrix of the map induced on cohomology by L, in the given bases.  The
/// chain-map property L d = d L is verified on every allowed lower cell of
/// the source (not assumed), and every representative image is checked to be
/// an allowed cocycle of the destination class.
template <class S, class SrcX, class DstX>
InducedMapResult<S> induced_map(const SrcX& src_x, const DstX& dst_x,
                                const DegreeMap<S>& L, const QuotientBasis<S>& src,
                                const QuotientBasis<S>& dst) {
  InducedMapResult<S> res;
  int k = src.degree;
  int shift = dst.degree - src.degree;  // 0 for pi*/s*, +1 for e, -1 for i
  SpMat<S> d_src = src_x.template coboundary_matrix<S>(k - 1);
  SpMat<S> d_dst_low = dst_x.template coboundary_matrix<S>(k - 1 + shift);
  SpMat<S> d_dst_top = dst_x.template coboundary_matrix<S>(dst.degree);

  if (k >= 1) {
    for (int id : detail::allowed_cells(src_x, k - 1, src.support)) {
      SpVec<S> g = SpVec<S>::unit(id);
      SpVec<S> lhs = L(k, d_src.apply(g));
      SpVec<S> low = L(k - 1, g);
      SpVec<S> rhs = low.empty() ? SpVec<S>() : d_dst_low.apply(low);
      lhs.axpy(-scalar_traits<S>::one(), rhs);
      if (!lhs.empty()) {
        res.chain_map_ok = false;
        res.failure = "chain map identity fails on a lower basis cell";
        res.witness = g;
        return res;
      }
    }
  }

  res.matrix = SpMat<S>(dst.dim(), src.dim());
  for (int j = 0; j < src.dim(); ++j) {
    SpVec<S> img = L(k, src.reps[j]);
    for (auto& e : img.nz)
      if (!dst_x.allowed(dst.degree, e.first, dst.support)) {
        res.chain_map_ok = false;
        res.failure = "image leaves the destination support class";
        res.witness = src.reps[j];
        return res;
      }
    if (dst.degree < dst_x.dimension()) {
      SpVec<S> dimg = d_dst_top.apply(img);
      if (!dimg.empty()) {
        res.chain_map_ok = false;
        res.failure = "image of a representative is not closed";
        res.witness = src.reps[j];
        return res;
      }
    }
    auto coords = dst.try_coordinates(img);
    if (!coords) {
      res.chain_map_ok = false;
      res.failure = "image is not a destination cocycle class";
      res.witness = src.reps[j];
      return res;
    }
    for (int i = 0; i < dst.dim(); ++i) res.matrix.set(i, j, (*coords)[i]);
  }
  return res;
}

/// dim ker A - rank B after verifying im B inside ker A; throws with the
/// offending column index otherwise.
template <class S>
int quotient_dims(const SpMat<S>& a, const SpMat<S>& b) {
  for (int c = 0; c < b.ncols(); ++c) {
    SpVec<S> img = a.apply(b.cols[c]);
    if (!img.empty())
      throw error("quotient_dims: image column " + std::to_string(c) +
                  " is not in the kernel");
  }
  int nullity = a.ncols() - rank(a);
  return nullity - rank(b);
}

}  // namespace cdec
