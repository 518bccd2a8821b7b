#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cdec/complex.hpp"

namespace cdec {

/// Discrete time axis: vertices 0..n-1, edge j runs from slice j to j+1 and
/// increasing slice index is the future direction.
struct TimeAxis {
  int n_slices = 0;
  int collar_width = 1;
  int base_slice = 0;

  TimeAxis() = default;
  TimeAxis(int n, int collar, int base)
      : n_slices(n), collar_width(collar), base_slice(base) {
    if (n_slices < 3) throw error("time axis needs at least 3 slices");
    if (collar_width < 1) throw error("collar width must be >= 1");
    if (2 * collar_width >= n_slices) throw error("collars overlap: 2*collar >= slices");
    if (base_slice < collar_width || base_slice >= n_slices - collar_width)
      throw error("base slice must lie outside both collars");
  }

  int n_edges() const { return n_slices - 1; }
  bool vertex_in_collar(int i) const {
    return i < collar_width || i >= n_slices - collar_width;
  }
  // collar edges have both endpoints inside one collar (subcomplex property)
  bool edge_in_collar(int j) const {
    return j + 1 < collar_width || j >= n_slices - collar_width;
  }
};

/// Tensor product of a time axis and a Cauchy-surface complex.  A degree-k
/// product cell is either type-1 (time vertex x sigma k-cell) or type-2
/// (time edge x sigma (k-1)-cell).  Incidence follows the Koszul rule with
/// the time factor written first:  d(t ox s) = dt ox s + (-1)^|t| t ox ds.
class ProductComplex {
 public:
  ProductComplex(TimeAxis time, CellComplex sigma)
      : time_(time), sigma_(std::move(sigma)) {
    build_caches();
  }

  int dimension() const { return sigma_.dimension() + 1; }
  const TimeAxis& time() const { return time_; }
  const CellComplex& sigma() const { return sigma_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  int n1(int k) const {
    if (k < 0 || k > sigma_.dimension()) return 0;
    return time_.n_slices * sigma_.n_cells(k);
  }
  int n2(int k) const {
    if (k < 1 || k - 1 > sigma_.dimension()) return 0;
    return time_.n_edges() * sigma_.n_cells(k - 1);
  }
  int n_cells(int k) const {
    if (k < 0 || k > dimension()) return 0;
    return n1(k) + n2(k);
  }
  int total_cells() const {
    int t = 0;
    for (int k = 0; k <= dimension(); ++k) t += n_cells(k);
    return t;
  }

  int id1(int k, int slice, int sig) const { return slice * sigma_.n_cells(k) + sig; }
  int id2(int k, int edge, int sig) const {
    return n1(k) + edge * sigma_.n_cells(k - 1) + sig;
  }

  struct CellRef {
    int type;   // 1 or 2
    int t;      // slice (type-1) or edge (type-2)
    int sig;    // sigma cell id, degree k or k-1
  };
  CellRef decode(int k, int id) const {
    if (id < n1(k)) {
      int ns = sigma_.n_cells(k);
      return {1, id / ns, id % ns};
    }
    int off = id - n1(k);
    int ns = sigma_.n_cells(k - 1);
    return {2, off / ns, off % ns};
  }

  bool allowed(int k, int id, Support s) const {
    if (s == Support::Free) return true;
    CellRef c = decode(k, id);
    bool tc_ok = true, sc_ok = true;
    if (c.type == 1) {
      tc_ok = !time_.vertex_in_collar(c.t);
      sc_ok = !sigma_.in_end_collar(k, c.sig);
    } else {
      tc_ok = !time_.edge_in_collar(c.t);
      sc_ok = !sigma_.in_end_collar(k - 1, c.sig);
    }
    switch (s) {
      case Support::TC: return tc_ok;
      case Support::SC: return sc_ok;
      default: return tc_ok && sc_ok;
    }
  }

  const std::vector<IncTriple>& cob_triples(int k) const { return cob_[k]; }

  template <class S>
  SpMat<S> coboundary_matrix(int k) const {
    SpMat<S> d(n_cells(k + 1), n_cells(k));
    if (k < 0 || k >= dimension()) return d;
    for (const auto& t : cob_[k])
      d.add(t.row, t.col, scalar_traits<S>::from_int(t.sign));
    return d;
  }

  /// Signed coefficient of the fundamental class on a top product cell:
  /// the product orientation is time ^ sigma, every time edge positively
  /// oriented toward the future.
  int fundamental_sign(int top_id) const {
    CellRef c = decode(dimension(), top_id);
    return sigma_.fundamental_sign(c.sig);
  }

  /// Cells carrying the boundary of the fundamental class; a coboundary
  /// integrates to zero exactly when its argument vanishes here.
  bool on_stokes_boundary(int k, int id) const {
    if (k != dimension() - 1) return false;
    return stokes_boundary_[id] != 0;
  }

 private:
  void build_caches() {
    name_ = "time(" + std::to_string(time_.n_slices) + "," +
            std::to_string(time_.collar_width) + ")x" + sigma_.name();
    int m = dimension();
    cob_.resize(m + 1);
    int N = time_.n_slices;
    for (int k = 0; k < m; ++k) {
      auto& out = cob_[k];
      // type-1 -> type-1 : spatial coboundary slice by slice
      for (int tau = 0; tau < sigma_.n_cells(k + 1); ++tau) {
        const Cell& cell = sigma_.cell(k + 1, tau);
        for (int i = 0; i < int(cell.faces.size()); ++i)
          for (int s = 0; s < N; ++s)
            out.push_back({id1(k + 1, s, tau), id1(k, s, cell.faces[i]),
                           (i % 2 == 0) ? 1 : -1});
      }
      // type-1 -> type-2 : time difference x_{j+1} - x_j
      for (int sig = 0; sig < sigma_.n_cells(k); ++sig)
        for (int j = 0; j + 1 < N; ++j) {
          out.push_back({id2(k + 1, j, sig), id1(k, j + 1, sig), 1});
          out.push_back({id2(k + 1, j, sig), id1(k, j, sig), -1});
        }
      // type-2 -> type-2 : -(spatial coboundary), Koszul sign past dt
      if (k >= 1) {
        for (int tau = 0; tau < sigma_.n_cells(k); ++tau) {
          const Cell& cell = sigma_.cell(k, tau);
          for (int i = 0; i < int(cell.faces.size()); ++i)
            for (int j = 0; j + 1 < N; ++j)
              out.push_back({id2(k + 1, j, tau), id2(k, j, cell.faces[i]),
                             (i % 2 == 0) ? -1 : 1});
        }
      }
    }
    // boundary of the fundamental chain, for the discrete Stokes statement
    int md = m - 1;
    stokes_boundary_.assign(n_cells(md), 0);
    SpMat<Rational> d = coboundary_matrix<Rational>(md);
    SpVec<Rational> fc;
    for (int t = 0; t < n_cells(m); ++t)
      fc.set(t, scalar_traits<Rational>::from_int(fundamental_sign(t)));
    // boundary = d^T applied to the fundamental chain
    for (int c = 0; c < d.ncols(); ++c) {
      Rational v = d.cols[c].dot(fc);
      if (sgn(v) != 0) stokes_boundary_[c] = 1;
    }
  }

  TimeAxis time_;
  CellComplex sigma_;
  std::string name_;
  std::vector<std::vector<IncTriple>> cob_;
  std::vector<char> stokes_boundary_;
};

}  // namespace cdec
