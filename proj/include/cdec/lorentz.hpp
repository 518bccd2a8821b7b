#pragma once

#include <string>
#include <vector>

#include "cdec/cochain.hpp"
#include "cdec/linalg.hpp"

namespace cdec {

/// Ultrastatic Lorentzian structure on a product spacetime: positive rational
/// dual-volume weights on the surface, time step dt, and the induced diagonal
/// mass form.  The signature sign is -1 exactly on type-2 cells (one time
/// edge factor).
template <class S>
class Metric {
 public:
  enum class WeightScheme { Unit, Perturbed };

  Metric(const ProductComplex& M, S dt, WeightScheme ws = WeightScheme::Unit)
      : m_(&M), dt_(dt) {
    if (scalar_traits<S>::is_zero(dt) || sgn_positive(dt) <= 0)
      throw error("metric: dt must be a positive rational");
    const CellComplex& x = M.sigma();
    weights_.resize(x.dimension() + 1);
    for (int k = 0; k <= x.dimension(); ++k) {
      weights_[k].resize(x.n_cells(k));
      for (int id = 0; id < x.n_cells(k); ++id)
        weights_[k][id] = ws == WeightScheme::Unit
                              ? scalar_traits<S>::one()
                              : scalar_traits<S>::one() +
                                    scalar_traits<S>::from_fraction(
                                        (7 * id + 3 * k) % 5, 7);
    }
    build();
  }

  const ProductComplex& spacetime() const { return *m_; }
  const S& dt() const { return dt_; }
  const S& dt2() const { return dt2_; }
  const std::vector<S>& surface_weights(int k) const { return weights_[k]; }

  /// Diagonal of the mass form M_k on product k-cochains.
  const std::vector<S>& mass(int k) const { return mass_[k]; }

  /// Codifferential matrix delta_k : C^k -> C^{k-1}, the mass adjoint of d.
  const SpMat<S>& delta(int k) const { return delta_[k]; }

  /// Laplace-de Rham operator as a total matrix (rows near the window ends
  /// carry truncated stencils and are not asserted against).
  const SpMat<S>& box(int k) const { return box_[k]; }

  /// Weighted Hodge Laplacian on surface k-cochains.
  const SpMat<S>& sigma_laplacian(int k) const { return sigma_lap_[k]; }

  S m_pairing(const SpVec<S>& a, const SpVec<S>& b, int k) const {
    S acc = scalar_traits<S>::zero();
    size_t i = 0, j = 0;
    while (i < a.nz.size() && j < b.nz.size()) {
      if (a.nz[i].first < b.nz[j].first)
        ++i;
      else if (b.nz[j].first < a.nz[i].first)
        ++j;
      else {
        acc += a.nz[i].second * b.nz[j].second * mass_[k][a.nz[i].first];
        ++i;
        ++j;
      }
    }
    return acc;
  }

  S m_pairing(const Cochain<S>& a, const Cochain<S>& b) const {
    if (a.degree != b.degree) throw error("m_pairing: degree mismatch");
    return m_pairing(a.v, b.v, a.degree);
  }

  /// Rows of the box operator whose stencil fits inside the time window.
  bool box_row_honest(int k, int id) const {
    auto c = m_->decode(k, id);
    int N = m_->time().n_slices;
    if (c.type == 1) return c.t >= 1 && c.t <= N - 2;
    return c.t >= 1 && c.t <= N - 3;
  }

  /// Rows of the codifferential delta_k whose stencil fits inside the time
  /// window; row ids index (k-1)-cells.
  bool delta_row_honest(int k, int id) const {
    auto c = m_->decode(k - 1, id);
    int N = m_->time().n_slices;
    if (c.type == 1) return c.t >= 1 && c.t <= N - 2;
    return true;
  }

 private:
  static int sgn_positive(const S& v) {
    if constexpr (scalar_traits<S>::exact) {
      return sgn(v);
    } else {
      return v > 0 ? 1 : -1;
    }
  }

  void build() {
    const ProductComplex& M = *m_;
    const CellComplex& x = M.sigma();
    int m = M.dimension();
    dt2_ = dt_ * dt_;

    mass_.resize(m + 1);
    for (int k = 0; k <= m; ++k) {
      mass_[k].assign(M.n_cells(k), scalar_traits<S>::zero());
      for (int id = 0; id < M.n_cells(k); ++id) {
        auto c = M.decode(k, id);
        if (c.type == 1)
          mass_[k][id] = dt_ * weights_[k][c.sig];
        else
          mass_[k][id] = -(scalar_traits<S>::one() / dt_) * weights_[k - 1][c.sig];
      }
    }

    // surface codifferential and Hodge Laplacian per degree
    int n = x.dimension();
    std::vector<SpMat<S>> sigma_delta(n + 1);
    for (int k = 1; k <= n; ++k) {
      SpMat<S> dt_mat = x.coboundary_matrix<S>(k - 1).transposed();
      dt_mat.scale_cols(weights_[k]);
      std::vector<S> inv(weights_[k - 1].size());
      for (size_t i = 0; i < inv.size(); ++i)
        inv[i] = scalar_traits<S>::one() / weights_[k - 1][i];
      dt_mat.scale_rows(inv);
      sigma_delta[k] = std::move(dt_mat);
    }
    sigma_lap_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      SpMat<S> lap(x.n_cells(k), x.n_cells(k));
      if (k < n) lap = sigma_delta[k + 1].mul(x.coboundary_matrix<S>(k));
      if (k > 0) {
        SpMat<S> dd = x.coboundary_matrix<S>(k - 1).mul(sigma_delta[k]);
        for (int c = 0; c < dd.ncols(); ++c)
          lap.cols[c].axpy(scalar_traits<S>::one(), dd.cols[c]);
      }
      sigma_lap_[k] = std::move(lap);
    }

    delta_.resize(m + 1);
    for (int k = 1; k <= m; ++k) {
      SpMat<S> dtp = M.coboundary_matrix<S>(k - 1).transposed();
      dtp.scale_cols(mass_[k]);
      std::vector<S> inv(mass_[k - 1].size());
      for (size_t i = 0; i < inv.size(); ++i)
        inv[i] = scalar_traits<S>::one() / mass_[k - 1][i];
      dtp.scale_rows(inv);
      delta_[k] = std::move(dtp);
    }

    box_.resize(m + 1);
    for (int k = 0; k <= m; ++k) {
      SpMat<S> b(M.n_cells(k), M.n_cells(k));
      if (k < m) b = delta_[k + 1].mul(M.coboundary_matrix<S>(k));
      if (k > 0) {
        SpMat<S> dd = M.coboundary_matrix<S>(k - 1).mul(delta_[k]);
        for (int c = 0; c < dd.ncols(); ++c)
          b.cols[c].axpy(scalar_traits<S>::one(), dd.cols[c]);
      }
      box_[k] = std::move(b);
    }
  }

  const ProductComplex* m_;
  S dt_, dt2_;
  std::vector<std::vector<S>> weights_;
  std::vector<std::vector<S>> mass_;
  std::vector<SpMat<S>> delta_;
  std::vector<SpMat<S>> box_;
  std::vector<SpMat<S>> sigma_lap_;
};

template <class S>
Cochain<S> codifferential(const Metric<S>& g, const Cochain<S>& c) {
  if (!c.on_product() || c.prod != &g.spacetime())
    throw error("codifferential: cochain does not live on the metric's spacetime");
  if (c.degree < 1) throw error("codifferential: degree zero input");
  Cochain<S> out = Cochain<S>::zero(g.spacetime(), c.degree - 1, Support::Free);
  out.v = g.delta(c.degree).apply(c.v);
  return out;
}

template <class S>
Cochain<S> box_op(const Metric<S>& g, const Cochain<S>& c) {
  if (!c.on_product() || c.prod != &g.spacetime())
    throw error("box: cochain does not live on the metric's spacetime");
  Cochain<S> out = Cochain<S>::zero(g.spacetime(), c.degree, Support::Free);
  out.v = g.box(c.degree).apply(c.v);
  return out;
}

/// Exact retarded/advanced solver for the discrete wave operator in one
/// degree.  On an ultrastatic product the box operator decouples into
/// independent leapfrog recurrences for the type-1 and type-2 components,
/// so the block solves are explicit forward/backward substitutions with the
/// leading diagonal block (1/dt^2) Id.
template <class S>
class GreenSolver {
 public:
  GreenSolver(const Metric<S>& g, int degree) : g_(&g), k_(degree) {
    const ProductComplex& M = g.spacetime();
    if (k_ < 0 || k_ > M.dimension()) throw error("green solver: bad degree");
    if (scalar_traits<S>::is_zero(g.dt2()))
      throw error("green solver: leading diagonal block is singular");
  }

  int degree() const { return k_; }
  int cone_radius_per_step() const { return 1; }

  /// Forward solve with zero data before the window; exact inverse of box on
  /// rows [0, N-2] (type-1) and [0, N-3] (type-2).
  Cochain<S> retarded(const Cochain<S>& f, bool check_support = true) const {
    if (check_support) require_collar_clean(f, true);
    return sweep(f, true);
  }

  /// Backward solve with zero data after the window.
  Cochain<S> advanced(const Cochain<S>& f, bool check_support = true) const {
    if (check_support) require_collar_clean(f, false);
    return sweep(f, false);
  }

  /// Causal propagator G = G_+ - G_- on timelike compact sources.
  Cochain<S> causal(const Cochain<S>& f, bool check_support = true) const {
    if (check_support && !is_supported(f, Support::TC))
      throw error("causal propagator: source is not timelike compact");
    Cochain<S> r = sweep(f, true);
    r.v.axpy(-scalar_traits<S>::one(), sweep(f, false).v);
    return r;
  }

 private:
  void require_collar_clean(const Cochain<S>& f, bool past) const {
    const ProductComplex& M = g_->spacetime();
    const TimeAxis& t = M.time();
    for (auto& e : f.v.nz) {
      auto c = M.decode(k_, e.first);
      bool bad = c.type == 1 ? (past ? c.t < t.collar_width
                                     : c.t >= t.n_slices - t.collar_width)
                             : (past ? c.t + 1 < t.collar_width
                                     : c.t >= t.n_slices - t.collar_width);
      if (bad)
        throw error(past ? "retarded solve: source meets the past collar"
                         : "advanced solve: source meets the future collar");
    }
  }

  Cochain<S> sweep(const Cochain<S>& f, bool forward) const {
    const ProductComplex& M = g_->spacetime();
    const CellComplex& x = M.sigma();
    int N = M.time().n_slices;
    int nx = x.n_cells(k_);
    int ny = k_ >= 1 ? x.n_cells(k_ - 1) : 0;
    const S& dt2 = g_->dt2();
    const SpMat<S>& lap_x = g_->sigma_laplacian(std::min(k_, x.dimension()));
    const SpMat<S>* lap_y = k_ >= 1 ? &g_->sigma_laplacian(k_ - 1) : nullptr;

    std::vector<S> fz;
    std::vector<std::vector<S>> x1(N, std::vector<S>(nx, scalar_traits<S>::zero()));
    std::vector<std::vector<S>> y2(
        std::max(N - 1, 0), std::vector<S>(ny, scalar_traits<S>::zero()));

    // dense slices of the source
    std::vector<std::vector<S>> f1(N, std::vector<S>(nx, scalar_traits<S>::zero()));
    std::vector<std::vector<S>> f2(N - 1, std::vector<S>(ny, scalar_traits<S>::zero()));
    for (auto& e : f.v.nz) {
      auto c = M.decode(k_, e.first);
      if (c.type == 1)
        f1[c.t][c.sig] = e.second;
      else
        f2[c.t][c.sig] = e.second;
    }

    auto step = [&](std::vector<std::vector<S>>& u,
                    const std::vector<std::vector<S>>& src, const SpMat<S>& lap,
                    int n_slots, int dim) {
      if (dim == 0 || n_slots <= 1) return;
      if (forward) {
        // u[0] = 0; row i determines u[i+1]; row 0 carries a truncated stencil
        for (int i = 0; i + 1 < n_slots; ++i) {
          auto lap_u = lap.apply_dense(u[i]);
          for (int s = 0; s < dim; ++s) {
            S v = dt2 * (src[i][s] - lap_u[s]) + u[i][s] + u[i][s];
            if (i >= 1) v -= u[i - 1][s];
            u[i + 1][s] = std::move(v);
          }
        }
      } else {
        for (int i = n_slots - 1; i >= 1; --i) {
          auto lap_u = lap.apply_dense(u[i]);
          for (int s = 0; s < dim; ++s) {
            S v = dt2 * (src[i][s] - lap_u[s]) + u[i][s] + u[i][s];
            if (i + 1 < n_slots) v -= u[i + 1][s];
            u[i - 1][s] = std::move(v);
          }
        }
      }
    };

    if (nx > 0) step(x1, f1, lap_x, N, nx);
    if (ny > 0 && lap_y) step(y2, f2, *lap_y, N - 1, ny);

    Cochain<S> out = Cochain<S>::zero(M, k_, Support::Free);
    for (int i = 0; i < N; ++i)
      for (int s = 0; s < nx; ++s)
        if (!scalar_traits<S>::is_zero(x1[i][s]))
          out.v.nz.push_back({M.id1(k_, i, s), x1[i][s]});
    for (int j = 0; j + 1 < N; ++j)
      for (int s = 0; s < ny; ++s)
        if (!scalar_traits<S>::is_zero(y2[j][s]))
          out.v.nz.push_back({M.id2(k_, j, s), y2[j][s]});
    std::sort(out.v.nz.begin(), out.v.nz.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  const Metric<S>* g_;
  int k_;
};

/// Per-degree combinatorial adjacency used for exact cone checks: two k-cells
/// are adjacent when they share a coface or a face, which bounds the stencil
/// of the Hodge Laplacian.
inline std::vector<std::vector<int>> cell_adjacency(const CellComplex& x, int k) {
  std::vector<std::vector<int>> adj(x.n_cells(k));
  if (k < x.dimension()) {
    for (int up = 0; up < x.n_cells(k + 1); ++up) {
      const auto& faces = x.cell(k + 1, up).faces;
      for (size_t a = 0; a < faces.size(); ++a)
        for (size_t b = a + 1; b < faces.size(); ++b) {
          adj[faces[a]].push_back(faces[b]);
          adj[faces[b]].push_back(faces[a]);
        }
    }
  }
  if (k >= 1) {
    std::vector<std::vector<int>> by_face(x.n_cells(k - 1));
    for (int c = 0; c < x.n_cells(k); ++c)
      for (int fidx : x.cell(k, c).faces) by_face[fidx].push_back(c);
    for (auto& cells : by_face)
      for (size_t a = 0; a < cells.size(); ++a)
        for (size_t b = a + 1; b < cells.size(); ++b) {
          adj[cells[a]].push_back(cells[b]);
          adj[cells[b]].push_back(cells[a]);
        }
  }
  return adj;
}

inline std::vector<int> bfs_distance(const std::vector<std::vector<int>>& adj, int src) {
  const int kFar = 1 << 28;
  std::vector<int> dist(adj.size(), kFar);
  std::vector<int> queue{src};
  dist[src] = 0;
  for (size_t h = 0; h < queue.size(); ++h) {
    int v = queue[h];
    for (int w : adj[v])
      if (dist[w] == kFar) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

/// Exact cell-wise check that the support of a retarded (or advanced)
/// solution stays inside the discrete dependency cone of the source.
template <class S>
bool cone_containment_ok(const Metric<S>& g, int k, const Cochain<S>& src,
                         const Cochain<S>& sol, bool forward) {
  const ProductComplex& M = g.spacetime();
  const CellComplex& x = M.sigma();
  auto adj_x = cell_adjacency(x, std::min(k, x.dimension()));
  auto adj_y = k >= 1 ? cell_adjacency(x, k - 1) : std::vector<std::vector<int>>{};

  struct Src {
    int type, t, sig;
    std::vector<int> dist;
  };
  std::vector<Src> sources;
  for (auto& e : src.v.nz) {
    auto c = M.decode(k, e.first);
    sources.push_back({c.type, c.t, c.sig,
                       bfs_distance(c.type == 1 ? adj_x : adj_y, c.sig)});
  }

  for (auto& e : sol.v.nz) {
    auto c = M.decode(k, e.first);
    bool reached = false;
    for (auto& s : sources) {
      if (s.type != c.type) continue;  // the two components never couple
      int steps = forward ? c.t - s.t - 1 : s.t - c.t - 1;
      if (steps < 0) continue;
      if (s.dist[c.sig] <= steps) {
        reached = true;
        break;
      }
    }
    if (!reached) return false;
  }
  return true;
}

}  // namespace cdec
