#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cdec/cohomology.hpp"
#include "cdec/lorentz.hpp"
#include "cdec/rng.hpp"

namespace cdec {

/// Time-dependent partition of unity {f+, f-} with f+ + f- = 1 per slice,
/// f+ = 0 on early slices and 1 on late ones.
template <class S>
struct GaugePartition {
  std::vector<S> f_plus;  // per slice

  static GaugePartition step_at(const TimeAxis& t, int slice) {
    if (slice <= t.collar_width || slice >= t.n_slices - t.collar_width)
      throw error("gauge partition: transition must lie in the interior window");
    GaugePartition p;
    p.f_plus.assign(t.n_slices, scalar_traits<S>::zero());
    for (int i = slice; i < t.n_slices; ++i) p.f_plus[i] = scalar_traits<S>::one();
    return p;
  }
};

/// Multiply a product cochain by a per-slice time function, front-vertex
/// convention on the time edges (the cup product with its pullback).
template <class S>
Cochain<S> scale_by_time_function(const Cochain<S>& c, const std::vector<S>& f) {
  Cochain<S> out = c;
  out.v.clear();
  const ProductComplex& M = *c.prod;
  for (auto& e : c.v.nz) {
    auto r = M.decode(c.degree, e.first);
    S v = f[r.t] * e.second;
    if (!scalar_traits<S>::is_zero(v)) out.v.nz.push_back({e.first, v});
  }
  return out;
}

/// Rows of the second-order operator delta d acting in degree k whose stencil
/// fits in the time window: type-1 slices [1, N-2], every type-2 row.
template <class S>
bool deltad_row_honest(const Metric<S>& g, int k, int id) {
  auto c = g.spacetime().decode(k, id);
  int N = g.spacetime().time().n_slices;
  if (c.type == 1) return c.t >= 1 && c.t <= N - 2;
  return true;
}

/// Gauge transformation bringing an on-shell potential into Lorenz gauge:
/// chi = -delta(G_+(f_+ A) + G_-(f_- A)).  The residual delta(A + d chi)
/// vanishes exactly on type-1 slices [2, N-3] and type-2 slots [1, N-3].
template <class S>
Cochain<S> lorenz_fix(const Metric<S>& g, const Cochain<S>& A,
                      const GaugePartition<S>& p) {
  const ProductComplex& M = g.spacetime();
  int k = A.degree;
  // precondition: delta d A = 0 on interior rows
  auto resid = g.delta(k + 1).apply(M.coboundary_matrix<S>(k).apply(A.v));
  for (auto& e : resid.nz)
    if (deltad_row_honest(g, k, e.first))
      throw error("lorenz_fix: input is off shell at cell " + std::to_string(e.first) +
                  " of degree " + std::to_string(k));
  std::vector<S> f_minus(p.f_plus.size());
  for (size_t i = 0; i < f_minus.size(); ++i)
    f_minus[i] = scalar_traits<S>::one() - p.f_plus[i];
  GreenSolver<S> gs(g, k);
  auto b = gs.retarded(scale_by_time_function(A, p.f_plus)).v;
  b.axpy(scalar_traits<S>::one(), gs.advanced(scale_by_time_function(A, f_minus)).v);
  Cochain<S> chi = Cochain<S>::zero(M, k - 1, Support::Free);
  chi.v = g.delta(k).apply(b);
  chi.v.scale(-scalar_traits<S>::one());
  return chi;
}

/// True where the Lorenz residual of lorenz_fix is guaranteed to vanish.
template <class S>
bool lorenz_residual_row(const Metric<S>& g, int k, int id) {
  auto c = g.spacetime().decode(k - 1, id);
  int N = g.spacetime().time().n_slices;
  if (c.type == 1) return c.t >= 2 && c.t <= N - 3;
  return c.t >= 1 && c.t <= N - 3;
}

namespace maxwell_detail {

using Mask = std::function<bool(int degree, int id)>;

/// Support-class mask combined with a closed time window and, when the
/// surface has ends, a minimal collar depth.
template <class S>
Mask window_mask(const ProductComplex& M, Support s, int t_lo, int t_hi,
                 int min_depth) {
  const ProductComplex* mp = &M;
  const CellComplex* x = &M.sigma();
  return [mp, s, t_lo, t_hi, min_depth, x](int k, int id) {
    if (!mp->allowed(k, id, s)) return false;
    auto c = mp->decode(k, id);
    int lo = c.t, hi = c.type == 2 ? c.t + 1 : c.t;
    if (lo < t_lo || hi > t_hi) return false;
    if (min_depth > 0 && x->has_ends() &&
        x->cell_collar_depth(c.type == 1 ? k : k - 1, c.sig) < min_depth)
      return false;
    return true;
  };
}

inline std::vector<int> mask_cells(const ProductComplex& M, int k, const Mask& m) {
  std::vector<int> out;
  for (int id = 0; id < M.n_cells(k); ++id)
    if (m(k, id)) out.push_back(id);
  return out;
}

/// Vectors op * combo, over combinations of unit sources in `src_cells`,
/// whose image lies entirely inside `target` - the exact discrete rendering
/// of  im(op on masked cochains) intersected with the masked subspace.
template <class S>
std::vector<SpVec<S>> image_within(const SpMat<S>& op, int k_out,
                                   const std::vector<int>& src_cells,
                                   const Mask& target) {
  SpMat<S> outside(op.rows, int(src_cells.size()));
  SpMat<S> full(op.rows, int(src_cells.size()));
  for (int c = 0; c < int(src_cells.size()); ++c) {
    auto col = op.cols[src_cells[c]];
    full.cols[c] = col;
    for (auto& e : col.nz)
      if (!target(k_out, e.first)) outside.cols[c].nz.push_back(e);
  }
  std::vector<SpVec<S>> gens;
  for (auto& combo : nullspace(outside)) {
    auto v = full.apply(combo);
    if (!v.empty()) gens.push_back(v);
  }
  return gens;
}

template <class S>
SpVec<S> restrict_to(const SpVec<S>& v, int k, const Mask& m) {
  SpVec<S> out;
  for (auto& e : v.nz)
    if (m(k, e.first)) out.nz.push_back(e);
  return out;
}

/// Kernel of `op` over the masked columns, with rows imposed where
/// `row_ok` holds; returns ambient vectors.
template <class S>
std::vector<SpVec<S>> masked_kernel(const ProductComplex& M, const SpMat<S>& op,
                                    int k_in, const Mask& cols,
                                    const std::function<bool(int)>& row_ok) {
  auto ids = mask_cells(M, k_in, cols);
  SpMat<S> a(op.rows, int(ids.size()));
  for (int c = 0; c < int(ids.size()); ++c)
    for (auto& e : op.cols[ids[c]].nz)
      if (row_ok(e.first)) a.cols[c].nz.push_back(e);
  auto packed = nullspace(a);
  std::vector<SpVec<S>> out;
  out.reserve(packed.size());
  for (auto& v : packed) out.push_back(detail::expand_indices(v, ids));
  return out;
}

}  // namespace maxwell_detail

/// Window layout for the dynamical verifications: equations live on honest
/// rows, solution classes are restrictions to the observation window, and
/// functionals are confined to the deeper window.  On surfaces with ends the
/// same margins apply to the collar depth.
struct MaxwellWindows {
  int obs_margin = 3;     // W: slices [obs, N-1-obs]
  int deep_margin = 5;    // D: slices [deep, N-1-deep]
  int row_depth = 2;      // equations imposed at collar depth >= row_depth (ended surfaces)
  int obs_depth = 3;      // W collar depth (ended surfaces, sc solutions)
  int deep_depth = 2;     // D collar depth (ended surfaces)
};

enum class Flavor { Potential, Faraday };

/// Quotient of timelike compact delta-closed sources by  delta d(TC) -
/// the left-hand side of the potential parametrization theorem.
template <class S>
QuotientBasis<S> tc_source_quotient_potential(const Metric<S>& g, int k,
                                              const MaxwellWindows& w) {
  using namespace maxwell_detail;
  (void)w;
  const ProductComplex& M = g.spacetime();
  Mask tc = [&M](int deg, int id) { return M.allowed(deg, id, Support::TC); };
  auto cells = mask_cells(M, k, tc);
  // numerator: delta-closed TC cochains; closedness must hold at every row,
  // otherwise G omega fails the field equation inside the window (the stray
  // codifferential propagates along the cone)
  SpMat<S> delta_k = g.delta(k);
  SpMat<S> a(delta_k.rows, int(cells.size()));
  for (int c = 0; c < int(cells.size()); ++c) a.cols[c] = delta_k.cols[cells[c]];
  auto packed = nullspace(a);
  std::vector<SpVec<S>> numer;
  for (auto& v : packed) numer.push_back(detail::expand_indices(v, cells));
  // denominator: delta d of TC cochains, kept only when it stays TC
  SpMat<S> dd = g.delta(k + 1).mul(M.coboundary_matrix<S>(k));
  auto denom = image_within(dd, k, cells, tc);
  return QuotientBasis<S>::build(k, Support::TC, denom, numer);
}

/// Solution quotient S_A / G_A of the degree-k potential model, as classes of
/// restrictions to the observation window.
template <class S>
struct SolutionQuotient {
  QuotientBasis<S> classes;     // reps are W-restricted vectors
  std::vector<SpVec<S>> full;   // unrestricted kernel basis (diagnostics)
  maxwell_detail::Mask window;
  int degree = 0;
};

template <class S>
SolutionQuotient<S> solution_quotient_potential(const Metric<S>& g, int k,
                                                Support sup,
                                                const MaxwellWindows& w) {
  using namespace maxwell_detail;
  const ProductComplex& M = g.spacetime();
  int N = M.time().n_slices;
  Mask cols = [&M, sup](int deg, int id) { return M.allowed(deg, id, sup); };
  // rows whose delta-stencil pokes into the spatial cut carry no equation
  bool ended = M.sigma().has_ends();
  Mask rows_mask = window_mask<S>(M, Support::Free, 0, N - 1,
                                  ended ? w.row_depth : 0);
  SpMat<S> dd = g.delta(k + 1).mul(M.coboundary_matrix<S>(k));
  auto row_ok = [&](int rid) {
    return deltad_row_honest(g, k, rid) && rows_mask(k, rid);
  };
  SolutionQuotient<S> out;
  out.degree = k;
  out.full = masked_kernel(M, dd, k, cols, row_ok);
  out.window = window_mask<S>(M, sup, w.obs_margin, N - 1 - w.obs_margin,
                              ended ? w.obs_depth : 0);
  // gauge generators restricted to the window
  SpMat<S> d_lo = M.coboundary_matrix<S>(k - 1);
  std::vector<SpVec<S>> gauge;
  for (int id = 0; id < M.n_cells(k - 1); ++id) {
    if (!cols(k - 1, id)) continue;
    auto v = restrict_to(d_lo.cols[id], k, out.window);
    if (!v.empty()) gauge.push_back(v);
  }
  std::vector<SpVec<S>> restricted;
  for (auto& v : out.full) {
    auto r = restrict_to(v, k, out.window);
    if (!r.empty()) restricted.push_back(r);
  }
  out.classes = QuotientBasis<S>::build(k, sup, gauge, restricted);
  return out;
}

/// Certificate for the potential parametrization [omega] -> [G omega].
template <class S>
struct ParametrizationReport {
  bool pass = true;
  std::string failure;
  int dim_sources = 0;
  int dim_solutions = 0;
  SpMat<S> matrix;
};

template <class S>
ParametrizationReport<S> potential_parametrization(const Metric<S>& g, int k,
                                                   const MaxwellWindows& w) {
  ParametrizationReport<S> rep;
  auto sources = tc_source_quotient_potential(g, k, w);
  auto sols = solution_quotient_potential(g, k, Support::Free, w);
  rep.dim_sources = sources.dim();
  rep.dim_solutions = sols.classes.dim();
  if (rep.dim_sources != rep.dim_solutions) {
    rep.pass = false;
    rep.failure = "dimension mismatch: sources " + std::to_string(rep.dim_sources) +
                  " vs solutions " + std::to_string(rep.dim_solutions);
    return rep;
  }
  GreenSolver<S> gs(g, k);
  rep.matrix = SpMat<S>(sols.classes.dim(), sources.dim());
  for (int j = 0; j < sources.dim(); ++j) {
    Cochain<S> omega = Cochain<S>::zero(g.spacetime(), k, Support::TC);
    omega.v = sources.reps[j];
    auto img = maxwell_detail::restrict_to(gs.causal(omega).v, k, sols.window);
    auto coords = sols.classes.try_coordinates(img);
    if (!coords) {
      rep.pass = false;
      rep.failure = "G omega is not a solution class (source " + std::to_string(j) + ")";
      return rep;
    }
    for (int i = 0; i < sols.classes.dim(); ++i) rep.matrix.set(i, j, (*coords)[i]);
  }
  if (rep.dim_sources > 0 && scalar_traits<S>::is_zero(determinant(rep.matrix))) {
    rep.pass = false;
    rep.failure = "induced matrix is singular";
  }
  return rep;
}

/// Observable space E_A (potential flavor) or E_F (Faraday flavor) over the
/// deep window.
template <class S>
struct ObservableSpace {
  int degree = 0;
  Flavor flavor = Flavor::Potential;
  QuotientBasis<S> classes;
};

template <class S>
ObservableSpace<S> build_observables(const Metric<S>& g, int k, Flavor flavor,
                                     const MaxwellWindows& w) {
  using namespace maxwell_detail;
  const ProductComplex& M = g.spacetime();
  int N = M.time().n_slices;
  Mask deep = window_mask<S>(M, Support::Compact, w.deep_margin,
                             N - 1 - w.deep_margin,
                             M.sigma().has_ends() ? w.deep_depth : 0);
  auto cells = mask_cells(M, k, deep);
  ObservableSpace<S> out;
  out.degree = k;
  out.flavor = flavor;
  if (flavor == Flavor::Potential) {
    // numerator: delta-closed compactly supported functionals
    SpMat<S> delta_k = g.delta(k);
    SpMat<S> a(delta_k.rows, int(cells.size()));
    for (int c = 0; c < int(cells.size()); ++c) a.cols[c] = delta_k.cols[cells[c]];
    auto packed = nullspace(a);
    std::vector<SpVec<S>> numer;
    for (auto& v : packed) numer.push_back(detail::expand_indices(v, cells));
    SpMat<S> dd = g.delta(k + 1).mul(M.coboundary_matrix<S>(k));
    auto denom = image_within(dd, k, cells, deep);
    out.classes = QuotientBasis<S>::build(k, Support::Compact, denom, numer);
  } else {
    std::vector<SpVec<S>> numer;
    for (int id : cells) numer.push_back(SpVec<S>::unit(id));
    // denominator: (delta + d)(mu (+) nu) over deep pairs, kept when the
    // combined image stays inside the deep window
    auto up = mask_cells(M, k + 1, deep);
    auto lo = mask_cells(M, k - 1, deep);
    SpMat<S> d_lo = M.coboundary_matrix<S>(k - 1);
    const SpMat<S>& delta_up = g.delta(k + 1);
    SpMat<S> joint(M.n_cells(k), int(up.size() + lo.size()));
    for (int c = 0; c < int(up.size()); ++c) joint.cols[c] = delta_up.cols[up[c]];
    for (int c = 0; c < int(lo.size()); ++c)
      joint.cols[up.size() + c] = d_lo.cols[lo[c]];
    std::vector<int> all_cols(joint.ncols());
    for (int c = 0; c < joint.ncols(); ++c) all_cols[c] = c;
    auto denom = image_within(joint, k, all_cols, deep);
    out.classes = QuotientBasis<S>::build(k, Support::Compact, denom, numer);
  }
  return out;
}

/// Gauge invariance check: every representative of E_A pairs to zero with
/// every coboundary d chi; by mass adjointness this is exactly delta rep = 0,
/// which is verified directly and exactly.
template <class S>
bool observables_gauge_invariant(const Metric<S>& g, const ObservableSpace<S>& E) {
  if (E.flavor != Flavor::Potential) return true;
  for (const auto& rep : E.classes.reps)
    if (!g.delta(E.degree).apply(rep).empty()) return false;
  return true;
}

/// Evaluation matrix V_ij = (alpha_i, A_j)_M between observable classes and
/// solution classes.
template <class S>
SpMat<S> evaluation_matrix(const Metric<S>& g, const ObservableSpace<S>& E,
                           const QuotientBasis<S>& sols, int degree) {
  SpMat<S> v(E.classes.dim(), sols.dim());
  for (int i = 0; i < E.classes.dim(); ++i)
    for (int j = 0; j < sols.dim(); ++j) {
      S val = g.m_pairing(E.classes.reps[i], sols.reps[j], degree);
      if (!scalar_traits<S>::is_zero(val)) v.set(i, j, val);
    }
  return v;
}

/// Separability + non-redundancy certificate: V square and invertible, and a
/// constructed redundant functional is detected as rank-deficient.
template <class S>
struct OptimalityReport {
  bool pass = true;
  std::string failure;
  int dim_observables = 0;
  int dim_solutions = 0;
  S det = scalar_traits<S>::zero();
  bool negative_control_ok = false;
};

namespace maxwell_detail {

template <class S>
OptimalityReport<S> optimality_certificate(const Metric<S>& g,
                                           const ObservableSpace<S>& E,
                                           const QuotientBasis<S>& sols,
                                           const SpVec<S>& redundant_row,
                                           int degree) {
  OptimalityReport<S> rep;
  rep.dim_observables = E.classes.dim();
  rep.dim_solutions = sols.dim();
  if (E.classes.dim() != sols.dim()) {
    rep.pass = false;
    rep.failure = "dimension mismatch: observables " +
                  std::to_string(E.classes.dim()) + " vs solutions " +
                  std::to_string(sols.dim());
    return rep;
  }
  SpMat<S> v = evaluation_matrix(g, E, sols, degree);
  if (E.classes.dim() > 0) {
    rep.det = determinant(v);
    if (scalar_traits<S>::is_zero(rep.det)) {
      rep.pass = false;
      rep.failure = "evaluation matrix is singular";
      return rep;
    }
  } else {
    rep.det = scalar_traits<S>::one();
  }
  // negative control: appending the image row must not raise the rank
  SpMat<S> ext(E.classes.dim() + 1, sols.dim());
  for (int j = 0; j < sols.dim(); ++j) {
    for (int i = 0; i < E.classes.dim(); ++i) {
      S val = v.at(i, j);
      if (!scalar_traits<S>::is_zero(val)) ext.set(i, j, val);
    }
    S val = g.m_pairing(redundant_row, sols.reps[j], degree);
    if (!scalar_traits<S>::is_zero(val)) ext.set(E.classes.dim(), j, val);
  }
  rep.negative_control_ok = rank(ext) < ext.rows;
  if (!rep.negative_control_ok) {
    rep.pass = false;
    rep.failure = "negative control not detected as rank-deficient";
  }
  return rep;
}

}  // namespace maxwell_detail

template <class S>
OptimalityReport<S> verify_potential_optimality(const Metric<S>& g, int k,
                                                const MaxwellWindows& w,
                                                std::uint64_t seed = 4242) {
  using namespace maxwell_detail;
  const ProductComplex& M = g.spacetime();
  int N = M.time().n_slices;
  auto E = build_observables(g, k, Flavor::Potential, w);
  if (!observables_gauge_invariant(g, E)) {
    OptimalityReport<S> rep;
    rep.pass = false;
    rep.failure = "observable representative is not gauge invariant";
    return rep;
  }
  auto sols = solution_quotient_potential(g, k, Support::Free, w);
  // redundant functional: delta d beta for a random deep beta
  Rng rng(seed);
  Mask deeper = window_mask<S>(M, Support::Compact, w.deep_margin + 1,
                               N - 2 - w.deep_margin,
                               M.sigma().has_ends() ? w.deep_depth + 1 : 0);
  Cochain<S> beta = Cochain<S>::zero(M, k, Support::Compact);
  for (int id = 0; id < M.n_cells(k); ++id)
    if (deeper(k, id) && rng.uniform(0, 2) == 0) beta.v.set(id, rng.small_scalar<S>());
  SpVec<S> red = g.delta(k + 1).apply(M.coboundary_matrix<S>(k).apply(beta.v));
  return optimality_certificate(g, E, sols.classes, red, k);
}

/// Faraday on-shell space S_F: kernel of dF = 0 (all rows) and delta F = 0
/// (honest rows), as restriction classes over the observation window.
template <class S>
SolutionQuotient<S> solution_space_faraday(const Metric<S>& g, int k, Support sup,
                                           const MaxwellWindows& w) {
  using namespace maxwell_detail;
  const ProductComplex& M = g.spacetime();
  int N = M.time().n_slices;
  Mask cols = [&M, sup](int deg, int id) { return M.allowed(deg, id, sup); };
  bool sc = sup == Support::SC && M.sigma().has_ends();
  Mask rows_mask_up = window_mask<S>(M, Support::Free, 0, N - 1, sc ? w.row_depth : 0);
  Mask rows_mask_dn = rows_mask_up;

  // stacked operator rows: d rows first, then delta rows
  SpMat<S> d_up = M.coboundary_matrix<S>(k);
  SpMat<S> delta_dn = g.delta(k);
  int up_rows = d_up.rows;
  SpMat<S> stacked(up_rows + delta_dn.rows, M.n_cells(k));
  for (int c = 0; c < M.n_cells(k); ++c) {
    for (auto& e : d_up.cols[c].nz)
      if (rows_mask_up(k + 1, e.first)) stacked.cols[c].nz.push_back(e);
    for (auto& e : delta_dn.cols[c].nz)
      if (g.delta_row_honest(k, e.first) && rows_mask_dn(k - 1, e.first))
        stacked.cols[c].nz.push_back({up_rows + e.first, e.second});
  }
  SolutionQuotient<S> out;
  out.degree = k;
  auto row_all = [](int) { return true; };
  out.full = masked_kernel(M, stacked, k, cols, row_all);
  out.window = window_mask<S>(M, sup, w.obs_margin, N - 1 - w.obs_margin,
                              sc ? w.obs_depth : 0);
  std::vector<SpVec<S>> restricted;
  for (auto& v : out.full) {
    auto r = restrict_to(v, k, out.window);
    if (!r.empty()) restricted.push_back(r);
  }
  out.classes = QuotientBasis<S>::build(k, sup, {}, restricted);
  return out;
}

/// Source quotient for the Faraday parametrization: closed TC (k+1)-forms
/// (+) coclosed TC (k-1)-forms modulo (d [+] delta)(TC k-forms).  Combined
/// vectors index the (k+1)-block first.
template <class S>
struct FaradaySources {
  QuotientBasis<S> classes;
  int up_cells = 0;  // ambient size of the (k+1) block
};

template <class S>
FaradaySources<S> tc_source_quotient_faraday(const Metric<S>& g, int k,
                                             Support src_support) {
  using namespace maxwell_detail;
  const ProductComplex& M = g.spacetime();
  Mask mask = [&M, src_support](int deg, int id) {
    return M.allowed(deg, id, src_support);
  };
  int n_up = M.n_cells(k + 1), n_dn = M.n_cells(k - 1);
  auto up_cells = mask_cells(M, k + 1, mask);
  auto dn_cells = mask_cells(M, k - 1, mask);

  // numerator: block-diagonal kernel of (d on the up block, delta on the down block)
  SpMat<S> d_up = M.coboundary_matrix<S>(k + 1);
  SpMat<S> delta_dn = g.delta(k - 1);
  SpMat<S> block(d_up.rows + std::max(delta_dn.rows, 0),
                 int(up_cells.size() + dn_cells.size()));
  for (int c = 0; c < int(up_cells.size()); ++c)
    block.cols[c] = d_up.cols[up_cells[c]];
  if (k - 1 >= 1) {
    for (int c = 0; c < int(dn_cells.size()); ++c)
      for (auto& e : delta_dn.cols[dn_cells[c]].nz)
        block.cols[up_cells.size() + c].nz.push_back({d_up.rows + e.first, e.second});
  }
  auto packed = nullspace(block);
  std::vector<SpVec<S>> numer;
  for (auto& v : packed) {
    SpVec<S> amb;
    for (auto& e : v.nz) {
      int idx = e.first < int(up_cells.size())
                    ? up_cells[e.first]
                    : n_up + dn_cells[e.first - up_cells.size()];
      amb.nz.push_back({idx, e.second});
    }
    std::sort(amb.nz.begin(), amb.nz.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    numer.push_back(amb);
  }

  // denominator: (d theta, delta theta) for masked k-cochains theta whose
  // delta-part stays inside the mask (the d-part always does)
  auto mid_cells = mask_cells(M, k, mask);
  SpMat<S> d_mid = M.coboundary_matrix<S>(k);
  SpMat<S> delta_mid = g.delta(k);
  SpMat<S> outside(delta_mid.rows, int(mid_cells.size()));
  for (int c = 0; c < int(mid_cells.size()); ++c)
    for (auto& e : delta_mid.cols[mid_cells[c]].nz)
      if (!mask(k - 1, e.first)) outside.cols[c].nz.push_back(e);
  std::vector<SpVec<S>> denom;
  for (auto& combo : nullspace(outside)) {
    SpVec<S> theta;
    for (auto& e : combo.nz) theta.nz.push_back({mid_cells[e.first], e.second});
    std::sort(theta.nz.begin(), theta.nz.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SpVec<S> gen;
    for (auto& e : d_mid.apply(theta).nz) gen.nz.push_back(e);
    for (auto& e : delta_mid.apply(theta).nz) gen.nz.push_back({n_up + e.first, e.second});
    std::sort(gen.nz.begin(), gen.nz.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (!gen.empty()) denom.push_back(gen);
  }
  FaradaySources<S> out;
  out.up_cells = n_up;
  out.classes = QuotientBasis<S>::build(k, src_support, denom, numer);
  return out;
}

template <class S>
ParametrizationReport<S> faraday_parametrization(const Metric<S>& g, int k,
                                                 const MaxwellWindows& w,
                                                 Support sol_support = Support::Free) {
  ParametrizationReport<S> rep;
  Support src_support =
      sol_support == Support::SC ? Support::Compact : Support::TC;
  auto sources = tc_source_quotient_faraday(g, k, src_support);
  auto sols = solution_space_faraday(g, k, sol_support, w);
  rep.dim_sources = sources.classes.dim();
  rep.dim_solutions = sols.classes.dim();
  if (rep.dim_sources != rep.dim_solutions) {
    rep.pass = false;
    rep.failure = "dimension mismatch: sources " + std::to_string(rep.dim_sources) +
                  " vs solutions " + std::to_string(rep.dim_solutions);
    return rep;
  }
  const ProductComplex& M = g.spacetime();
  GreenSolver<S> gs(g, k);
  SpMat<S> d_lo = M.coboundary_matrix<S>(k - 1);
  rep.matrix = SpMat<S>(sols.classes.dim(), sources.classes.dim());
  for (int j = 0; j < sources.classes.dim(); ++j) {
    SpVec<S> alpha, beta;  // split the combined vector
    for (auto& e : sources.classes.reps[j].nz) {
      if (e.first < sources.up_cells)
        alpha.nz.push_back(e);
      else
        beta.nz.push_back({e.first - sources.up_cells, e.second});
    }
    Cochain<S> src = Cochain<S>::zero(M, k, Support::TC);
    src.v = g.delta(k + 1).apply(alpha);
    src.v.axpy(scalar_traits<S>::one(), d_lo.apply(beta));
    auto img = maxwell_detail::restrict_to(gs.causal(src, false).v, k, sols.window);
    auto coords = sols.classes.try_coordinates(img);
    if (!coords) {
      rep.pass = false;
      rep.failure = "G(delta alpha + d beta) is not a solution class (source " +
                    std::to_string(j) + ")";
      return rep;
    }
    for (int i = 0; i < sols.classes.dim(); ++i) rep.matrix.set(i, j, (*coords)[i]);
  }
  if (rep.dim_sources > 0 && scalar_traits<S>::is_zero(determinant(rep.matrix))) {
    rep.pass = false;
    rep.failure = "induced matrix is singular";
  }
  return rep;
}

template <class S>
OptimalityReport<S> verify_faraday_optimality(const Metric<S>& g, int k,
                                              const MaxwellWindows& w,
                                              std::uint64_t seed = 2727) {
  using namespace maxwell_detail;
  const ProductComplex& M = g.spacetime();
  int N = M.time().n_slices;
  auto E = build_observables(g, k, Flavor::Faraday, w);
  auto sols = solution_space_faraday(g, k, Support::Free, w);
  // redundant functional: (delta + d) image of a random deep pair
  Rng rng(seed);
  Mask deeper = window_mask<S>(M, Support::Compact, w.deep_margin + 1,
                               N - 2 - w.deep_margin,
                               M.sigma().has_ends() ? w.deep_depth + 1 : 0);
  SpVec<S> mu, nu;
  for (int id = 0; id < M.n_cells(k + 1); ++id)
    if (deeper(k + 1, id) && rng.uniform(0, 2) == 0) mu.set(id, rng.small_scalar<S>());
  for (int id = 0; id < M.n_cells(k - 1); ++id)
    if (deeper(k - 1, id) && rng.uniform(0, 2) == 0) nu.set(id, rng.small_scalar<S>());
  SpVec<S> red = g.delta(k + 1).apply(mu);
  red.axpy(scalar_traits<S>::one(), M.coboundary_matrix<S>(k - 1).apply(nu));
  return optimality_certificate(g, E, sols.classes, red, k);
}

/// Spacelike compact solution quotients with the compact-source
/// parametrization, for both flavors.
template <class S>
ParametrizationReport<S> sc_solution_spaces(const Metric<S>& g, int k, Flavor flavor,
                                            const MaxwellWindows& w) {
  if (flavor == Flavor::Faraday) return faraday_parametrization(g, k, w, Support::SC);
  ParametrizationReport<S> rep;
  using namespace maxwell_detail;
  const ProductComplex& M = g.spacetime();
  // sources: compactly supported delta-closed, modulo delta d staying compact
  Mask cmask = [&M](int deg, int id) { return M.allowed(deg, id, Support::Compact); };
  auto cells = mask_cells(M, k, cmask);
  SpMat<S> delta_k = g.delta(k);
  SpMat<S> a(delta_k.rows, int(cells.size()));
  for (int c = 0; c < int(cells.size()); ++c) a.cols[c] = delta_k.cols[cells[c]];
  auto packed = nullspace(a);
  std::vector<SpVec<S>> numer;
  for (auto& v : packed) numer.push_back(detail::expand_indices(v, cells));
  SpMat<S> dd = g.delta(k + 1).mul(M.coboundary_matrix<S>(k));
  auto denom = image_within(dd, k, cells, cmask);
  auto sources = QuotientBasis<S>::build(k, Support::Compact, denom, numer);

  auto sols = solution_quotient_potential(g, k, Support::SC, w);
  rep.dim_sources = sources.dim();
  rep.dim_solutions = sols.classes.dim();
  if (rep.dim_sources != rep.dim_solutions) {
    rep.pass = false;
    rep.failure = "dimension mismatch: sources " + std::to_string(rep.dim_sources) +
                  " vs sc solutions " + std::to_string(rep.dim_solutions);
    return rep;
  }
  GreenSolver<S> gs(g, k);
  rep.matrix = SpMat<S>(sols.classes.dim(), sources.dim());
  for (int j = 0; j < sources.dim(); ++j) {
    Cochain<S> omega = Cochain<S>::zero(M, k, Support::Compact);
    omega.v = sources.reps[j];
    auto img = maxwell_detail::restrict_to(gs.causal(omega).v, k, sols.window);
    auto coords = sols.classes.try_coordinates(img);
    if (!coords) {
      rep.pass = false;
      rep.failure = "G omega leaves the sc solution classes (source " +
                    std::to_string(j) + ")";
      return rep;
    }
    for (int i = 0; i < sols.classes.dim(); ++i) rep.matrix.set(i, j, (*coords)[i]);
  }
  if (rep.dim_sources > 0 && scalar_traits<S>::is_zero(determinant(rep.matrix))) {
    rep.pass = false;
    rep.failure = "induced matrix is singular";
  }
  return rep;
}

}  // namespace cdec
