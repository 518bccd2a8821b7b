#pragma once

#include <string>
#include <vector>

#include "cdec/cohomology.hpp"

namespace cdec {

/// Slice maps and chain homotopies for the product spacetime.
///
/// Sign conventions.  Product cells carry the time factor first, so the
/// Koszul rule puts degree-dependent signs on the slice-wise operators.  The
/// choices below make all of the following hold exactly, in every degree k
/// and spacetime dimension m:
///   s* pi* = id
///   dP - Pd = (-1)^k (pi* s* - id)        on SC cochains
///   i e = id,  d i = i d,  d e = e d
///   dQ - Qd = (-1)^k (e i - id)           on TC cochains
///   < pi* phi, e psi > = < phi, psi >     at cochain level.

/// Pullback along the projection pi : M -> Sigma; a compactly supported
/// surface cochain acquires spacelike compact support.
template <class S>
Cochain<S> pullback_pi(const ProductComplex& M, const Cochain<S>& phi) {
  if (!phi.sigma || phi.sigma != &M.sigma())
    throw error("pullback_pi: cochain does not live on the product's surface");
  Support s = (phi.support == Support::Compact || phi.support == Support::SC)
                  ? Support::SC
                  : Support::Free;
  Cochain<S> out = Cochain<S>::zero(M, phi.degree, s);
  int N = M.time().n_slices;
  for (int i = 0; i < N; ++i)
    for (auto& e : phi.v.nz)
      out.v.nz.push_back({M.id1(phi.degree, i, e.first), e.second});
  std::sort(out.v.nz.begin(), out.v.nz.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Restriction along the base-slice embedding s : Sigma -> M; the type-2
/// part is discarded (discretely s* dt = 0).
template <class S>
Cochain<S> restrict_s(const Cochain<S>& c) {
  if (!c.on_product()) throw error("restrict_s: not a product cochain");
  const ProductComplex& M = *c.prod;
  Support s = (c.support == Support::SC || c.support == Support::Compact)
                  ? Support::Compact
                  : Support::Free;
  Cochain<S> out = Cochain<S>::zero(M.sigma(), c.degree, s);
  int ns = M.sigma().n_cells(c.degree);
  int lo = M.id1(c.degree, M.time().base_slice, 0);
  for (auto& e : c.v.nz)
    if (e.first >= lo && e.first < lo + ns) out.v.nz.push_back({e.first - lo, e.second});
  return out;
}

namespace detail {

// dense per-edge type-2 slices of a degree-k product cochain
template <class S>
std::vector<std::vector<S>> type2_slices(const ProductComplex& M, const Cochain<S>& c) {
  int ne = M.time().n_edges();
  int ns = c.degree >= 1 ? M.sigma().n_cells(c.degree - 1) : 0;
  std::vector<std::vector<S>> y(ne, std::vector<S>(ns, scalar_traits<S>::zero()));
  if (c.degree < 1) return y;
  int base = M.n1(c.degree);
  for (auto& e : c.v.nz) {
    if (e.first < base) continue;
    int off = e.first - base;
    y[off / ns][off % ns] = e.second;
  }
  return y;
}

template <class S>
Cochain<S> from_type1_slices(const ProductComplex& M, int degree, Support s,
                             const std::vector<std::vector<S>>& x) {
  Cochain<S> out = Cochain<S>::zero(M, degree, s);
  int ns = M.sigma().n_cells(degree);
  for (int i = 0; i < int(x.size()); ++i)
    for (int sg = 0; sg < ns; ++sg)
      if (!scalar_traits<S>::is_zero(x[i][sg]))
        out.v.nz.push_back({M.id1(degree, i, sg), x[i][sg]});
  return out;
}

}  // namespace detail

/// Chain homotopy for spacelike compact cohomology: the type-1 part dies and
/// the type-2 part is integrated in time from the base slice (negated suffix
/// sum before it).
template <class S>
Cochain<S> homotopy_P(const Cochain<S>& c) {
  if (!c.on_product()) throw error("homotopy_P: not a product cochain");
  if (!is_supported(c, Support::SC))
    throw error("homotopy_P: input is not spacelike compact");
  const ProductComplex& M = *c.prod;
  int k = c.degree;
  if (k == 0) return Cochain<S>::zero(M, 0, Support::SC);  // no type-2 part
  auto y = detail::type2_slices(M, c);
  int N = M.time().n_slices;
  int n0 = M.time().base_slice;
  int ns = M.sigma().n_cells(k - 1);
  S sign = (k % 2 == 0) ? -scalar_traits<S>::one() : scalar_traits<S>::one();
  std::vector<std::vector<S>> x(N, std::vector<S>(ns, scalar_traits<S>::zero()));
  for (int i = n0 + 1; i < N; ++i)
    for (int sg = 0; sg < ns; ++sg) x[i][sg] = x[i - 1][sg] + y[i - 1][sg];
  for (int i = n0 - 1; i >= 0; --i)
    for (int sg = 0; sg < ns; ++sg) x[i][sg] = x[i + 1][sg] - y[i][sg];
  for (auto& xi : x)
    for (auto& v : xi) v *= sign;
  auto out = detail::from_type1_slices(M, k - 1, Support::SC, x);
  out = support_project(out, Support::SC);  // exact: prefix sums stay off the ends
  return out;
}

/// Time-integration map i : TC k-cochains -> surface (k-1)-cochains.
template <class S>
Cochain<S> fiber_integrate_i(const Cochain<S>& c) {
  if (!c.on_product()) throw error("fiber_integrate_i: not a product cochain");
  if (!is_supported(c, Support::TC))
    throw error("fiber_integrate_i: input is not timelike compact");
  const ProductComplex& M = *c.prod;
  int k = c.degree;
  if (k == 0) return Cochain<S>::zero(M.sigma(), 0, Support::Free);
  int m = M.dimension();
  S sign = ((m + k) % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one();
  auto y = detail::type2_slices(M, c);
  int ns = M.sigma().n_cells(k - 1);
  Cochain<S> out = Cochain<S>::zero(M.sigma(), k - 1, Support::Free);
  for (int sg = 0; sg < ns; ++sg) {
    S acc = scalar_traits<S>::zero();
    for (auto& yj : y) acc += yj[sg];
    if (!scalar_traits<S>::is_zero(acc)) out.v.nz.push_back({sg, sign * acc});
  }
  return out;
}

/// Time-extension map e : surface (k-1)-cochains -> TC k-cochains, tensoring
/// with the unit bump on time edges.
template <class S>
Cochain<S> extend_e(const ProductComplex& M, const Cochain<S>& psi,
                    const TimeBump<S>& bump) {
  if (!psi.sigma || psi.sigma != &M.sigma())
    throw error("extend_e: cochain does not live on the product's surface");
  bump.validate(M.time());
  int k = psi.degree + 1;
  int m = M.dimension();
  S sign = ((m + k) % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one();
  Cochain<S> out = Cochain<S>::zero(M, k, Support::TC);
  for (int j = 0; j < M.time().n_edges(); ++j) {
    if (scalar_traits<S>::is_zero(bump.a[j])) continue;
    for (auto& e : psi.v.nz)
      out.v.nz.push_back({M.id2(k, j, e.first), sign * bump.a[j] * e.second});
  }
  std::sort(out.v.nz.begin(), out.v.nz.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Chain homotopy for timelike compact cohomology: full prefix sum from the
/// past end minus total sum times the bump's prefix.
template <class S>
Cochain<S> homotopy_Q(const Cochain<S>& c, const TimeBump<S>& bump) {
  if (!c.on_product()) throw error("homotopy_Q: not a product cochain");
  if (!is_supported(c, Support::TC))
    throw error("homotopy_Q: input is not timelike compact");
  const ProductComplex& M = *c.prod;
  bump.validate(M.time());
  int k = c.degree;
  if (k == 0) return Cochain<S>::zero(M, 0, Support::TC);
  auto y = detail::type2_slices(M, c);
  int N = M.time().n_slices;
  int ns = M.sigma().n_cells(k - 1);
  S sign = (k % 2 == 0) ? -scalar_traits<S>::one() : scalar_traits<S>::one();
  std::vector<std::vector<S>> x(N, std::vector<S>(ns, scalar_traits<S>::zero()));
  std::vector<S> total(ns, scalar_traits<S>::zero());
  for (auto& yj : y)
    for (int sg = 0; sg < ns; ++sg) total[sg] += yj[sg];
  S bump_prefix = scalar_traits<S>::zero();
  std::vector<S> prefix(ns, scalar_traits<S>::zero());
  for (int i = 1; i < N; ++i) {
    for (int sg = 0; sg < ns; ++sg) prefix[sg] += y[i - 1][sg];
    bump_prefix += bump.a[i - 1];
    for (int sg = 0; sg < ns; ++sg) {
      S v = prefix[sg] - total[sg] * bump_prefix;
      if (!scalar_traits<S>::is_zero(v)) x[i][sg] = sign * v;
    }
  }
  auto out = detail::from_type1_slices(M, k - 1, Support::TC, x);
  if (!is_supported(out, Support::TC))
    throw error("homotopy_Q: output left the TC class");
  return out;
}

/// Certificate that pi*, s* induce mutually inverse isomorphisms between
/// H_c(Sigma) and H_sc(M) in every degree.
template <class S>
struct IsoReport {
  bool pass = true;
  std::string failure;
  std::vector<int> dims_spacetime;   // per degree
  std::vector<int> dims_surface;     // per degree (shifted for tc)
  std::vector<SpMat<S>> forward;     // surface -> spacetime
  std::vector<SpMat<S>> backward;    // spacetime -> surface
};

namespace detail {

template <class S>
bool is_identity(const SpMat<S>& m) {
  if (m.rows != m.ncols()) return false;
  for (int c = 0; c < m.ncols(); ++c) {
    SpVec<S> diff = m.cols[c];
    diff.axpy(-scalar_traits<S>::one(), SpVec<S>::unit(c));
    if (!diff.empty()) return false;
  }
  return true;
}

}  // namespace detail

template <class S>
IsoReport<S> verify_sc_isomorphism(const ProductComplex& M) {
  IsoReport<S> rep;
  const CellComplex& X = M.sigma();
  DegreeMap<S> pi_map = [&](int deg, const SpVec<S>& v) {
    Cochain<S> phi = Cochain<S>::zero(X, deg, Support::Compact);
    phi.v = v;
    return pullback_pi(M, phi).v;
  };
  DegreeMap<S> s_map = [&](int deg, const SpVec<S>& v) {
    Cochain<S> c = Cochain<S>::zero(M, deg, Support::SC);
    c.v = v;
    return restrict_s(c).v;
  };
  for (int k = 0; k <= M.dimension(); ++k) {
    auto h_sc = cohomology_basis<S>(M, k, Support::SC);
    auto h_c = k <= X.dimension()
                   ? cohomology_basis<S>(X, k, Support::Compact)
                   : QuotientBasis<S>{};
    rep.dims_spacetime.push_back(h_sc.dim());
    rep.dims_surface.push_back(h_c.dim());
    if (h_sc.dim() != h_c.dim()) {
      rep.pass = false;
      rep.failure = "dimension mismatch in degree " + std::to_string(k);
      return rep;
    }
    if (k > X.dimension()) {
      rep.forward.push_back(SpMat<S>(0, 0));
      rep.backward.push_back(SpMat<S>(0, 0));
      continue;
    }
    auto fwd = induced_map<S>(X, M, pi_map, h_c, h_sc);
    auto bwd = induced_map<S>(M, X, s_map, h_sc, h_c);
    if (!fwd.chain_map_ok || !bwd.chain_map_ok) {
      rep.pass = false;
      rep.failure = "chain map verification failed in degree " + std::to_string(k) +
                    ": " + (fwd.chain_map_ok ? bwd.failure : fwd.failure);
      return rep;
    }
    if (!detail::is_identity(fwd.matrix.mul(bwd.matrix)) ||
        !detail::is_identity(bwd.matrix.mul(fwd.matrix))) {
      rep.pass = false;
      rep.failure = "induced matrices are not mutually inverse in degree " +
                    std::to_string(k);
      return rep;
    }
    rep.forward.push_back(fwd.matrix);
    rep.backward.push_back(bwd.matrix);
  }
  return rep;
}

template <class S>
IsoReport<S> verify_tc_isomorphism(const ProductComplex& M, const TimeBump<S>& bump) {
  IsoReport<S> rep;
  const CellComplex& X = M.sigma();
  DegreeMap<S> e_map = [&](int deg, const SpVec<S>& v) {
    Cochain<S> psi = Cochain<S>::zero(X, deg, Support::Free);
    psi.v = v;
    return extend_e(M, psi, bump).v;
  };
  DegreeMap<S> i_map = [&](int deg, const SpVec<S>& v) {
    Cochain<S> c = Cochain<S>::zero(M, deg, Support::TC);
    c.v = v;
    return fiber_integrate_i(c).v;
  };
  for (int k = 0; k <= M.dimension(); ++k) {
    auto h_tc = cohomology_basis<S>(M, k, Support::TC);
    auto h_s = (k >= 1 && k - 1 <= X.dimension())
                   ? cohomology_basis<S>(X, k - 1, Support::Free)
                   : QuotientBasis<S>{};
    if (k >= 1) h_s.degree = k - 1;
    rep.dims_spacetime.push_back(h_tc.dim());
    rep.dims_surface.push_back(h_s.dim());
    if (h_tc.dim() != h_s.dim()) {
      rep.pass = false;
      rep.failure = "dimension mismatch in degree " + std::to_string(k);
      return rep;
    }
    if (k == 0) {
      rep.forward.push_back(SpMat<S>(0, 0));
      rep.backward.push_back(SpMat<S>(0, 0));
      continue;  // H_tc^0 must vanish; dims checked above
    }
    auto fwd = induced_map<S>(X, M, e_map, h_s, h_tc);
    auto bwd = induced_map<S>(M, X, i_map, h_tc, h_s);
    if (!fwd.chain_map_ok || !bwd.chain_map_ok) {
      rep.pass = false;
      rep.failure = "chain map verification failed in degree " + std::to_string(k) +
                    ": " + (fwd.chain_map_ok ? bwd.failure : fwd.failure);
      return rep;
    }
    if (!detail::is_identity(fwd.matrix.mul(bwd.matrix)) ||
        !detail::is_identity(bwd.matrix.mul(fwd.matrix))) {
      rep.pass = false;
      rep.failure = "induced matrices are not mutually inverse in degree " +
                    std::to_string(k);
      return rep;
    }
    rep.forward.push_back(fwd.matrix);
    rep.backward.push_back(bwd.matrix);
  }
  return rep;
}

}  // namespace cdec
