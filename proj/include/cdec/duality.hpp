#pragma once

#include <string>
#include <vector>

#include "cdec/homotopy.hpp"
#include "cdec/rng.hpp"

namespace cdec {

/// Cohomology-level pairing matrix between complementary-degree bases,
/// entry (i,j) = <rep_i, rep_j>.  Well-definedness is verified, not assumed:
/// every representative pairs to zero against the coboundary generators of
/// the other side.
template <class S>
struct PairingMatrixResult {
  SpMat<S> matrix;
  bool well_defined = true;
  std::string failure;
};

template <class S, class X>
PairingMatrixResult<S> pairing_matrix(const X& x, const QuotientBasis<S>& A,
                                      const QuotientBasis<S>& B) {
  PairingMatrixResult<S> res;
  if (A.degree + B.degree != x.dimension())
    throw error("pairing_matrix: degrees are not complementary");

  auto mk = [&](int deg, Support s, const SpVec<S>& v) {
    Cochain<S> c = Cochain<S>::zero(x, deg, s);
    c.v = v;
    return c;
  };

  // rep against d(allowed lower cell) of the other side, both ways
  SpMat<S> dB = x.template coboundary_matrix<S>(B.degree - 1);
  for (const auto& a : A.reps) {
    Cochain<S> ca = mk(A.degree, A.support, a);
    for (int id : detail::allowed_cells(x, B.degree - 1, B.support)) {
      SpVec<S> img = dB.apply(SpVec<S>::unit(id));
      if (img.empty()) continue;
      if (!scalar_traits<S>::is_zero(pairing(ca, mk(B.degree, B.support, img)))) {
        res.well_defined = false;
        res.failure = "representative pairs nonzero against a coboundary (cell " +
                      std::to_string(id) + " of degree " + std::to_string(B.degree - 1) + ")";
        return res;
      }
    }
  }
  SpMat<S> dA = x.template coboundary_matrix<S>(A.degree - 1);
  for (const auto& b : B.reps) {
    Cochain<S> cb = mk(B.degree, B.support, b);
    for (int id : detail::allowed_cells(x, A.degree - 1, A.support)) {
      SpVec<S> img = dA.apply(SpVec<S>::unit(id));
      if (img.empty()) continue;
      if (!scalar_traits<S>::is_zero(pairing(mk(A.degree, A.support, img), cb))) {
        res.well_defined = false;
        res.failure = "coboundary pairs nonzero against a representative (cell " +
                      std::to_string(id) + " of degree " + std::to_string(A.degree - 1) + ")";
        return res;
      }
    }
  }

  res.matrix = SpMat<S>(A.dim(), B.dim());
  for (int i = 0; i < A.dim(); ++i) {
    Cochain<S> ca = mk(A.degree, A.support, A.reps[i]);
    for (int j = 0; j < B.dim(); ++j) {
      S v = pairing(ca, mk(B.degree, B.support, B.reps[j]));
      if (!scalar_traits<S>::is_zero(v)) res.matrix.set(i, j, v);
    }
  }
  return res;
}

/// Per-degree duality certificate.
template <class S>
struct DualityReport {
  bool pass = true;
  std::string failure;
  struct Degree {
    int k = 0;
    int dim_a = 0, dim_b = 0;
    SpMat<S> matrix;
    S det = scalar_traits<S>::zero();
  };
  std::vector<Degree> degrees;
};

namespace detail {

template <class S, class X>
void duality_pair(DualityReport<S>& rep, const X& x, int k, Support sa, Support sb) {
  auto A = cohomology_basis<S>(x, k, sa);
  auto B = cohomology_basis<S>(x, x.dimension() - k, sb);
  typename DualityReport<S>::Degree d;
  d.k = k;
  d.dim_a = A.dim();
  d.dim_b = B.dim();
  if (A.dim() != B.dim()) {
    rep.pass = false;
    rep.failure = "dimension mismatch in degree " + std::to_string(k) + ": " +
                  std::to_string(A.dim()) + " vs " + std::to_string(B.dim());
    rep.degrees.push_back(d);
    return;
  }
  auto pm = pairing_matrix(x, A, B);
  if (!pm.well_defined) {
    rep.pass = false;
    rep.failure = "degree " + std::to_string(k) + ": " + pm.failure;
    rep.degrees.push_back(d);
    return;
  }
  d.matrix = pm.matrix;
  if (A.dim() > 0) {
    d.det = determinant(pm.matrix);
    if (scalar_traits<S>::is_zero(d.det)) {
      rep.pass = false;
      rep.failure = "pairing matrix singular in degree " + std::to_string(k);
    }
  } else {
    d.det = scalar_traits<S>::one();  // empty matrix is trivially invertible
  }
  rep.degrees.push_back(d);
}

}  // namespace detail

/// Classical Poincare duality: H_c^k x H^{m-k} nondegenerate on the surface.
template <class S>
DualityReport<S> verify_classical_duality(const CellComplex& x) {
  DualityReport<S> rep;
  for (int k = 0; k <= x.dimension(); ++k)
    detail::duality_pair(rep, x, k, Support::Compact, Support::Free);
  return rep;
}

/// Duality between spacelike compact and timelike compact cohomology:
/// H_sc^k x H_tc^{m-k} nondegenerate on the product spacetime.
template <class S>
DualityReport<S> verify_sc_tc_duality(const ProductComplex& m) {
  DualityReport<S> rep;
  for (int k = 0; k <= m.dimension(); ++k)
    detail::duality_pair(rep, m, k, Support::SC, Support::TC);
  return rep;
}

/// Graded symmetry at cohomology level for the legal two-sided patterns:
/// <[a],[b]> = (-1)^{k(m-k)} <[b],[a]>.
template <class S>
bool verify_graded_symmetry(const ProductComplex& m, int k) {
  auto A = cohomology_basis<S>(m, k, Support::SC);
  auto B = cohomology_basis<S>(m, m.dimension() - k, Support::TC);
  auto ab = pairing_matrix(m, A, B);
  auto ba = pairing_matrix(m, B, A);
  if (!ab.well_defined || !ba.well_defined) return false;
  int sign = (k * (m.dimension() - k)) % 2 == 0 ? 1 : -1;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < B.dim(); ++j) {
      S lhs = ab.matrix.at(i, j);
      S rhs = scalar_traits<S>::from_int(sign) * ba.matrix.at(j, i);
      if (!scalar_traits<S>::is_zero(lhs - rhs)) return false;
    }
  return true;
}

/// The compatibility between the spacetime pairing and the surface pairing:
/// <pi*[phi], e[psi]> = <[phi],[psi]> on basis classes and random closed
/// pairs, plus independence of the bump placement.
template <class S>
struct CompatibilityReport {
  bool pass = true;
  std::string failure;
  int checked_pairs = 0;
};

template <class S>
CompatibilityReport<S> verify_compatibility_lemma(const ProductComplex& m,
                                                  const TimeBump<S>& bump,
                                                  int random_pairs = 50,
                                                  std::uint64_t seed = 2024) {
  CompatibilityReport<S> rep;
  const CellComplex& x = m.sigma();
  int n = x.dimension();
  Rng rng(seed);

  auto check = [&](const Cochain<S>& phi, const Cochain<S>& psi) {
    S lhs = pairing(pullback_pi(m, phi), extend_e(m, psi, bump));
    S rhs = integrate(cup(phi, psi));
    if (!scalar_traits<S>::is_zero(lhs - rhs)) {
      rep.pass = false;
      rep.failure = "pairing mismatch in degree " + std::to_string(phi.degree);
      return false;
    }
    rep.checked_pairs++;
    return true;
  };

  for (int k = 0; k <= n; ++k) {
    auto hc = cohomology_basis<S>(x, k, Support::Compact);
    auto hf = cohomology_basis<S>(x, n - k, Support::Free);
    for (const auto& a : hc.reps)
      for (const auto& b : hf.reps) {
        Cochain<S> phi = Cochain<S>::zero(x, k, Support::Compact);
        phi.v = a;
        Cochain<S> psi = Cochain<S>::zero(x, n - k, Support::Free);
        psi.v = b;
        if (!check(phi, psi)) return rep;
      }
    // random closed pairs: random class combination plus a random coboundary
    SpMat<S> dlo_c = x.template coboundary_matrix<S>(k - 1);
    SpMat<S> dlo_f = x.template coboundary_matrix<S>(n - k - 1);
    int want = random_pairs / (n + 1) + 1;
    for (int t = 0; t < want; ++t) {
      Cochain<S> phi = Cochain<S>::zero(x, k, Support::Compact);
      for (const auto& a : hc.reps) phi.v.axpy(rng.small_scalar<S>(), a);
      if (k >= 1) {
        auto lower = rng.cochain<S>(x, k - 1, Support::Compact);
        phi.v.axpy(scalar_traits<S>::one(), dlo_c.apply(lower.v));
      }
      Cochain<S> psi = Cochain<S>::zero(x, n - k, Support::Free);
      for (const auto& b : hf.reps) psi.v.axpy(rng.small_scalar<S>(), b);
      if (n - k >= 1) {
        auto lower = rng.cochain<S>(x, n - k - 1, Support::Free);
        psi.v.axpy(scalar_traits<S>::one(), dlo_f.apply(lower.v));
      }
      if (!check(phi, psi)) return rep;
    }
  }
  return rep;
}

}  // namespace cdec
