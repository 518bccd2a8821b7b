#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "cdec/product.hpp"

namespace cdec {

/// Degree-k cochain over a surface complex or a product spacetime, tagged
/// with its support class.  Coefficients live in the full cell index space;
/// the support class is a promise checked by is_supported / enforced by
/// support_project.
template <class S>
struct Cochain {
  int degree = 0;
  Support support = Support::Free;
  SpVec<S> v;
  const CellComplex* sigma = nullptr;
  const ProductComplex* prod = nullptr;

  bool on_product() const { return prod != nullptr; }
  int n_cells() const {
    return prod ? prod->n_cells(degree) : sigma->n_cells(degree);
  }
  int ambient_dim() const { return prod ? prod->dimension() : sigma->dimension(); }

  static Cochain zero(const CellComplex& X, int k, Support s = Support::Free) {
    Cochain c;
    c.degree = k;
    c.support = s;
    c.sigma = &X;
    return c;
  }
  static Cochain zero(const ProductComplex& M, int k, Support s = Support::Free) {
    Cochain c;
    c.degree = k;
    c.support = s;
    c.prod = &M;
    return c;
  }
};

template <class S>
bool same_home(const Cochain<S>& a, const Cochain<S>& b) {
  return a.sigma == b.sigma && a.prod == b.prod;
}

template <class S>
bool is_supported(const Cochain<S>& c, Support s) {
  for (auto& e : c.v.nz) {
    bool ok = c.prod ? c.prod->allowed(c.degree, e.first, s)
                     : c.sigma->allowed(c.degree, e.first, s);
    if (!ok) return false;
  }
  return true;
}

/// Zero out the coefficients excluded by the support class and retag.
template <class S>
Cochain<S> support_project(const Cochain<S>& c, Support s) {
  Cochain<S> out = c;
  out.support = s;
  out.v.clear();
  for (auto& e : c.v.nz) {
    bool ok = c.prod ? c.prod->allowed(c.degree, e.first, s)
                     : c.sigma->allowed(c.degree, e.first, s);
    if (ok) out.v.nz.push_back(e);
  }
  return out;
}

/// Coboundary.  Both complexes preserve every support class under d (the
/// collars are subcomplexes), so the tag carries over.
template <class S>
Cochain<S> coboundary(const Cochain<S>& c) {
  int dim = c.ambient_dim();
  if (c.degree >= dim) throw error("coboundary: cochain already in top degree");
  Cochain<S> out = c;
  out.degree = c.degree + 1;
  const auto& triples =
      c.prod ? c.prod->cob_triples(c.degree) : c.sigma->cob_triples(c.degree);
  int nrows = c.prod ? c.prod->n_cells(c.degree + 1) : c.sigma->n_cells(c.degree + 1);
  std::vector<S> acc(nrows, scalar_traits<S>::zero());
  std::vector<S> in = c.v.dense(c.n_cells());
  for (const auto& t : triples) {
    if (scalar_traits<S>::is_zero(in[t.col])) continue;
    acc[t.row] += scalar_traits<S>::from_int(t.sign) * in[t.col];
  }
  out.v = SpVec<S>::from_dense(acc);
  return out;
}

namespace detail {

/// Alexander-Whitney product on the surface complex, front face of a times
/// back face of b with each cell's own ordered face maps.
template <class S>
std::vector<S> cup_sigma_dense(const CellComplex& X, int p, const std::vector<S>& a,
                               int q, const std::vector<S>& b) {
  int deg = p + q;
  std::vector<S> out(X.n_cells(deg), scalar_traits<S>::zero());
  for (int id = 0; id < X.n_cells(deg); ++id) {
    const S& av = a[X.front_face(deg, id, p)];
    if (scalar_traits<S>::is_zero(av)) continue;
    const S& bv = b[X.back_face(deg, id, q)];
    if (scalar_traits<S>::is_zero(bv)) continue;
    out[id] = av * bv;
  }
  return out;
}

template <class S>
std::vector<S> slice1(const ProductComplex& M, const Cochain<S>& c, int slice) {
  int ns = M.sigma().n_cells(c.degree);
  std::vector<S> out(ns, scalar_traits<S>::zero());
  int lo = M.id1(c.degree, slice, 0);
  for (auto& e : c.v.nz)
    if (e.first >= lo && e.first < lo + ns) out[e.first - lo] = e.second;
  return out;
}

template <class S>
std::vector<S> slice2(const ProductComplex& M, const Cochain<S>& c, int edge) {
  int ns = M.sigma().n_cells(c.degree - 1);
  std::vector<S> out(ns, scalar_traits<S>::zero());
  if (c.degree < 1) return out;
  int lo = M.id2(c.degree, edge, 0);
  for (auto& e : c.v.nz)
    if (e.first >= lo && e.first < lo + ns) out[e.first - lo] = e.second;
  return out;
}

}  // namespace detail

/// Cup product.  On the surface: Alexander-Whitney.  On the product:
/// (a1 ox a2) cup (b1 ox b2) = (-1)^{|a2||b1|} (a1 cup b1) ox (a2 cup b2)
/// with the interval Alexander-Whitney product in the time factor, which in
/// components reads
///   r1_i = a1_i cup b1_i
///   r2_j = (-1)^p a1_j cup b2_j + a2_j cup b1_{j+1}   (p = deg a).
template <class S>
Cochain<S> cup(const Cochain<S>& a, const Cochain<S>& b) {
  if (!same_home(a, b)) throw error("cup: operands live on different complexes");
  int p = a.degree, q = b.degree;
  if (p + q > a.ambient_dim()) throw error("cup: degrees exceed dimension");

  if (a.sigma) {
    Cochain<S> out = Cochain<S>::zero(*a.sigma, p + q, Support::Free);
    auto av = a.v.dense(a.sigma->n_cells(p));
    auto bv = b.v.dense(b.sigma->n_cells(q));
    out.v = SpVec<S>::from_dense(detail::cup_sigma_dense(*a.sigma, p, av, q, bv));
    return out;
  }

  const ProductComplex& M = *a.prod;
  const CellComplex& X = M.sigma();
  Cochain<S> out = Cochain<S>::zero(M, p + q, Support::Free);
  int N = M.time().n_slices;
  S koszul = (p % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one();
  std::vector<S> acc(M.n_cells(p + q), scalar_traits<S>::zero());

  for (int i = 0; i < N; ++i) {
    auto a1 = detail::slice1(M, a, i);
    auto b1 = detail::slice1(M, b, i);
    if (p + q <= X.dimension()) {
      auto r1 = detail::cup_sigma_dense(X, p, a1, q, b1);
      int lo = M.id1(p + q, i, 0);
      for (int s = 0; s < int(r1.size()); ++s)
        if (!scalar_traits<S>::is_zero(r1[s])) acc[lo + s] = r1[s];
    }
    if (i + 1 < N && p + q >= 1) {
      // type-2 output on edge j = i
      std::vector<S> r2(X.n_cells(p + q - 1), scalar_traits<S>::zero());
      if (q >= 1) {
        auto b2 = detail::slice2(M, b, i);
        auto t = detail::cup_sigma_dense(X, p, a1, q - 1, b2);
        for (int s = 0; s < int(t.size()); ++s) r2[s] += koszul * t[s];
      }
      if (p >= 1) {
        auto a2 = detail::slice2(M, a, i);
        auto b1next = detail::slice1(M, b, i + 1);
        auto t = detail::cup_sigma_dense(X, p - 1, a2, q, b1next);
        for (int s = 0; s < int(t.size()); ++s) r2[s] += t[s];
      }
      int lo = M.id2(p + q, i, 0);
      for (int s = 0; s < int(r2.size()); ++s)
        if (!scalar_traits<S>::is_zero(r2[s])) acc[lo + s] = r2[s];
    }
  }
  out.v = SpVec<S>::from_dense(acc);
  return out;
}

/// Signed sum of a top-degree cochain over the fundamental class.
template <class S>
S integrate(const Cochain<S>& c) {
  if (c.degree != c.ambient_dim())
    throw error("integrate: cochain is not of top degree");
  S acc = scalar_traits<S>::zero();
  for (auto& e : c.v.nz) {
    int s = c.prod ? c.prod->fundamental_sign(e.first)
                   : c.sigma->fundamental_sign(e.first);
    acc += scalar_traits<S>::from_int(s) * e.second;
  }
  return acc;
}

/// True when the pair of support classes guarantees a well-defined pairing
/// (the vanishing conditions of the two operands jointly cover both the
/// temporal and the spatial collar).
inline bool pairing_pattern_ok(Support a, Support b) {
  auto covers_tc = [](Support s) { return s == Support::TC || s == Support::Compact; };
  auto covers_sc = [](Support s) { return s == Support::SC || s == Support::Compact; };
  return (covers_tc(a) || covers_tc(b)) && (covers_sc(a) || covers_sc(b));
}

/// <a, b> = integrate(a cup b); degrees must be complementary.
template <class S>
S pairing(const Cochain<S>& a, const Cochain<S>& b) {
  if (!same_home(a, b)) throw error("pairing: operands live on different complexes");
  if (a.degree + b.degree != a.ambient_dim())
    throw error("pairing: degrees are not complementary");
  if (a.on_product() && !pairing_pattern_ok(a.support, b.support))
    throw error(std::string("pairing: support pattern (") + support_name(a.support) +
                ", " + support_name(b.support) + ") does not guarantee a finite pairing");
  if (!a.on_product() && a.support == Support::Free && b.support == Support::Free &&
      a.sigma->has_ends())
    throw error("pairing: (free, free) pattern on a windowed surface");
  return integrate(cup(a, b));
}

/// Split a product cochain into its type-1 and type-2 parts.
template <class S>
std::pair<Cochain<S>, Cochain<S>> decompose_types(const Cochain<S>& c) {
  if (!c.on_product()) throw error("decompose_types: not a product cochain");
  Cochain<S> c1 = c, c2 = c;
  c1.v.clear();
  c2.v.clear();
  int split = c.prod->n1(c.degree);
  for (auto& e : c.v.nz)
    (e.first < split ? c1.v : c2.v).nz.push_back(e);
  return {c1, c2};
}

/// 1-cochain on the time axis with unit total, supported off the temporal
/// collar; the discrete a(s) ds of the time-extension map.
template <class S>
struct TimeBump {
  std::vector<S> a;  // per time edge

  static TimeBump single_edge(const TimeAxis& t, int edge) {
    TimeBump b;
    b.a.assign(t.n_edges(), scalar_traits<S>::zero());
    if (edge < 0 || edge >= t.n_edges()) throw error("bump edge out of range");
    b.a[edge] = scalar_traits<S>::one();
    b.validate(t);
    return b;
  }

  void validate(const TimeAxis& t) const {
    if (int(a.size()) != t.n_edges()) throw error("bump has wrong length");
    S total = scalar_traits<S>::zero();
    for (int j = 0; j < int(a.size()); ++j) {
      if (t.edge_in_collar(j) && !scalar_traits<S>::is_zero(a[j]))
        throw error("bump overlaps the temporal collar");
      total += a[j];
    }
    if (!scalar_traits<S>::is_zero(total - scalar_traits<S>::one()))
      throw error("bump coefficients must sum to 1");
  }
};

/// Line-oriented serialization: "degree support" header then "cell p/q" rows.
template <class S>
std::string to_lines(const Cochain<S>& c) {
  std::ostringstream os;
  os << c.degree << " " << support_name(c.support) << "\n";
  for (auto& e : c.v.nz) os << e.first << " " << scalar_traits<S>::str(e.second) << "\n";
  return os.str();
}

}  // namespace cdec
