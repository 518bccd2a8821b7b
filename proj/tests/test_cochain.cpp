#include <catch2/catch_amalgamated.hpp>

#include "cdec/cochain.hpp"
#include "cdec/fixtures.hpp"
#include "cdec/rng.hpp"

using namespace cdec;
using R = Rational;
using T = scalar_traits<R>;

namespace {

template <class X>
Cochain<R> unit_cochain(const X& x, int k, int id) {
  auto c = Cochain<R>::zero(x, k);
  c.v.set(id, T::one());
  return c;
}

}  // namespace

TEST_CASE("coboundary convention on circle(3)") {
  auto x = build_sigma("circle(3)");
  // edges are [0,1] -> id 0, [1,2] -> id 1, [2,0] -> id 2
  auto d = coboundary(unit_cochain(x, 0, 0));
  CHECK(d.v.at(0) == T::from_int(-1));  // edge v0v1
  CHECK(d.v.at(1) == T::from_int(0));
  CHECK(d.v.at(2) == T::from_int(1));   // edge v2v0
}

TEST_CASE("d d = 0 on sphere3 for random cochains") {
  auto x = build_sigma("sphere3");
  Rng rng(11);
  for (int k = 0; k + 2 <= x.dimension(); ++k)
    for (int t = 0; t < 10; ++t) {
      auto c = rng.cochain<R>(x, k, Support::Free);
      CHECK(coboundary(coboundary(c)).v.empty());
    }
}

TEST_CASE("d preserves support classes") {
  TimeAxis t(8, 2, 4);
  ProductComplex m(t, build_sigma("circle(3)"));
  Rng rng(5);
  for (Support s : {Support::TC, Support::SC, Support::Compact}) {
    for (int k = 0; k < m.dimension(); ++k) {
      auto c = rng.cochain<R>(m, k, s);
      REQUIRE(is_supported(c, s));
      CHECK(is_supported(coboundary(c), s));
    }
  }
}

TEST_CASE("cup: unit, Alexander-Whitney evaluation, Leibniz") {
  auto x = build_sigma("circle(3)");
  Rng rng(23);

  // 1 cup b = b for the constant unit 0-cochain
  auto one = Cochain<R>::zero(x, 0);
  for (int v = 0; v < x.n_cells(0); ++v) one.v.set(v, T::one());
  auto gamma = rng.cochain<R>(x, 1, Support::Free, 100);
  CHECK(cup(one, gamma).v == gamma.v);

  // (indicator of v0) cup gamma on edge v0v1 equals gamma(v0v1)
  auto ind = unit_cochain(x, 0, 0);
  auto prod = cup(ind, gamma);
  CHECK(prod.v.at(0) == gamma.v.at(0));
  CHECK(prod.v.at(1) == T::from_int(0));  // front vertex of [1,2] is v1

  // Leibniz rule on torus2(3,3), random pairs, all degree splits
  auto t2 = build_sigma("torus2(3,3)");
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; p + q + 1 <= 2; ++q)
      for (int trial = 0; trial < 15; ++trial) {
        auto a = rng.cochain<R>(t2, p, Support::Free);
        auto b = rng.cochain<R>(t2, q, Support::Free);
        auto lhs = coboundary(cup(a, b));
        auto rhs = cup(coboundary(a), b);
        auto sign = (p % 2 == 0) ? T::one() : -T::one();
        rhs.v.axpy(sign, cup(a, coboundary(b)).v);
        CHECK(lhs.v == rhs.v);
      }
}

TEST_CASE("cup Leibniz on the product spacetime") {
  TimeAxis t(6, 1, 3);
  ProductComplex m(t, build_sigma("torus2(3,3)"));
  Rng rng(37);
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; p + q + 1 <= m.dimension(); ++q)
      for (int trial = 0; trial < 6; ++trial) {
        auto a = rng.cochain<R>(m, p, Support::Free, 25);
        auto b = rng.cochain<R>(m, q, Support::Free, 25);
        auto lhs = coboundary(cup(a, b));
        auto rhs = cup(coboundary(a), b);
        auto sign = (p % 2 == 0) ? T::one() : -T::one();
        rhs.v.axpy(sign, cup(a, coboundary(b)).v);
        CHECK(lhs.v == rhs.v);
      }
}

TEST_CASE("integrate: fundamental cocycle and explicit circle sum") {
  auto x = build_sigma("circle(3)");
  auto c = Cochain<R>::zero(x, 1);
  for (int e = 0; e < 3; ++e) c.v.set(e, T::from_int(x.fundamental_sign(e)));
  CHECK(integrate(c) == T::from_int(3));

  Rng rng(3);
  auto gamma = rng.cochain<R>(x, 1, Support::Free, 100);
  CHECK(integrate(gamma) == gamma.v.at(0) + gamma.v.at(1) + gamma.v.at(2));

  CHECK_THROWS_AS(integrate(rng.cochain<R>(x, 0, Support::Free)), error);
}

TEST_CASE("discrete Stokes") {
  TimeAxis t(8, 2, 4);
  ProductComplex m(t, build_sigma("circle(3)"));
  Rng rng(17);
  int md = m.dimension() - 1;

  // compactly supported: integrate(d omega) = 0
  for (int trial = 0; trial < 20; ++trial) {
    auto w = rng.cochain<R>(m, md, Support::Compact);
    CHECK(integrate(coboundary(w)) == T::from_int(0));
  }
  // TC suffices on a closed Cauchy surface
  for (int trial = 0; trial < 20; ++trial) {
    auto w = rng.cochain<R>(m, md, Support::TC);
    CHECK(integrate(coboundary(w)) == T::from_int(0));
  }
  // the sharp statement: vanishing exactly on the boundary-critical cells
  for (int trial = 0; trial < 20; ++trial) {
    auto w = rng.cochain<R>(m, md, Support::Free);
    Cochain<R> trimmed = w;
    trimmed.v.clear();
    for (auto& e : w.v.nz)
      if (!m.on_stokes_boundary(md, e.first)) trimmed.v.nz.push_back(e);
    CHECK(integrate(coboundary(trimmed)) == T::from_int(0));
  }

  // with spatial ends, an SC cochain may integrate d to nonzero, but a
  // Compact one never does
  ProductComplex mw(t, build_sigma("path(4)"));
  for (int trial = 0; trial < 20; ++trial) {
    auto w = rng.cochain<R>(mw, mw.dimension() - 1, Support::Compact);
    CHECK(integrate(coboundary(w)) == T::from_int(0));
  }
}

TEST_CASE("pairing patterns and bilinearity") {
  TimeAxis t(8, 2, 4);
  ProductComplex m(t, build_sigma("circle(3)"));
  Rng rng(29);
  auto a = rng.cochain<R>(m, 1, Support::SC);
  auto b = rng.cochain<R>(m, 1, Support::TC);
  auto z = Cochain<R>::zero(m, 1, Support::Compact);
  CHECK(pairing(z, support_project(b, Support::Free)) == T::from_int(0));
  CHECK_NOTHROW(pairing(a, b));
  CHECK_NOTHROW(pairing(b, a));
  CHECK_THROWS_AS(pairing(support_project(a, Support::Free),
                          support_project(b, Support::Free)),
                  error);
  CHECK_THROWS_AS(pairing(a, support_project(b, Support::SC)), error);

  // <d alpha, beta> = (-1)^{|alpha|+1} <alpha, d beta> for SC/TC operands
  for (int trial = 0; trial < 20; ++trial) {
    auto alpha = rng.cochain<R>(m, 0, Support::SC);
    auto beta = rng.cochain<R>(m, 1, Support::TC);
    auto lhs = pairing(coboundary(alpha), beta);
    auto rhs = pairing(alpha, coboundary(beta));
    CHECK(lhs == -rhs);  // (-1)^{0+1}
  }
}

TEST_CASE("decompose_types and support_project") {
  TimeAxis t(8, 2, 4);
  ProductComplex m(t, build_sigma("circle(3)"));
  Rng rng(41);
  auto c = rng.cochain<R>(m, 1, Support::Free);
  auto [c1, c2] = decompose_types(c);
  auto sum = c1.v;
  sum.axpy(T::one(), c2.v);
  CHECK(sum == c.v);
  for (auto& e : c1.v.nz) CHECK(m.decode(1, e.first).type == 1);
  for (auto& e : c2.v.nz) CHECK(m.decode(1, e.first).type == 2);

  auto p = support_project(c, Support::Compact);
  CHECK(is_supported(p, Support::Compact));
  CHECK(support_project(p, Support::Compact).v == p.v);  // idempotent
  CHECK(support_project(c, Support::Free).v == c.v);
}

TEST_CASE("time bump validation") {
  TimeAxis t(8, 2, 4);
  auto b = TimeBump<R>::single_edge(t, 4);
  CHECK_NOTHROW(b.validate(t));
  CHECK_THROWS_AS(TimeBump<R>::single_edge(t, 0), error);  // collar edge
  TimeBump<R> bad;
  bad.a.assign(t.n_edges(), T::zero());
  bad.a[3] = T::from_fraction(1, 2);
  CHECK_THROWS_AS(bad.validate(t), error);  // sums to 1/2
}

TEST_CASE("cochain serialization round trip") {
  auto x = build_sigma("circle(3)");
  Rng rng(2);
  auto c = rng.cochain<R>(x, 1, Support::Free, 100);
  auto text = to_lines(c);
  CHECK(text.find("1 free") == 0);
  CHECK(to_lines(c) == text);  // deterministic
}
