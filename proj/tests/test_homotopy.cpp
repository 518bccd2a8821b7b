#include <catch2/catch_amalgamated.hpp>

#include "cdec/fixtures.hpp"
#include "cdec/homotopy.hpp"
#include "cdec/rng.hpp"

using namespace cdec;
using R = Rational;
using T = scalar_traits<R>;

namespace {

struct Fx {
  ProductComplex m;
  TimeBump<R> bump;
  Fx(TimeAxis t, const char* sigma)
      : m(t, build_sigma(sigma)),
        bump(TimeBump<R>::single_edge(t, t.base_slice)) {}
};

// dP - Pd - (-1)^k (pi* s* - id) applied to c must vanish
void check_P_identity(const Fx& f, const Cochain<R>& c) {
  int k = c.degree;
  auto lhs = coboundary(homotopy_P(c)).v;
  if (k < f.m.dimension()) {
    auto pd = homotopy_P(support_project(coboundary(c), Support::SC));
    lhs.axpy(-T::one(), pd.v);
  }
  auto rhs = pullback_pi(f.m, restrict_s(c)).v;
  rhs.axpy(-T::one(), c.v);
  rhs.scale(k % 2 == 0 ? T::one() : -T::one());
  lhs.axpy(-T::one(), rhs);
  CHECK(lhs.empty());
}

void check_Q_identity(const Fx& f, const Cochain<R>& c) {
  int k = c.degree;
  auto lhs = coboundary(homotopy_Q(c, f.bump)).v;
  if (k < f.m.dimension()) {
    auto qd = homotopy_Q(support_project(coboundary(c), Support::TC), f.bump);
    lhs.axpy(-T::one(), qd.v);
  }
  auto ei = extend_e(f.m, fiber_integrate_i(c), f.bump).v;
  ei.axpy(-T::one(), c.v);
  ei.scale(k % 2 == 0 ? T::one() : -T::one());
  lhs.axpy(-T::one(), ei);
  CHECK(lhs.empty());
}

}  // namespace

TEST_CASE("pi* and s*: chain maps, section identity, support rules") {
  Fx f(TimeAxis(8, 2, 4), "path(6)");
  Rng rng(101);
  for (int k = 0; k <= f.m.sigma().dimension(); ++k) {
    auto phi = rng.cochain<R>(f.m.sigma(), k, Support::Compact);
    // s* pi* = id
    CHECK(restrict_s(pullback_pi(f.m, phi)).v == phi.v);
    // chain map
    if (k < f.m.sigma().dimension()) {
      auto lhs = coboundary(pullback_pi(f.m, phi)).v;
      auto rhs = pullback_pi(f.m, coboundary(phi)).v;
      CHECK(lhs == rhs);
    }
    // support rule: compact pulls back to SC
    CHECK(is_supported(pullback_pi(f.m, phi), Support::SC));
  }
  // pure type-2 cochain restricts to zero
  auto c = Cochain<R>::zero(f.m, 1, Support::Free);
  c.v.set(f.m.id2(1, 3, 2), T::from_int(5));
  CHECK(restrict_s(c).v.empty());
  // the unit 0-cochain pulls back to the constant 1
  auto one = Cochain<R>::zero(f.m.sigma(), 0);
  for (int v = 0; v < f.m.sigma().n_cells(0); ++v) one.v.set(v, T::one());
  auto pi_one = pullback_pi(f.m, one);
  CHECK(pi_one.v.size() == f.m.n1(0));
}

TEST_CASE("P: prefix sum example and SC preservation") {
  Fx f(TimeAxis(8, 2, 4), "circle(3)");
  int n0 = f.m.time().base_slice;
  // single type-2 coefficient at time-edge (n0 -> n0+1) tensor a vertex
  auto c = Cochain<R>::zero(f.m, 1, Support::SC);
  c.v.set(f.m.id2(1, n0, 1), T::one());
  auto p = homotopy_P(c);
  for (int i = 0; i < 8; ++i) {
    R expect = i >= n0 + 1 ? T::one() : T::zero();
    CHECK(p.v.at(f.m.id1(0, i, 1)) == expect);
  }
  // P kills type-1 cochains
  auto t1 = Cochain<R>::zero(f.m, 1, Support::SC);
  t1.v.set(f.m.id1(1, 2, 0), T::from_int(3));
  CHECK(homotopy_P(t1).v.empty());
  // P requires SC input
  Fx fw(TimeAxis(8, 2, 4), "path(6)");
  Rng rng(7);
  auto bad = rng.cochain<R>(fw.m, 1, Support::Free);
  bool hits_end = !is_supported(bad, Support::SC);
  if (hits_end) CHECK_THROWS_AS(homotopy_P(bad), error);
}

TEST_CASE("P chain homotopy identity, all degrees, two fixtures") {
  Rng rng(211);
  for (Fx f : {Fx(TimeAxis(8, 2, 4), "circle(3)"), Fx(TimeAxis(6, 1, 3), "torus2(3,3)")}) {
    for (int k = 0; k <= f.m.dimension(); ++k)
      for (int trial = 0; trial < 12; ++trial)
        check_P_identity(f, rng.cochain<R>(f.m, k, Support::SC));
  }
  // also on a fixture with spatial ends
  Fx fw(TimeAxis(8, 2, 4), "path(6)");
  for (int k = 0; k <= fw.m.dimension(); ++k)
    for (int trial = 0; trial < 12; ++trial)
      check_P_identity(fw, rng.cochain<R>(fw.m, k, Support::SC));
}

TEST_CASE("i and e: chain maps and section identity") {
  Fx f(TimeAxis(8, 2, 4), "circle(3)");
  Rng rng(31);
  // i e = id
  for (int k = 0; k <= f.m.sigma().dimension(); ++k) {
    auto psi = rng.cochain<R>(f.m.sigma(), k, Support::Free);
    CHECK(fiber_integrate_i(extend_e(f.m, psi, f.bump)).v == psi.v);
  }
  // i of a type-1 cochain vanishes
  auto t1 = Cochain<R>::zero(f.m, 1, Support::TC);
  t1.v.set(f.m.id1(1, 3, 1), T::from_int(2));
  CHECK(fiber_integrate_i(t1).v.empty());
  // d i = i d on random TC cochains
  for (int k = 1; k < f.m.dimension(); ++k)
    for (int trial = 0; trial < 12; ++trial) {
      auto c = rng.cochain<R>(f.m, k, Support::TC);
      auto lhs = coboundary(fiber_integrate_i(c)).v;
      auto rhs = fiber_integrate_i(support_project(coboundary(c), Support::TC)).v;
      CHECK(lhs == rhs);
    }
  // d e = e d
  for (int k = 0; k < f.m.sigma().dimension(); ++k)
    for (int trial = 0; trial < 12; ++trial) {
      auto psi = rng.cochain<R>(f.m.sigma(), k, Support::Free);
      auto lhs = coboundary(extend_e(f.m, psi, f.bump)).v;
      auto rhs = extend_e(f.m, coboundary(psi), f.bump).v;
      CHECK(lhs == rhs);
    }
  // a one-edge bump gives exactly one nonzero time slot
  auto psi = rng.cochain<R>(f.m.sigma(), 1, Support::Free, 100);
  auto e = extend_e(f.m, psi, f.bump);
  for (auto& en : e.v.nz) CHECK(f.m.decode(2, en.first).t == f.m.time().base_slice);
}

TEST_CASE("Q: bump image collapses, identity holds, TC preserved") {
  Fx f(TimeAxis(8, 2, 4), "circle(3)");
  Rng rng(47);
  // Q(e(psi)) = 0 with the same bump
  for (int k = 0; k <= f.m.sigma().dimension(); ++k) {
    auto psi = rng.cochain<R>(f.m.sigma(), k, Support::Free);
    CHECK(homotopy_Q(extend_e(f.m, psi, f.bump), f.bump).v.empty());
  }
  // single deep source: support confined between source and bump
  auto c = Cochain<R>::zero(f.m, 1, Support::TC);
  c.v.set(f.m.id2(1, 2, 0), T::one());  // edge 2->3, bump at edge 4
  auto q = homotopy_Q(c, f.bump);
  for (auto& e : q.v.nz) {
    auto ref = f.m.decode(0, e.first);
    CHECK(ref.t >= 3);
    CHECK(ref.t <= 4);
  }
  // identity on random TC inputs, all degrees, two fixtures
  Rng rng2(53);
  for (Fx g : {Fx(TimeAxis(8, 2, 4), "circle(3)"), Fx(TimeAxis(6, 1, 3), "torus2(3,3)")}) {
    for (int k = 0; k <= g.m.dimension(); ++k)
      for (int trial = 0; trial < 12; ++trial)
        check_Q_identity(g, rng2.cochain<R>(g.m, k, Support::TC));
  }
}

TEST_CASE("compatibility at cochain level: <pi* phi, e psi> = <phi, psi>") {
  for (Fx f : {Fx(TimeAxis(8, 2, 4), "circle(3)"),       // odd spacetime dim
               Fx(TimeAxis(6, 1, 3), "torus2(3,3)")}) {  // even spacetime dim
    Rng rng(61);
    int n = f.m.sigma().dimension();
    for (int k = 0; k <= n; ++k) {
      for (int trial = 0; trial < 10; ++trial) {
        auto phi = rng.cochain<R>(f.m.sigma(), k, Support::Compact);
        auto psi = rng.cochain<R>(f.m.sigma(), n - k, Support::Free);
        auto lhs = pairing(pullback_pi(f.m, phi), extend_e(f.m, psi, f.bump));
        auto rhs = integrate(cup(phi, psi));
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("isomorphism certificates") {
  TimeAxis t(8, 2, 4);
  ProductComplex cyl(t, build_sigma("circle(3)"));
  auto sc = verify_sc_isomorphism<R>(cyl);
  CHECK(sc.pass);
  CHECK(sc.dims_spacetime == std::vector<int>{1, 1, 0});

  auto bump = TimeBump<R>::single_edge(t, 4);
  auto tc = verify_tc_isomorphism<R>(cyl, bump);
  CHECK(tc.pass);
  CHECK(tc.dims_spacetime == std::vector<int>{0, 1, 1});

  ProductComplex line(t, build_sigma("path(6)"));
  auto scl = verify_sc_isomorphism<R>(line);
  CHECK(scl.pass);
  CHECK(scl.dims_spacetime == std::vector<int>{0, 1, 0});

  ProductComplex einstein(t, build_sigma("sphere3"));
  auto sce = verify_sc_isomorphism<R>(einstein);
  CHECK(sce.pass);
  CHECK(sce.dims_spacetime == std::vector<int>{1, 0, 0, 1, 0});
  auto tce = verify_tc_isomorphism<R>(einstein, bump);
  CHECK(tce.pass);
  CHECK(tce.dims_spacetime == std::vector<int>{0, 1, 0, 0, 1});
}

TEST_CASE("base slice independence of induced isomorphisms") {
  // the embedding slice is arbitrary among interior slices
  for (int base : {2, 3, 5}) {
    TimeAxis t(8, 2, base);
    ProductComplex cyl(t, build_sigma("circle(3)"));
    CHECK(verify_sc_isomorphism<R>(cyl).pass);
    auto bump = TimeBump<R>::single_edge(t, base);
    CHECK(verify_tc_isomorphism<R>(cyl, bump).pass);
  }
}
