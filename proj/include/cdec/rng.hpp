#pragma once

#include <random>

#include "cdec/cochain.hpp"

namespace cdec {

/// Deterministic random cochains for identity suites; mt19937_64 is fully
/// specified by the standard, so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  int uniform(int lo, int hi) {  // inclusive bounds
    return int(g_() % std::uint64_t(hi - lo + 1)) + lo;
  }

  template <class S>
  S small_scalar() {
    // small nonzero-biased integers keep exact eliminations cheap
    return scalar_traits<S>::from_int(uniform(-9, 9));
  }

  template <class S, class X>
  Cochain<S> cochain(const X& x, int k, Support s, int fill_percent = 40) {
    Cochain<S> c = Cochain<S>::zero(x, k, s);
    for (int id = 0; id < x.n_cells(k); ++id) {
      if (!x.allowed(k, id, s)) continue;
      if (uniform(0, 99) >= fill_percent) continue;
      S v = small_scalar<S>();
      if (!scalar_traits<S>::is_zero(v)) c.v.nz.push_back({id, v});
    }
    return c;
  }

  std::mt19937_64& gen() { return g_; }

 private:
  std::mt19937_64 g_;
};

}  // namespace cdec
