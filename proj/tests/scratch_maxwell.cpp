#include <cstdio>

#include "cdec/fixtures.hpp"
#include "cdec/maxwell.hpp"

using namespace cdec;
using R = Rational;
using T = scalar_traits<R>;

int main(int argc, char** argv) {
  int N = argc > 1 ? atoi(argv[1]) : 12;
  int obs = argc > 2 ? atoi(argv[2]) : 3;
  int deep = argc > 3 ? atoi(argv[3]) : 5;
  const char* sigma = argc > 4 ? argv[4] : "circle(3)";
  int k = argc > 5 ? atoi(argv[5]) : 1;

  TimeAxis t(N, 2, N / 2);
  ProductComplex m(t, build_sigma(sigma));
  Metric<R> g(m, T::from_fraction(1, 2));
  MaxwellWindows w;
  w.obs_margin = obs;
  w.deep_margin = deep;

  printf("fixture %s N=%d k=%d obs=%d deep=%d\n", m.name().c_str(), N, k, obs, deep);

  auto X = tc_source_quotient_potential(g, k, w);
  printf("  potential sources  dim X/N           = %d\n", X.dim());
  auto SA = solution_quotient_potential(g, k, Support::Free, w);
  printf("  potential solutions dim S_A/G_A |W   = %d (full kernel %d)\n",
         SA.classes.dim(), int(SA.full.size()));
  auto par = potential_parametrization(g, k, w);
  printf("  parametrization: %s %s\n", par.pass ? "PASS" : "FAIL",
         par.failure.c_str());

  auto EA = build_observables(g, k, Flavor::Potential, w);
  printf("  observables dim E_A                  = %d (gauge inv %d)\n",
         EA.classes.dim(), int(observables_gauge_invariant(g, EA)));
  auto opt = verify_potential_optimality(g, k, w);
  printf("  optimality: %s %s (dims %d vs %d)\n", opt.pass ? "PASS" : "FAIL",
         opt.failure.c_str(), opt.dim_observables, opt.dim_solutions);

  auto XF = tc_source_quotient_faraday(g, k, Support::TC);
  printf("  faraday sources dim                  = %d\n", XF.classes.dim());
  auto SF = solution_space_faraday(g, k, Support::Free, w);
  printf("  faraday solutions dim S_F |W         = %d (full kernel %d)\n",
         SF.classes.dim(), int(SF.full.size()));
  auto fpar = faraday_parametrization(g, k, w);
  printf("  faraday parametrization: %s %s\n", fpar.pass ? "PASS" : "FAIL",
         fpar.failure.c_str());
  auto fopt = verify_faraday_optimality(g, k, w);
  printf("  faraday optimality: %s %s (dims %d vs %d)\n",
         fopt.pass ? "PASS" : "FAIL", fopt.failure.c_str(),
         fopt.dim_observables, fopt.dim_solutions);
  return 0;
}
