#include "hjbsym/quadrature.hpp"

#include <cmath>

namespace hjbsym {

namespace {

// K15 nodes (positive half) and weights; G7 weights on the shared nodes.
const double xk[8] = {0.0,
                      0.2077849550078985,
                      0.4058451513773972,
                      0.5860872354676911,
                      0.7415311855993945,
                      0.8648644233597691,
                      0.9491079123427585,
                      0.9914553711208126};
const double wk[8] = {0.2094821410847278,
                      0.2044329400752989,
                      0.1903505780647854,
                      0.1690047266392679,
                      0.1406532597155259,
                      0.1047900103222502,
                      0.06309209262997855,
                      0.02293532201052922};
const double wg[4] = {0.4179591836734694,
                      0.3818300505051189,
                      0.2797053914892767,
                      0.1294849661688697};

struct GK {
  double kronrod;
  double err;
};

GK gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  const double fc = f(c);
  double resk = wk[0] * fc;
  double resg = wg[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double fa = f(c - hw * xk[i]);
    const double fb = f(c + hw * xk[i]);
    resk += wk[i] * (fa + fb);
    if (i % 2 == 0) resg += wg[i / 2] * (fa + fb);
  }
  GK r;
  r.kronrod = resk * hw;
  r.err = std::abs((resk - resg) * hw);
  return r;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth) {
  const GK g = gk15(f, a, b);
  if (g.err <= tol || depth <= 0) return g.kronrod;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth - 1) +
         adapt(f, c, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  if (!(a < b)) return a == b ? 0.0 : -integrate(f, b, a, abs_tol, max_depth);
  return adapt(f, a, b, abs_tol, max_depth);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol) {
  auto g = [&](double u) {
    const double one_m = 1.0 - u;
    const double t = a + u / one_m;
    return f(t) / (one_m * one_m);
  };
  // stop just short of u=1; integrands here decay at least exponentially
  return integrate(g, 0.0, 1.0 - 1e-12, abs_tol);
}

}  // namespace hjbsym
