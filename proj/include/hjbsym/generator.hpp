#ifndef HJBSYM_GENERATOR_HPP
#define HJBSYM_GENERATOR_HPP

#include <functional>
#include <string>

#include "hjbsym/field.hpp"
#include "hjbsym/jet.hpp"

namespace hjbsym {

/// Point-symmetry vector field
///   X = xi_t d/dt + xi_l d/dl + xi_h d/dh + eta d/dV
/// with closed-form coefficient fields.
struct Generator {
  Field xi_t, xi_l, xi_h, eta;
  std::string name;

  Generator scaled(double c) const {
    return Generator{c * xi_t, c * xi_l, c * xi_h, c * eta, name};
  }
  Generator plus(const Generator& o) const {
    return Generator{xi_t + o.xi_t, xi_l + o.xi_l, xi_h + o.xi_h, eta + o.eta,
                     name + "+" + o.name};
  }
};

/// Coefficients of the second prolongation acting on (V_t, V_l, V_h, V_ll,
/// V_lh, V_hh).  Computed for generators with xi_t = xi_t(t) and spatial xi
/// independent of V, which covers the catalogs and their brackets.
struct Prolonged {
  double eta_t, eta_l, eta_h;
  double eta_ll, eta_lh, eta_hh;
};

Prolonged prolong2(const Generator& g, const JetPoint& j);

/// Commutator [a,b]; coefficient fields are built symbolically so brackets
/// can be nested (Jacobi tests, basis-change checks).
Generator lie_bracket(const Generator& a, const Generator& b);

/// Smooth test surface V = S(t,l,h) with exact derivatives, for the flow
/// transport oracle.
struct TestSurface {
  std::function<double(double, double, double)> value;
  // first and second derivative callbacks by coordinate index (0=t,1=l,2=h)
  std::function<double(int, double, double, double)> d1;
  std::function<double(int, int, double, double, double)> d2;
};

/// Advects the surface one Euler step of size eps along g, re-derives the
/// transported jet by a quadratic least-squares fit, and compares with the
/// jet predicted by eps * prolong2.  Returns the max abs discrepancy across
/// the six prolonged coefficients; O(eps^2) for smooth data.
double flow_transport_check(const Generator& g, const TestSurface& surf,
                            double eps, double t0, double l0, double h0);

}  // namespace hjbsym

#endif
