#ifndef HJBSYM_QUADRATURE_HPP
#define HJBSYM_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace hjbsym {

/// Adaptive Gauss-Kronrod (G7,K15) integration on [a,b] to an absolute
/// tolerance.  Bisects intervals whose Kronrod/Gauss discrepancy exceeds the
/// local budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 48);

/// Integral over [a, +inf) of a decaying integrand, by mapping the tail
/// t = a + u/(1-u) onto u in [0,1).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol = 1e-12);

}  // namespace hjbsym

#endif
