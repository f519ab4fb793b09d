#ifndef HJBSYM_SOLVERS_HPP
#define HJBSYM_SOLVERS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "hjbsym/pde.hpp"
#include "hjbsym/reductions.hpp"

namespace hjbsym {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Discount margin D = kappa - r g - g (alpha-r)^2 / (2 sigma^2 (1-g)).
double merton_margin(const ModelParams& p);

/// The classical constant A with V = e^{-kappa t}(A l^gamma - (1-g)/(g kappa))
/// solving the eta=delta=mu=0 problem; bracketed root of
/// A D = ((1-g)^2/g)(A g)^{-g/(1-g)}.  Requires D > 0.
double merton_constant(const ModelParams& p);

/// Additive constant of the log-utility closed form Y(z) = log(z+s) + b_M.
double merton_log_constant(const ModelParams& p);

/// Income shift s = delta / (r - mu + delta) used by the boundary closures.
double income_shift(const ModelParams& p);

/// Cubic spline (not-a-knot) with first/second derivative evaluation.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double value(double x) const;
  double deriv(double x) const;
  double second(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  int find(double x) const;
  std::vector<double> x_, y_, b_, c_, d_;  // y + cubic coefficients per span
};

/// Converged discrete solution of a reduced ODE.
struct Grid1D {
  ReductionId case_id;
  std::vector<double> z;
  std::vector<double> Y;
  CubicSpline spline;
  int newton_iterations = 0;
  double final_residual = 0.0;
  double shift = 0.0;  ///< income shift s used by the boundary rows
};

struct OdeOptions {
  int max_newton = 200;
  double tol = 1e-10;
  double shift_scale = 1.0;  ///< multiplies the income shift (robustness runs)
};

/// Damped-Newton collocation solve of the reduced ODE on a log-spaced grid.
/// Right boundary: Dirichlet from the Merton asymptote; left: income-shifted
/// Robin.  Converged iff the residual inf-norm <= tol.
Grid1D solve_ode(ReductionId c, const ModelParams& p, double z0, double z1,
                 int n, const OdeOptions& opt = {});

/// Residual of the reduced ODE at one point (closed form; used by the
/// manifold-consistent second-derivative reconstruction).
double ode_residual(ReductionId c, const ModelParams& p, double z, double Y,
                    double Yz, double Yzz);

/// Discrete solution of a reduced 2D equation, marched in the time-like
/// variable from tau_max down to 0.  Levels are stored ascending in tau.
struct Grid2D {
  ReductionId case_id;
  std::vector<double> z;
  std::vector<double> tau;
  std::vector<std::vector<double>> W;  ///< W[level][node]
  int steps = 0;
  double max_step_residual = 0.0;
  double shift = 0.0;
};

struct Pde2DOptions {
  double tol = 1e-9;
  int max_newton = 60;
  bool linear_smoke_test = false;  ///< strips nonlinear/source terms (tests)
};

/// Backward implicit marching for {HARA_GEN_H3, HARA_RES_H3, HARA_EXP_H2,
/// LOG_EXP_H2, LOG_GEN_H1 (beta=0)}.  The tau-type cases march the scaled
/// unknown U = e^{gamma tau} W, whose reduced equation is autonomous and has
/// the separable solutions as steady states; the seed supplies those levels.
Grid2D solve_pde2d(ReductionId c, const ModelParams& p,
                   const SurvivalFn& survival, double z0, double z1, int n,
                   double tau_max, int m, const Pde2DOptions& opt = {});

struct Reconstruction {
  double V;
  Policy policy;
};

/// Value and policy at (t, l, h) from a converged ODE solution.  The jet is
/// placed on the solution manifold: Y, Y_z from the spline, Y_zz from the
/// reduced equation itself.
Reconstruction reconstruct_value(const ReductionCase& rc, const Grid1D& sol,
                                 double t, double l, double h);

/// Value and policy from a 2D solution ((z,t)-type cases).
Reconstruction reconstruct_value(const ReductionCase& rc, const Grid2D& sol,
                                 double t, double l, double h);

/// Newton solve of the reduced equation for W11 given the other jet slots
/// (places reconstructed jets on the solution manifold).
double manifold_second_derivative(const ReductionCase& rc, const ReducedJet& rj,
                                  double guess);

/// Merton-asymptote boundary coefficient g(t) with W ~ g(t) (z+s)^gamma for
/// the general-survival HARA case (quadrature; closed form when exponential).
double hara_boundary_g(const ModelParams& p, const SurvivalFn& s, double t);

/// Boundary pieces of the general-survival log case: W ~ G(t) log(z+s) + H(t).
double log_boundary_G(const SurvivalFn& s, double t);
double log_boundary_H(const ModelParams& p, const SurvivalFn& s, double t);

}  // namespace hjbsym

#endif
