#include "hjbsym/solvers.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "hjbsym/quadrature.hpp"

namespace hjbsym {

double merton_margin(const ModelParams& p) {
  const double ar = p.alpha - p.r;
  return p.kappa - p.r * p.gamma -
         p.gamma * ar * ar / (2.0 * p.sigma * p.sigma * (1.0 - p.gamma));
}

double merton_constant(const ModelParams& p) {
  const double D = merton_margin(p);
  if (!(D > 0.0))
    throw SolverError(
        "merton_constant: no finite value (kappa too small for gamma)");
  const double g = p.gamma, g1 = 1.0 - g;
  auto f = [&](double A) {
    return A * D - g1 * g1 / g * std::pow(A * g, -g / g1);
  };
  // f is strictly increasing with f(0+) = -inf, f(inf) = +inf
  double lo = 1e-12, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if ((hi - lo) / hi < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

double merton_log_constant(const ModelParams& p) {
  const double ar = p.alpha - p.r;
  return (p.r + ar * ar / (2.0 * p.sigma * p.sigma)) / p.kappa +
         std::log(p.kappa) - 1.0;
}

double income_shift(const ModelParams& p) {
  return p.delta / (p.r - p.mu + p.delta);
}

// ---------------------------------------------------------------------------
// cubic spline (not-a-knot)

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const int n = static_cast<int>(x_.size());
  if (n < 4) throw std::invalid_argument("CubicSpline: need >= 4 points");
  std::vector<double> hspan(n - 1);
  for (int i = 0; i + 1 < n; ++i) hspan[i] = x_[i + 1] - x_[i];

  Eigen::SparseMatrix<double> A(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  // not-a-knot end rows
  trip.emplace_back(0, 0, hspan[1]);
  trip.emplace_back(0, 1, -(hspan[0] + hspan[1]));
  trip.emplace_back(0, 2, hspan[0]);
  trip.emplace_back(n - 1, n - 3, hspan[n - 2]);
  trip.emplace_back(n - 1, n - 2, -(hspan[n - 3] + hspan[n - 2]));
  trip.emplace_back(n - 1, n - 1, hspan[n - 3]);
  for (int i = 1; i + 1 < n; ++i) {
    trip.emplace_back(i, i - 1, hspan[i - 1] / 6.0);
    trip.emplace_back(i, i, (hspan[i - 1] + hspan[i]) / 3.0);
    trip.emplace_back(i, i + 1, hspan[i] / 6.0);
    rhs(i) =
        (y_[i + 1] - y_[i]) / hspan[i] - (y_[i] - y_[i - 1]) / hspan[i - 1];
  }
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success)
    throw SolverError("CubicSpline: factorization failed");
  Eigen::VectorXd M = lu.solve(rhs);

  b_.resize(n - 1);
  c_.resize(n - 1);
  d_.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    c_[i] = 0.5 * M(i);
    d_[i] = (M(i + 1) - M(i)) / (6.0 * hspan[i]);
    b_[i] = (y_[i + 1] - y_[i]) / hspan[i] -
            hspan[i] * (2.0 * M(i) + M(i + 1)) / 6.0;
  }
}

int CubicSpline::find(double x) const {
  const int n = static_cast<int>(x_.size());
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  int i = static_cast<int>(it - x_.begin()) - 1;
  return std::clamp(i, 0, n - 2);
}

double CubicSpline::value(double x) const {
  const int i = find(x);
  const double dx = x - x_[i];
  return y_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
}

double CubicSpline::deriv(double x) const {
  const int i = find(x);
  const double dx = x - x_[i];
  return b_[i] + dx * (2.0 * c_[i] + 3.0 * dx * d_[i]);
}

double CubicSpline::second(double x) const {
  const int i = find(x);
  const double dx = x - x_[i];
  return 2.0 * c_[i] + 6.0 * dx * d_[i];
}

// ---------------------------------------------------------------------------
// shared damped-Newton solve of a banded nonlinear system

namespace {

struct NewtonProblem {
  // fills residual and Jacobian triplets for the current state
  std::function<void(const std::vector<double>&, Eigen::VectorXd&,
                     std::vector<Eigen::Triplet<double>>&)>
      assemble;
  // true when a candidate state is evaluable (positivity/concavity guards)
  std::function<bool(const std::vector<double>&)> feasible;
};

struct NewtonResult {
  int iterations = 0;
  double residual = 0.0;
};

NewtonResult damped_newton(std::vector<double>& Y, const NewtonProblem& prob,
                           double tol, int max_iter, const std::string& what) {
  const int n = static_cast<int>(Y.size());
  Eigen::VectorXd R(n);
  std::vector<Eigen::Triplet<double>> trip;
  NewtonResult res;
  if (!prob.feasible(Y)) throw SolverError(what + ": infeasible seed");
  for (int it = 0; it < max_iter; ++it) {
    trip.clear();
    prob.assemble(Y, R, trip);
    const double rnorm = R.cwiseAbs().maxCoeff();
    res.iterations = it;
    res.residual = rnorm;
    if (rnorm <= tol) return res;

    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
    if (lu.info() != Eigen::Success)
      throw SolverError(what + ": singular Jacobian");
    Eigen::VectorXd step = lu.solve(-R);

    const double r2 = R.squaredNorm();
    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> trial(n);
    Eigen::VectorXd R2(n);
    for (int back = 0; back < 30; ++back) {
      for (int i = 0; i < n; ++i) trial[i] = Y[i] + alpha * step(i);
      if (prob.feasible(trial)) {
        trip.clear();
        prob.assemble(trial, R2, trip);
        if (R2.squaredNorm() <= (1.0 - 1e-4 * alpha) * r2) {
          Y = trial;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw SolverError(what + ": Newton stagnation (damping exhausted), |R|=" +
                        std::to_string(rnorm));
  }
  throw SolverError(what + ": no convergence after " +
                    std::to_string(max_iter) +
                    " iterations, |R|=" + std::to_string(res.residual));
}

std::vector<double> log_spaced(double z0, double z1, int n) {
  std::vector<double> z(n);
  const double u0 = std::log(z0), du = (std::log(z1) - u0) / (n - 1);
  for (int i = 0; i < n; ++i) z[i] = std::exp(u0 + i * du);
  return z;
}

bool is_hara_case(ReductionId c) {
  return to_string(c).rfind("HARA", 0) == 0;
}

ReductionCase ode_case(ReductionId c, const ModelParams& p) {
  return make_reduction(c, p, SurvivalFn::exponential(p.d, p.kappa), {});
}

}  // namespace

double ode_residual(ReductionId c, const ModelParams& p, double z, double Y,
                    double Yz, double Yzz) {
  const ReductionCase rc = ode_case(c, p);
  ReducedJet j;
  j.v1 = z;
  j.W = Y;
  j.W1 = Yz;
  j.W11 = Yzz;
  return rc.corrected(j);
}

Grid1D solve_ode(ReductionId c, const ModelParams& p, double z0, double z1,
                 int n, const OdeOptions& opt) {
  if (!(z0 > 0.0) || !(z1 > z0)) throw std::invalid_argument("bad z domain");
  if (n < 64) throw std::invalid_argument("solve_ode: n >= 64");
  if (c != ReductionId::HARA_EXP_H8_ODE &&
      c != ReductionId::HARA_RES_H11_ODE && c != ReductionId::LOG_EXP_H8_ODE)
    throw std::invalid_argument("solve_ode: not an ODE case");
  const ReductionCase rc = ode_case(c, p);
  const bool hara = is_hara_case(c);
  const double s = income_shift(p) * opt.shift_scale;
  const double g = p.gamma;

  Grid1D sol;
  sol.case_id = c;
  sol.shift = s;
  sol.z = log_spaced(z0, z1, n);
  const double du = std::log(z1 / z0) / (n - 1);

  const double AM = hara ? merton_constant(p) : 0.0;
  const double bM = hara ? 0.0 : merton_log_constant(p);
  auto asym = [&](double z) {
    return hara ? AM * std::pow(z + s, g) : std::log(z + s) + bM;
  };
  sol.Y.resize(n);
  for (int i = 0; i < n; ++i) sol.Y[i] = asym(sol.z[i]);
  const double target = asym(z1);

  auto feasible = [&](const std::vector<double>& Y) {
    for (int i = 1; i + 1 < n; ++i) {
      const double dz = (Y[i + 1] - Y[i - 1]) / (2.0 * du);
      const double dzz = (Y[i + 1] - 2.0 * Y[i] + Y[i - 1]) / (du * du) - dz;
      if (!(dz / sol.z[i] > 1e-12)) return false;
      if (!(dzz / (sol.z[i] * sol.z[i]) < -1e-14)) return false;
    }
    return true;
  };

  auto assemble = [&](const std::vector<double>& Y, Eigen::VectorXd& R,
                      std::vector<Eigen::Triplet<double>>& trip) {
    using DT = D3;
    // left Robin: (z0+s) Y_z(z0) = gamma Y(z0)  (HARA)  /  = 1  (LOG)
    {
      const DT y0 = DT::variable(Y[0], 0);
      const DT y1 = DT::variable(Y[1], 1);
      const DT y2 = DT::variable(Y[2], 2);
      const DT Yz = (-1.5 * y0 + 2.0 * y1 - 0.5 * y2) / (du * sol.z[0]);
      const DT row = hara ? (z0 + s) * Yz - g * y0 : (z0 + s) * Yz - 1.0;
      R(0) = row.v;
      for (int k = 0; k < 3; ++k) trip.emplace_back(0, k, row.d[k]);
    }
    for (int i = 1; i + 1 < n; ++i) {
      const DT ym = DT::variable(Y[i - 1], 0);
      const DT yc = DT::variable(Y[i], 1);
      const DT yp = DT::variable(Y[i + 1], 2);
      const DT Du = (yp - ym) / (2.0 * du);
      const DT D2u = (yp - 2.0 * yc + ym) / (du * du);
      ReducedJetT<DT> j;
      j.v1 = sol.z[i];
      j.W = yc;
      j.W1 = Du / sol.z[i];
      j.W11 = (D2u - Du) / (sol.z[i] * sol.z[i]);
      const DT row = rc.corrected_t(j);
      R(i) = row.v;
      for (int k = 0; k < 3; ++k) trip.emplace_back(i, i - 1 + k, row.d[k]);
    }
    {
      R(n - 1) = Y[n - 1] - target;
      trip.emplace_back(n - 1, n - 1, 1.0);
    }
  };

  const NewtonResult nr =
      damped_newton(sol.Y, NewtonProblem{assemble, feasible}, opt.tol,
                    opt.max_newton, "solve_ode(" + to_string(c) + ")");
  sol.newton_iterations = nr.iterations;
  sol.final_residual = nr.residual;
  sol.spline = CubicSpline(sol.z, sol.Y);
  return sol;
}

// ---------------------------------------------------------------------------
// boundary closures

double hara_boundary_g(const ModelParams& p, const SurvivalFn& s, double t) {
  if (s.is_exponential()) return merton_constant(p) * std::exp(-p.kappa * t);
  const double g = p.gamma, g1 = 1.0 - g;
  const double ar = p.alpha - p.r;
  const double B = p.r * g + g * ar * ar / (2.0 * p.sigma * p.sigma * g1);
  const double m = g1 * integrate_to_inf(
                            [&](double tau) {
                              return std::exp(B * (tau - t) / g1) *
                                     std::pow(s.eval(tau), 1.0 / g1);
                            },
                            t, 1e-13);
  return std::pow(m, g1) / g;
}

double log_boundary_G(const SurvivalFn& s, double t) {
  return -s.antideriv(t);
}

double log_boundary_H(const ModelParams& p, const SurvivalFn& s, double t) {
  const double ar = p.alpha - p.r;
  return integrate_to_inf(
      [&](double tau) {
        const double G = log_boundary_G(s, tau);
        const double phi = s.eval(tau);
        return (p.r + 0.5 * p.eta * p.eta - (p.mu - p.delta)) * G +
               ar * ar * G / (2.0 * p.sigma * p.sigma) -
               phi * (std::log(G) - std::log(phi) + 1.0);
      },
      t, 1e-13);
}

// ---------------------------------------------------------------------------
// 2D marching

Grid2D solve_pde2d(ReductionId c, const ModelParams& p,
                   const SurvivalFn& survival, double z0, double z1, int n,
                   double tau_max, int m, const Pde2DOptions& opt) {
  if (!(z0 > 0.0) || !(z1 > z0) || n < 8 || m < 3)
    throw std::invalid_argument("solve_pde2d: bad grid");
  const double g = p.gamma;
  const double s = income_shift(p);
  bool u_form = false;
  switch (c) {
    case ReductionId::HARA_GEN_H3:
    case ReductionId::LOG_GEN_H1:
    case ReductionId::LOG_EXP_H2:
      break;
    case ReductionId::HARA_EXP_H2:
    case ReductionId::HARA_RES_H3:
      u_form = true;
      break;
    default:
      throw std::invalid_argument("solve_pde2d: unsupported case " +
                                  to_string(c));
  }
  const ReductionCase rc = make_reduction(c, p, survival, {});

  Grid2D sol;
  sol.case_id = c;
  sol.shift = s;
  sol.z = log_spaced(z0, z1, n);
  const double du = std::log(z1 / z0) / (n - 1);
  const double dtau = tau_max / m;
  sol.tau.resize(m + 1);
  for (int j = 0; j <= m; ++j) sol.tau[j] = j * dtau;
  sol.W.assign(m + 1, std::vector<double>(n, 0.0));

  auto zderivs = [&](const std::vector<double>& W, int i, double& Wz,
                     double& Wzz) {
    const double Du = (W[i + 1] - W[i - 1]) / (2.0 * du);
    const double D2u = (W[i + 1] - 2.0 * W[i] + W[i - 1]) / (du * du);
    Wz = Du / sol.z[i];
    Wzz = (D2u - Du) / (sol.z[i] * sol.z[i]);
  };

  auto feasible = [&](const std::vector<double>& W) {
    if (opt.linear_smoke_test) return true;
    for (int i = 1; i + 1 < n; ++i) {
      double Wz, Wzz;
      zderivs(W, i, Wz, Wzz);
      if (!(Wz > 1e-12) || !(Wzz < -1e-14)) return false;
    }
    return true;
  };

  if (u_form) {
    // tau-type reduction: the scaled unknown U = e^{gamma tau} W obeys an
    // autonomous equation whose steady states are the separable solutions;
    // seed two levels with the reduced-ODE profile and march with one-sided
    // second-order tau stencils.
    const ReductionId ode_id = (c == ReductionId::HARA_EXP_H2)
                                   ? ReductionId::HARA_EXP_H8_ODE
                                   : ReductionId::HARA_RES_H11_ODE;
    const Grid1D ode = solve_ode(ode_id, p, z0, z1, n);
    std::vector<std::vector<double>> U(m + 1, std::vector<double>(n));
    U[m] = ode.Y;
    U[m - 1] = ode.Y;
    const double target = merton_constant(p) * std::pow(z1 + s, g);

    for (int j = m - 2; j >= 0; --j) {
      std::vector<double> cur = U[j + 1];
      const std::vector<double>& up1 = U[j + 1];
      const std::vector<double>& up2 = U[j + 2];
      auto assemble = [&](const std::vector<double>& Uj, Eigen::VectorXd& R,
                          std::vector<Eigen::Triplet<double>>& trip) {
        using DT = D3;
        {
          const DT y0 = DT::variable(Uj[0], 0);
          const DT y1 = DT::variable(Uj[1], 1);
          const DT y2 = DT::variable(Uj[2], 2);
          const DT Uz = (-1.5 * y0 + 2.0 * y1 - 0.5 * y2) / (du * sol.z[0]);
          const DT row = (z0 + s) * Uz - g * y0;
          R(0) = row.v;
          for (int k = 0; k < 3; ++k) trip.emplace_back(0, k, row.d[k]);
        }
        for (int i = 1; i + 1 < n; ++i) {
          const DT um = DT::variable(Uj[i - 1], 0);
          const DT uc = DT::variable(Uj[i], 1);
          const DT up = DT::variable(Uj[i + 1], 2);
          const DT Du = (up - um) / (2.0 * du);
          const DT D2u = (up - 2.0 * uc + um) / (du * du);
          const DT Uz = Du / sol.z[i];
          const DT Uzz = (D2u - Du) / (sol.z[i] * sol.z[i]);
          // one-sided second-order tau derivatives toward larger tau
          const DT Ut = (-1.5 * uc + 2.0 * up1[i] - 0.5 * up2[i]) / dtau;
          const DT Utt = (uc - 2.0 * up1[i] + up2[i]) / (dtau * dtau);
          const DT Utm =
              (-1.5 * um + 2.0 * up1[i - 1] - 0.5 * up2[i - 1]) / dtau;
          const DT Utp =
              (-1.5 * up + 2.0 * up1[i + 1] - 0.5 * up2[i + 1]) / dtau;
          const DT Uzt = (Utp - Utm) / (2.0 * du * sol.z[i]);
          ReducedJetT<DT> jet;
          jet.v1 = sol.z[i];
          jet.v2 = 0.0;  // autonomous in tau after the scaling
          jet.W = uc;
          jet.W1 = Uz;
          jet.W11 = Uzz;
          jet.W2 = Ut - g * uc;
          jet.W12 = Uzt - g * Uz;
          jet.W22 = Utt - 2.0 * g * Ut + g * g * uc;
          const DT row = rc.corrected_t(jet);
          R(i) = row.v;
          for (int k = 0; k < 3; ++k) trip.emplace_back(i, i - 1 + k, row.d[k]);
        }
        R(n - 1) = Uj[n - 1] - target;
        trip.emplace_back(n - 1, n - 1, 1.0);
      };
      const NewtonResult nr =
          damped_newton(cur, NewtonProblem{assemble, feasible}, opt.tol,
                        opt.max_newton, "solve_pde2d(tau step)");
      sol.max_step_residual = std::max(sol.max_step_residual, nr.residual);
      U[j] = cur;
      ++sol.steps;
    }
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i < n; ++i)
        sol.W[j][i] = std::exp(-g * sol.tau[j]) * U[j][i];
    return sol;
  }

  // (z,t) parabolic cases, Crank-Nicolson in t from tau_max down to 0
  auto right_bc = [&](double t) {
    switch (c) {
      case ReductionId::HARA_GEN_H3:
        return hara_boundary_g(p, survival, t) * std::pow(z1 + s, g);
      case ReductionId::LOG_GEN_H1:
        return log_boundary_G(survival, t) * std::log(z1 + s) +
               log_boundary_H(p, survival, t);
      default:  // LOG_EXP_H2
        return std::log(z1 + s) + merton_log_constant(p);
    }
  };
  auto robin_rhs = [&](double t) {
    switch (c) {
      case ReductionId::HARA_GEN_H3:
        return 0.0;  // homogeneous: (z0+s) W_z - gamma W = 0
      case ReductionId::LOG_GEN_H1:
        return log_boundary_G(survival, t);
      default:
        return 1.0;
    }
  };
  const bool hara_robin = (c == ReductionId::HARA_GEN_H3);
  for (int i = 0; i < n; ++i) {
    switch (c) {
      case ReductionId::HARA_GEN_H3:
        sol.W[m][i] =
            hara_boundary_g(p, survival, tau_max) * std::pow(sol.z[i] + s, g);
        break;
      case ReductionId::LOG_GEN_H1:
        sol.W[m][i] =
            log_boundary_G(survival, tau_max) * std::log(sol.z[i] + s) +
            log_boundary_H(p, survival, tau_max);
        break;
      default:
        sol.W[m][i] = opt.linear_smoke_test
                          ? 0.0
                          : std::log(sol.z[i] + s) + merton_log_constant(p);
        break;
    }
  }

  // space part F with the time slot zeroed: residual = W_t + F = 0
  auto space_F = [&](const ReducedJetT<D3>& jet) -> D3 {
    if (opt.linear_smoke_test) {
      const double z = jet.v1;
      return -p.kappa * jet.W +
             0.5 * p.eta * p.eta * (2.0 * z * jet.W1 + z * z * jet.W11) +
             (p.r * z + p.delta) * jet.W1 - (p.mu - p.delta) * z * jet.W1;
    }
    ReducedJetT<D3> q = jet;
    q.W2 = D3(0.0);
    return rc.corrected_t(q);
  };

  for (int j = m - 1; j >= 0; --j) {
    const double tj = sol.tau[j], tj1 = sol.tau[j + 1];
    const double bc_right = opt.linear_smoke_test ? 0.0 : right_bc(tj);
    const double rr = opt.linear_smoke_test ? 0.0 : robin_rhs(tj);
    const std::vector<double>& Wup = sol.W[j + 1];
    std::vector<double> cur = Wup;
    std::vector<double> Fup(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
      double Wz, Wzz;
      zderivs(Wup, i, Wz, Wzz);
      ReducedJetT<D3> jet;
      jet.v1 = sol.z[i];
      jet.v2 = tj1;
      jet.W = D3(Wup[i]);
      jet.W1 = D3(Wz);
      jet.W11 = D3(Wzz);
      Fup[i] = space_F(jet).v;
    }
    auto assemble = [&](const std::vector<double>& Wj, Eigen::VectorXd& R,
                        std::vector<Eigen::Triplet<double>>& trip) {
      using DT = D3;
      {
        const DT y0 = DT::variable(Wj[0], 0);
        const DT y1 = DT::variable(Wj[1], 1);
        const DT y2 = DT::variable(Wj[2], 2);
        DT row;
        if (opt.linear_smoke_test) {
          row = y0;  // Dirichlet 0
        } else {
          const DT Wz = (-1.5 * y0 + 2.0 * y1 - 0.5 * y2) / (du * sol.z[0]);
          row = hara_robin ? (z0 + s) * Wz - g * y0
                           : (z0 + s) * Wz - rr;
        }
        R(0) = row.v;
        for (int k = 0; k < 3; ++k) trip.emplace_back(0, k, row.d[k]);
      }
      for (int i = 1; i + 1 < n; ++i) {
        const DT wm = DT::variable(Wj[i - 1], 0);
        const DT wc = DT::variable(Wj[i], 1);
        const DT wp = DT::variable(Wj[i + 1], 2);
        const DT Du = (wp - wm) / (2.0 * du);
        const DT D2u = (wp - 2.0 * wc + wm) / (du * du);
        ReducedJetT<DT> jet;
        jet.v1 = sol.z[i];
        jet.v2 = tj;
        jet.W = wc;
        jet.W1 = Du / sol.z[i];
        jet.W11 = (D2u - Du) / (sol.z[i] * sol.z[i]);
        const DT Wt = (Wup[i] - wc) / dtau;
        const DT row = Wt + 0.5 * (space_F(jet) + Fup[i]);
        R(i) = row.v;
        for (int k = 0; k < 3; ++k) trip.emplace_back(i, i - 1 + k, row.d[k]);
      }
      {
        R(n - 1) = Wj[n - 1] - bc_right;
        trip.emplace_back(n - 1, n - 1, 1.0);
      }
    };
    const NewtonResult nr =
        damped_newton(cur, NewtonProblem{assemble, feasible}, opt.tol,
                      opt.max_newton, "solve_pde2d(t step)");
    sol.max_step_residual = std::max(sol.max_step_residual, nr.residual);
    sol.W[j] = cur;
    ++sol.steps;
  }
  return sol;
}

// ---------------------------------------------------------------------------
// reconstruction

double manifold_second_derivative(const ReductionCase& rc,
                                  const ReducedJet& rj, double guess) {
  // Newton for W11 with the reduced equation as the manifold constraint
  double x = guess;
  for (int it = 0; it < 50; ++it) {
    ReducedJetT<D3> j;
    j.v1 = rj.v1;
    j.v2 = rj.v2;
    j.W = D3(rj.W);
    j.W1 = D3(rj.W1);
    j.W2 = D3(rj.W2);
    j.W12 = D3(rj.W12);
    j.W22 = D3(rj.W22);
    j.W11 = D3::variable(x, 0);
    const D3 R = rc.corrected_t(j);
    if (std::abs(R.v) < 1e-13) return x;
    double nx = x - R.v / R.d[0];
    if (nx >= -1e-12) nx = 0.5 * x;  // keep concave
    x = nx;
  }
  return x;
}

Reconstruction reconstruct_value(const ReductionCase& rc, const Grid1D& sol,
                                 double t, double l, double h) {
  if (h <= 0.0) throw DomainError("reconstruct: h <= 0");
  const double z = l / h;
  if (z < sol.z.front() || z > sol.z.back())
    throw SolverError("reconstruct: point outside the solved domain");
  ReducedJet rj;
  rj.v1 = z;
  rj.W = sol.spline.value(z);
  rj.W1 = sol.spline.deriv(z);
  rj.W11 = manifold_second_derivative(rc, rj, sol.spline.second(z));
  const JetPoint jet = pushforward_jet(rc, rj, t, h);
  Reconstruction out;
  out.V = jet.V;
  out.policy = policy(rc.spec, jet);
  return out;
}

Reconstruction reconstruct_value(const ReductionCase& rc, const Grid2D& sol,
                                 double t, double l, double h) {
  if (h <= 0.0) throw DomainError("reconstruct: h <= 0");
  const double z = l / h;
  if (z < sol.z.front() || z > sol.z.back())
    throw SolverError("reconstruct: point outside the solved domain");
  const ForwardPoint fp = forward_map(rc, t, l, h, 0.0);
  const double v2 = fp.v2;
  if (v2 < sol.tau.front() || v2 > sol.tau.back())
    throw SolverError("reconstruct: time outside the solved domain");
  const auto it = std::upper_bound(sol.tau.begin(), sol.tau.end(), v2);
  int j = static_cast<int>(it - sol.tau.begin()) - 1;
  j = std::clamp(j, 0, static_cast<int>(sol.tau.size()) - 2);
  const double w1 = (v2 - sol.tau[j]) / (sol.tau[j + 1] - sol.tau[j]);

  const CubicSpline s0(sol.z, sol.W[j]);
  const CubicSpline s1(sol.z, sol.W[j + 1]);
  ReducedJet rj;
  rj.v1 = z;
  rj.v2 = v2;
  rj.W = (1.0 - w1) * s0.value(z) + w1 * s1.value(z);
  rj.W1 = (1.0 - w1) * s0.deriv(z) + w1 * s1.deriv(z);
  rj.W11 = (1.0 - w1) * s0.second(z) + w1 * s1.second(z);
  // time slot from the equation itself (manifold-consistent)
  ReducedJetT<D3> q;
  q.v1 = rj.v1;
  q.v2 = rj.v2;
  q.W = D3(rj.W);
  q.W1 = D3(rj.W1);
  q.W11 = D3(rj.W11);
  rj.W2 = -rc.corrected_t(q).v;
  const JetPoint jet = pushforward_jet(rc, rj, h, 1.0);
  Reconstruction out;
  out.V = jet.V;
  out.policy = policy(rc.spec, jet);
  return out;
}

}  // namespace hjbsym
