#ifndef HJBSYM_PDE_HPP
#define HJBSYM_PDE_HPP

#include <string>

#include "hjbsym/dual.hpp"
#include "hjbsym/jet.hpp"
#include "hjbsym/model.hpp"

namespace hjbsym {

enum class PdeId {
  HaraGeneral,
  HaraExp,
  HaraExpResonant,
  LogGeneral,
  LogExp,
};

std::string to_string(PdeId id);

/// One of the five maximized HJB PDE variants, with parameters and survival
/// function.  The factory enforces the id/survival compatibility rules.
struct PDESpec {
  PdeId id;
  ModelParams params;
  SurvivalFn survival;

  static PDESpec make(PdeId id, const ModelParams& p, const SurvivalFn& s);
  bool is_hara() const {
    return id == PdeId::HaraGeneral || id == PdeId::HaraExp ||
           id == PdeId::HaraExpResonant;
  }
};

/// Jet with templated scalar type, for derivative propagation through the
/// residual.
template <typename T>
struct JetT {
  T t, l, h, V, Vt, Vl, Vh, Vll, Vlh, Vhh;
};

template <typename T>
JetT<T> lift(const JetPoint& j) {
  return JetT<T>{T(j.t), T(j.l), T(j.h), T(j.V), T(j.Vt),
                 T(j.Vl), T(j.Vh), T(j.Vll), T(j.Vlh), T(j.Vhh)};
}

/// Left side of the maximized PDE; linear in V_t with unit coefficient.
/// Requires V_ll != 0 and V_l > 0 (checked on the double path).
template <typename T>
T residual_t(const PDESpec& spec, const JetT<T>& j) {
  const ModelParams& p = spec.params;
  const T phi = spec.survival.eval_t(j.t);
  const T ar = T(p.alpha - p.r);
  const T num = ar * ar * j.Vl * j.Vl +
                T(2.0) * ar * T(p.eta * p.rho * p.sigma) * j.h * j.Vl * j.Vlh +
                T(p.eta * p.eta * p.rho * p.rho * p.sigma * p.sigma) * j.h *
                    j.h * j.Vlh * j.Vlh;
  T R = j.Vt + T(0.5 * p.eta * p.eta) * j.h * j.h * j.Vhh +
        (T(p.r) * j.l + T(p.delta) * j.h) * j.Vl +
        T(p.mu - p.delta) * j.h * j.Vh -
        num / (T(2.0 * p.sigma * p.sigma) * j.Vll);
  if (spec.is_hara()) {
    const double g = p.gamma, g1 = 1.0 - p.gamma;
    R += T(g1 * g1 / g) * pow(phi, 1.0 / g1) * pow(j.Vl, -g / g1) -
         T(g1 / g) * phi;
  } else {
    R -= phi * (log(j.Vl) - log(phi) + T(1.0));
  }
  return R;
}

double residual(const PDESpec& spec, const JetPoint& j);

/// V_t that puts the jet on the solution manifold (exact: unit coefficient).
double solve_for_vt(const PDESpec& spec, const JetPoint& j);

struct Policy {
  double pi;  ///< cash in the risky asset
  double c;   ///< consumption rate
};

/// Optimal allocation/consumption at the jet; requires V_ll < 0, V_l > 0.
Policy policy(const PDESpec& spec, const JetPoint& j);

struct FocDefect {
  double dG_dpi;     ///< stationarity in pi at the optimum
  double dH_dc;      ///< stationarity in c at the optimum
  double d2G_dpi2;   ///< sigma^2 V_ll, must be < 0
  double d2H_dc2;    ///< Phi U''(c), must be < 0
};

FocDefect first_order_check(const PDESpec& spec, const JetPoint& j);

/// G[pi] of the pre-maximization HJB (for optimality spot checks).
double G_of_pi(const PDESpec& spec, const JetPoint& j, double pi);
/// H[c] of the pre-maximization HJB.
double H_of_c(const PDESpec& spec, const JetPoint& j, double c);

/// residual reassembled from the pre-maximization form
/// V_t + linear terms + G[pi*] + H[c*]; equals residual() analytically.
double residual_from_hjb(const PDESpec& spec, const JetPoint& j);

}  // namespace hjbsym

#endif
