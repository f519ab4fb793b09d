#include "hjbsym/pde.hpp"

#include <cmath>

namespace hjbsym {

std::string to_string(PdeId id) {
  switch (id) {
    case PdeId::HaraGeneral: return "HARA_GENERAL";
    case PdeId::HaraExp: return "HARA_EXP";
    case PdeId::HaraExpResonant: return "HARA_EXP_RESONANT";
    case PdeId::LogGeneral: return "LOG_GENERAL";
    case PdeId::LogExp: return "LOG_EXP";
  }
  return "?";
}

PDESpec PDESpec::make(PdeId id, const ModelParams& p, const SurvivalFn& s) {
  require_valid(p);
  if ((id == PdeId::HaraExp || id == PdeId::HaraExpResonant ||
       id == PdeId::LogExp) &&
      !s.is_exponential())
    throw ParameterError(to_string(id) + " requires exponential survival");
  if (id == PdeId::HaraExpResonant &&
      std::abs(p.kappa - p.r * p.gamma) > 1e-14)
    throw ParameterError("HARA_EXP_RESONANT requires kappa == r*gamma");
  if (s.is_exponential() && std::abs(s.kappa() - p.kappa) > 1e-14)
    throw ParameterError("survival kappa differs from params.kappa");
  return PDESpec{id, p, s};
}

namespace {

void check_jet(const PDESpec& spec, const JetPoint& j) {
  if (j.Vll == 0.0) throw DomainError("residual: singular jet (V_ll = 0)");
  if (j.Vl <= 0.0) throw DomainError("residual: V_l <= 0");
  (void)spec;
}

}  // namespace

double residual(const PDESpec& spec, const JetPoint& j) {
  check_jet(spec, j);
  return residual_t(spec, lift<double>(j));
}

double solve_for_vt(const PDESpec& spec, const JetPoint& j) {
  JetPoint q = j;
  q.Vt = 0.0;
  return -residual(spec, q);
}

Policy policy(const PDESpec& spec, const JetPoint& j) {
  if (j.Vll >= 0.0) throw DomainError("policy: non-concave jet (V_ll >= 0)");
  if (j.Vl <= 0.0) throw DomainError("policy: V_l <= 0");
  const ModelParams& p = spec.params;
  const double phi = spec.survival.eval(j.t);
  Policy out;
  out.pi = -(p.eta * p.rho * p.sigma * j.h * j.Vlh +
             (p.alpha - p.r) * j.Vl) /
           (p.sigma * p.sigma * j.Vll);
  if (spec.is_hara()) {
    const double g1 = 1.0 - p.gamma;
    out.c = g1 * std::pow(j.Vl, -1.0 / g1) * std::pow(phi, 1.0 / g1);
  } else {
    out.c = phi / j.Vl;
  }
  return out;
}

double G_of_pi(const PDESpec& spec, const JetPoint& j, double pi) {
  const ModelParams& p = spec.params;
  return 0.5 * j.Vll * pi * pi * p.sigma * p.sigma +
         j.Vlh * p.eta * p.rho * pi * p.sigma * j.h +
         pi * (p.alpha - p.r) * j.Vl;
}

double H_of_c(const PDESpec& spec, const JetPoint& j, double c) {
  const double phi = spec.survival.eval(j.t);
  const double u = spec.is_hara() ? hara_utility(c, spec.params.gamma)
                                  : log_utility(c);
  return -c * j.Vl + phi * u;
}

FocDefect first_order_check(const PDESpec& spec, const JetPoint& j) {
  const ModelParams& p = spec.params;
  const Policy pc = policy(spec, j);
  const double phi = spec.survival.eval(j.t);
  FocDefect out;
  out.dG_dpi = j.Vll * pc.pi * p.sigma * p.sigma +
               j.Vlh * p.eta * p.rho * p.sigma * j.h +
               (p.alpha - p.r) * j.Vl;
  const double up = spec.is_hara() ? hara_utility_deriv(pc.c, p.gamma)
                                   : 1.0 / pc.c;
  const double upp = spec.is_hara() ? hara_utility_second(pc.c, p.gamma)
                                    : -1.0 / (pc.c * pc.c);
  out.dH_dc = -j.Vl + phi * up;
  out.d2G_dpi2 = p.sigma * p.sigma * j.Vll;
  out.d2H_dc2 = phi * upp;
  return out;
}

double residual_from_hjb(const PDESpec& spec, const JetPoint& j) {
  const ModelParams& p = spec.params;
  const Policy pc = policy(spec, j);
  return j.Vt + 0.5 * p.eta * p.eta * j.h * j.h * j.Vhh +
         (p.r * j.l + p.delta * j.h) * j.Vl +
         (p.mu - p.delta) * j.h * j.Vh + G_of_pi(spec, j, pc.pi) +
         H_of_c(spec, j, pc.c);
}

}  // namespace hjbsym
