#include "hjbsym/model.hpp"

#include <cmath>

namespace hjbsym {

std::vector<std::string> validate_params(const ModelParams& p) {
  std::vector<std::string> bad;
  if (!(p.sigma > 0.0)) bad.push_back("sigma <= 0");
  if (!(p.eta >= 0.0)) bad.push_back("eta < 0");
  if (!(p.rho > -1.0 && p.rho < 1.0)) bad.push_back("rho out of (-1,1)");
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) bad.push_back("gamma out of (0,1)");
  if (!(p.alpha > p.r)) bad.push_back("alpha <= r");
  if (!(p.r - p.mu + p.delta > 0.0)) bad.push_back("r - mu + delta <= 0");
  if (p.r - p.alpha + p.eta * p.rho * p.sigma == 0.0)
    bad.push_back("r - alpha + eta*rho*sigma == 0");
  if (!(p.kappa > 0.0)) bad.push_back("kappa <= 0");
  if (!(p.d > 0.0)) bad.push_back("d <= 0");
  return bad;
}

void require_valid(const ModelParams& p) {
  const auto bad = validate_params(p);
  if (!bad.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw ParameterError(msg);
  }
}

double hara_utility(double c, double gamma) {
  if (c <= 0.0) throw DomainError("hara_utility: c <= 0");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ParameterError("hara_utility: gamma out of (0,1)");
  const double g1 = 1.0 - gamma;
  return g1 / gamma * (std::pow(c / g1, gamma) - 1.0);
}

double hara_utility_deriv(double c, double gamma) {
  if (c <= 0.0) throw DomainError("hara_utility_deriv: c <= 0");
  return std::pow(c / (1.0 - gamma), gamma - 1.0);
}

double hara_utility_second(double c, double gamma) {
  if (c <= 0.0) throw DomainError("hara_utility_second: c <= 0");
  const double g1 = 1.0 - gamma;
  return (gamma - 1.0) / g1 * std::pow(c / g1, gamma - 2.0);
}

SurvivalFn SurvivalFn::exponential(double d, double kappa) {
  if (!(kappa > 0.0)) throw ParameterError("survival: kappa <= 0");
  if (!(d > 0.0 && d <= 1.0)) throw ParameterError("survival: d out of (0,1]");
  return SurvivalFn(Kind::Exponential, d, kappa, 0.0);
}

SurvivalFn SurvivalFn::super_exponential(double kappa, double eps) {
  if (!(kappa > 0.0)) throw ParameterError("survival: kappa <= 0");
  if (!(eps > 0.0)) throw ParameterError("survival: eps <= 0");
  return SurvivalFn(Kind::SuperExponential, 1.0, kappa, eps);
}

double SurvivalFn::eval(double t) const {
  if (kind_ == Kind::Exponential) return d_ * std::exp(-kappa_ * t);
  return std::exp(-kappa_ * t - eps_ * t * t);
}

double SurvivalFn::deriv(double t) const {
  if (kind_ == Kind::Exponential) return -kappa_ * eval(t);
  return -(kappa_ + 2.0 * eps_ * t) * eval(t);
}

double SurvivalFn::antideriv(double t) const {
  if (kind_ == Kind::Exponential) return -d_ / kappa_ * std::exp(-kappa_ * t);
  // -int_t^inf e^{-k s - e s^2} ds in closed form via erfc
  const double se = std::sqrt(eps_);
  return -std::exp(kappa_ * kappa_ / (4.0 * eps_)) *
         (std::sqrt(M_PI) / (2.0 * se)) * std::erfc(se * t + kappa_ / (2.0 * se));
}

double SurvivalFn::antideriv_derivative(double t, int k) const {
  switch (k) {
    case 0:
      return antideriv(t);
    case 1:
      return eval(t);
    case 2:
      return deriv(t);
    case 3:
      if (kind_ == Kind::Exponential) return kappa_ * kappa_ * eval(t);
      {
        const double a = kappa_ + 2.0 * eps_ * t;
        return (a * a - 2.0 * eps_) * eval(t);
      }
    default:
      throw std::invalid_argument("antideriv_derivative: order > 3");
  }
}

SurvivalTriple survival_eval(const SurvivalFn& fn, double t) {
  if (t < 0.0) throw DomainError("survival_eval: t < 0");
  return SurvivalTriple{fn.eval(t), fn.deriv(t), fn.antideriv(t)};
}

}  // namespace hjbsym
