#ifndef HJBSYM_MODEL_HPP
#define HJBSYM_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjbsym/dual.hpp"

namespace hjbsym {

/// Market, utility and liquidation-time parameters of the model.
struct ModelParams {
  double r = 0.02;       ///< riskless rate
  double alpha = 0.05;   ///< risky drift
  double sigma = 0.2;    ///< risky volatility
  double mu = 0.03;      ///< illiquid drift
  double delta = 0.02;   ///< dividend rate of the illiquid asset
  double eta = 0.3;      ///< illiquid volatility
  double rho = 0.4;      ///< correlation
  double gamma = 0.5;    ///< HARA exponent, 0 < gamma < 1
  double kappa = 0.3;    ///< exponential liquidation rate
  double d = 1.0;        ///< survival scale constant

  static ModelParams benchmark() { return ModelParams{}; }
};

/// Returns the list of violated parameter constraints (empty iff valid).
std::vector<std::string> validate_params(const ModelParams& p);

/// Throws std::invalid_argument when validate_params is non-empty.
void require_valid(const ModelParams& p);

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// HARA utility ((1-g)/g)((c/(1-g))^g - 1); strictly increasing, concave.
double hara_utility(double c, double gamma);
/// dU/dc for the HARA utility above.
double hara_utility_deriv(double c, double gamma);
double hara_utility_second(double c, double gamma);

inline double log_utility(double c) {
  if (c <= 0.0) throw DomainError("log_utility: c <= 0");
  return std::log(c);
}

/// Survival function family.  Exponential: d e^{-kappa t}.  SuperExponential:
/// e^{-kappa t - eps t^2} (breaks Phi'/Phi = const while keeping the
/// exponential tail bound).
class SurvivalFn {
 public:
  enum class Kind { Exponential, SuperExponential };

  static SurvivalFn exponential(double d, double kappa);
  static SurvivalFn super_exponential(double kappa, double eps);

  Kind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  double scale() const { return d_; }
  double eps() const { return eps_; }
  bool is_exponential() const { return kind_ == Kind::Exponential; }

  /// Phi-bar(t)
  double eval(double t) const;
  /// d/dt Phi-bar
  double deriv(double t) const;
  /// F(t) = -int_t^inf Phi-bar ds, the antiderivative gauge with F -> 0.
  double antideriv(double t) const;

  /// k-th derivative of F (F' = Phi-bar, F'' = Phi-bar', ...), k in [0,3].
  double antideriv_derivative(double t, int k) const;

  /// Phi-bar on dual scalars (used inside templated PDE residuals).
  template <typename T>
  T eval_t(const T& t) const {
    using hjbsym::exp;  // and ADL for duals
    using std::exp;
    if (kind_ == Kind::Exponential) return T(d_) * exp(T(-kappa_) * t);
    return exp(T(-kappa_) * t - T(eps_) * t * t);
  }

  /// F(t) on dual scalars (used by substitution shifts).
  template <typename T>
  T antideriv_t(const T& t) const {
    using hjbsym::erfc;
    using hjbsym::exp;
    using std::erfc;
    using std::exp;
    if (kind_ == Kind::Exponential)
      return T(-d_ / kappa_) * exp(T(-kappa_) * t);
    const double se = std::sqrt(eps_);
    const double front = -std::exp(kappa_ * kappa_ / (4.0 * eps_)) *
                         std::sqrt(M_PI) / (2.0 * se);
    return T(front) * erfc(T(se) * t + T(kappa_ / (2.0 * se)));
  }

 private:
  SurvivalFn(Kind k, double d, double kappa, double eps)
      : kind_(k), d_(d), kappa_(kappa), eps_(eps) {}
  Kind kind_;
  double d_;
  double kappa_;
  double eps_;
};

struct SurvivalTriple {
  double phi;
  double dphi;
  double F;
};

/// (Phi-bar, Phi-bar', F) at t >= 0.
SurvivalTriple survival_eval(const SurvivalFn& fn, double t);

}  // namespace hjbsym

#endif
