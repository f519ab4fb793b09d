#ifndef HJBSYM_REDUCTIONS_HPP
#define HJBSYM_REDUCTIONS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hjbsym/dual.hpp"
#include "hjbsym/pde.hpp"

namespace hjbsym {

enum class ReductionId {
  HARA_GEN_H3,
  HARA_GEN_H4,  // cataloged, inadmissible (value linear in l)
  HARA_EXP_H2,
  HARA_EXP_H4_RK,
  HARA_EXP_H4_IG,
  HARA_EXP_H4_GEN,
  HARA_EXP_H5,
  HARA_EXP_H7,
  HARA_EXP_H8_ODE,
  HARA_RES_H3,
  HARA_RES_H4,
  HARA_RES_H5,
  HARA_RES_H6,
  HARA_RES_H7,
  HARA_RES_H11_ODE,
  LOG_GEN_H1,
  LOG_EXP_H2,
  LOG_EXP_H4_RK,
  LOG_EXP_H4_GEN,
  LOG_EXP_H5,
  LOG_EXP_H7,
  LOG_EXP_H8_ODE,
};

std::string to_string(ReductionId id);
ReductionId reduction_id_from_string(const std::string& s);
/// The 21 verifiable case ids (everything except HARA_GEN_H4).
std::vector<ReductionId> verified_reduction_ids();

/// Free parameters of a case: the +-1 sign slot, omega, and tan(beta).
struct CaseParams {
  double sign = 1.0;
  double omega = 0.0;
  double tan_beta = 0.0;
};

/// Reduced second-order jet.  2D cases use all fields ((v1,v2) are the new
/// independent variables); ODE cases use v1 = z, W = Y, W1 = Y', W11 = Y''.
struct ReducedJet {
  double v1 = 1.0, v2 = 0.0;
  double W = 0.0, W1 = 1.0, W2 = 0.0;
  double W11 = -1.0, W12 = 0.0, W22 = 0.0;
};

using D3 = Dual<double, 3>;
using DD3 = Dual<D3, 3>;

/// Reduced jet with templated dependent-variable slots (for exact solver
/// Jacobians via dual arithmetic); the base point stays scalar.
template <typename T>
struct ReducedJetT {
  double v1 = 1.0, v2 = 0.0;
  T W{}, W1{}, W2{}, W11{}, W12{}, W22{};
};

/// One invariant substitution V = P(t,l,h) * W(u1,u2) + S(t,l,h), with its
/// reduced equation (corrected and verbatim forms), reduced policies, the
/// conformal factor, and bookkeeping.
struct ReductionCase {
  ReductionId id;
  std::string name;
  PDESpec spec;
  CaseParams cp;
  int dim = 2;
  bool admissible = true;
  bool solver_enabled = true;
  std::string boundary;    ///< printed limit condition
  std::string subalgebra;  ///< label in the optimal-system table

  enum class GaugeKind { H, T, TH } gauge_kind = GaugeKind::H;

  std::function<DD3(const DD3&, const DD3&, const DD3&)> u1, u2, P, S;
  /// (v1, v2, g1, g2) -> (t, l, h); g1/g2 meaning depends on gauge_kind
  std::function<std::array<double, 3>(double, double, double, double)>
      base_from;
  std::function<double(double, double, double, double)> lambda_model;

  /// derived-faithful closed form of the reduced equation
  std::function<double(const ReducedJet&)> corrected;
  /// same closed form on dual scalars (solver Jacobians)
  std::function<D3(const ReducedJetT<D3>&)> corrected_t;
  /// verbatim transcription (differs from `corrected` only at the flagged
  /// suspect terms)
  std::function<double(const ReducedJet&)> printed;
  /// reduced policy (pi, c) at gauge value h
  std::function<Policy(const ReducedJet&, double)> policy_reduced;
  std::function<Policy(const ReducedJet&, double)> policy_printed;

  std::vector<std::string> expected_flags;
};

ReductionCase make_reduction(ReductionId id, const ModelParams& params,
                             const SurvivalFn& survival,
                             const CaseParams& cp = {});

struct ForwardPoint {
  double v1, v2, W;
};

/// Printed invariants of the substitution at a base point.
ForwardPoint forward_map(const ReductionCase& rc, double t, double l, double h,
                         double V);

/// Full second-order jet of V reconstructed from a reduced jet through the
/// inverse map (exact chain rule via nested duals).
JetPoint pushforward_jet(const ReductionCase& rc, const ReducedJet& rj,
                         double g1, double g2 = 1.0);

enum class ResidualForm { Printed, Derived };

/// Printed form evaluates the transcription; Derived pushes the jet through
/// the substitution, evaluates the original PDE and divides by lambda.
double reduced_residual(const ReductionCase& rc, const ReducedJet& rj,
                        ResidualForm which, double g1, double g2 = 1.0);

Policy reduced_policy(const ReductionCase& rc, const ReducedJet& rj,
                      double h_gauge);

struct ReductionReport {
  std::string case_name;
  int samples = 0;
  double max_defect = 0.0;        ///< |corrected - raw/lambda| over samples
  double lambda_model_dev = 0.0;  ///< fitted vs recorded conformal factor
  double policy_pi_dev = 0.0;     ///< reduced pi vs policy(pushforward)
  double policy_c_dev = 0.0;
  struct Flag {
    std::string term;
    double magnitude;
  };
  std::vector<Flag> flags;
  bool inconclusive = false;
};

ReductionReport verify_reduction(const ReductionCase& rc, int n,
                                 std::uint64_t seed);

}  // namespace hjbsym

#endif
