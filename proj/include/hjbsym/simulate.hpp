#ifndef HJBSYM_SIMULATE_HPP
#define HJBSYM_SIMULATE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hjbsym/model.hpp"
#include "hjbsym/pde.hpp"
#include "hjbsym/reductions.hpp"
#include "hjbsym/solvers.hpp"

namespace hjbsym {

/// Counter-based RNG (Philox 4x32-10): draws are keyed by (seed, path, step),
/// so path sets are reproducible and order-independent under parallel runs.
struct Philox {
  static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                            std::uint64_t ctr_hi,
                                            std::uint64_t ctr_lo);
  /// two standard normals from one block (Box-Muller)
  static std::array<double, 2> normals(std::uint64_t key, std::uint64_t path,
                                       std::uint64_t step);
};

struct PathConfig {
  double dt = 1e-3;
  double t_max = 0.0;  ///< 0 -> derived as 10/kappa
  long n_paths = 100000;
  std::uint64_t rng_seed = 1;
  bool antithetic = false;
  int n_threads = 0;  ///< 0 -> hardware concurrency
};

struct UtilityEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  double truncation_bound = 0.0;
  long n_paths = 0;
  long flagged_paths = 0;  ///< paths that hit the policy floor
  bool reliable = true;    ///< flagged fraction <= 0.1%
};

struct PolicyEval {
  double pi = 0.0;
  double c = 0.0;
  bool valid = true;
};

using PolicySource = std::function<PolicyEval(double t, double l, double h)>;

/// Survival-weighted utility estimate of a policy:
/// E [ sum Phi(t_k) U(c_k) dt ] under Euler-Maruyama liquid/illiquid dynamics.
/// The liquidation time is not sampled; the weighted deterministic-time form
/// is integrated directly.  When sample_T is true (exponential survival only)
/// the liquidation time is drawn per path instead, as a cross-check mode.
UtilityEstimate simulate_utility(const ModelParams& p, const SurvivalFn& s,
                                 const PolicySource& policy, double l0,
                                 double h0, const PathConfig& cfg,
                                 bool hara_utility_kind = true,
                                 bool sample_T = false,
                                 std::vector<double>* per_path = nullptr);

struct SweepCell {
  double scale_pi, scale_c;
  UtilityEstimate estimate;
  double diff_vs_center = 0.0;        ///< mean difference to the (1,1) cell
  double diff_stderr = 0.0;           ///< stderr of that difference (CRN)
};

/// 3x3 common-random-numbers sweep over policy scalings.
std::vector<SweepCell> perturbation_sweep(
    const ModelParams& p, const SurvivalFn& s, const PolicySource& base,
    const std::vector<double>& scales, double l0, double h0,
    const PathConfig& cfg, bool hara_utility_kind = true);

/// Fast stationary policy source backed by a converged reduced-ODE solution:
/// table lookup inside [z0, z1], power continuation below z0 (consistent with
/// the Robin boundary row) and the Merton asymptote above z1.  Positive
/// consumption becomes infeasible at z + s <= floor; such calls are flagged.
class OdePolicyTable {
 public:
  OdePolicyTable(const ReductionCase& rc, const Grid1D& sol, int table_n = 4096);
  PolicyEval operator()(double t, double l, double h) const;
  PolicySource source() const;

 private:
  double zlo_, zhi_, s_, gamma_, floor_;
  bool hara_;
  double v0_, dv_;
  std::vector<double> pi_h_, c_h_;      // pi/h and c/h on the log(z+s) grid
  double AM_ = 0.0, bM_ = 0.0;          // asymptote constants
  double Y0_ = 0.0;                     // left-edge value for the continuation
  ModelParams p_;
};

}  // namespace hjbsym

#endif
