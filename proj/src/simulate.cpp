#include "hjbsym/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace hjbsym {

namespace {

inline void philox_round(std::uint32_t& c0, std::uint32_t& c1,
                         std::uint32_t& c2, std::uint32_t& c3,
                         std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t M0 = 0xD2511F53ULL, M1 = 0xCD9E8D57ULL;
  const std::uint64_t p0 = M0 * c0;
  const std::uint64_t p1 = M1 * c2;
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c0 = hi1 ^ c1 ^ k0;
  c1 = lo1;
  c2 = hi0 ^ c3 ^ k1;
  c3 = lo0;
}

}  // namespace

std::array<std::uint32_t, 4> Philox::block(std::uint64_t key,
                                           std::uint64_t ctr_hi,
                                           std::uint64_t ctr_lo) {
  std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    philox_round(c0, c1, c2, c3, k0, k1);
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  return {c0, c1, c2, c3};
}

std::array<double, 2> Philox::normals(std::uint64_t key, std::uint64_t path,
                                      std::uint64_t step) {
  const auto b = block(key, path, step);
  const double u1 =
      (static_cast<double>(b[0]) + 0.5) * (1.0 / 4294967296.0);
  const double u2 =
      (static_cast<double>(b[1]) + 0.5) * (1.0 / 4294967296.0);
  const double rr = std::sqrt(-2.0 * std::log(u1));
  const double th = 6.283185307179586476925287 * u2;
  return {rr * std::cos(th), rr * std::sin(th)};
}

namespace {

struct PathAccum {
  double sum = 0.0;
  double sum2 = 0.0;
  long flagged = 0;
  double max_absU = 0.0;
};

}  // namespace

UtilityEstimate simulate_utility(const ModelParams& p, const SurvivalFn& s,
                                 const PolicySource& policy, double l0,
                                 double h0, const PathConfig& cfg,
                                 bool hara_kind, bool sample_T,
                                 std::vector<double>* per_path) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt > 0 required");
  if (cfg.n_paths < 1) throw std::invalid_argument("n_paths >= 1 required");
  if (!(l0 > 0.0) || !(h0 > 0.0))
    throw std::invalid_argument("l0, h0 > 0 required");
  if (sample_T && !s.is_exponential())
    throw std::invalid_argument("sample_T cross-check needs exponential");
  const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 10.0 / p.kappa;
  if (t_max < 10.0 / p.kappa - 1e-12)
    throw std::invalid_argument("t_max >= 10/kappa required");

  const long n_steps = static_cast<long>(std::ceil(t_max / cfg.dt));
  long n_paths = cfg.n_paths;
  if (cfg.antithetic && (n_paths % 2)) ++n_paths;

  const double g = p.gamma, g1 = 1.0 - p.gamma;
  const double sq1r = std::sqrt(1.0 - p.rho * p.rho);
  const double sdt = std::sqrt(cfg.dt);
  const bool expo = s.is_exponential();
  const double phi_step = expo ? std::exp(-p.kappa * cfg.dt) : 0.0;
  const double c_min = 1e-8;

  if (per_path) per_path->assign(n_paths, 0.0);

  int n_threads = cfg.n_threads > 0
                      ? cfg.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = static_cast<int>(
      std::min<long>(n_threads, std::max<long>(1, n_paths / 64)));

  std::vector<PathAccum> acc(n_threads);
  auto worker = [&](int w, long lo, long hi) {
    PathAccum a;
    for (long path = lo; path < hi; ++path) {
      const std::uint64_t rng_path = cfg.antithetic ? path / 2 : path;
      const double sign = (cfg.antithetic && (path & 1)) ? -1.0 : 1.0;
      double L = l0, H = h0, phi = s.scale();
      double horizon = t_max;
      if (sample_T) {
        const auto b = Philox::block(cfg.rng_seed ^ 0x5eedULL, rng_path, 0);
        const double u =
            (static_cast<double>(b[2]) + 0.5) * (1.0 / 4294967296.0);
        horizon = (u > s.scale()) ? 0.0
                                  : -std::log(u / s.scale()) / p.kappa;
      }
      double usum = 0.0;
      bool flagged = false;
      double t = 0.0;
      for (long k = 0; k < n_steps; ++k) {
        if (sample_T && t >= horizon) break;
        const auto zn = Philox::normals(cfg.rng_seed, rng_path, k);
        const double z1 = sign * zn[0], z2 = sign * zn[1];
        PolicyEval pe = policy(t, L, H);
        if (!pe.valid) {
          flagged = true;
          pe.pi = 0.0;
          pe.c = c_min;
        }
        if (pe.c < c_min) pe.c = c_min;
        const double U =
            hara_kind ? g1 / g * (std::pow(pe.c / g1, g) - 1.0)
                      : std::log(pe.c);
        usum += (sample_T ? 1.0 : phi) * U * cfg.dt;
        if (std::abs(U) > a.max_absU) a.max_absU = std::abs(U);
        const double dW1 = sdt * z1;
        const double dW2 = sdt * z2;
        L += (p.r * L + p.delta * H + pe.pi * (p.alpha - p.r) - pe.c) *
                 cfg.dt +
             pe.pi * p.sigma * dW1;
        H += H * ((p.mu - p.delta) * cfg.dt +
                  p.eta * (p.rho * dW1 + sq1r * dW2));
        t += cfg.dt;
        phi = expo ? phi * phi_step : s.eval(t);
      }
      if (per_path) (*per_path)[path] = usum;
      if (cfg.antithetic) {
        // accumulate pair averages on the odd member
        if (path & 1) {
          const double pair = 0.5 * (usum + (*per_path)[path - 1]);
          a.sum += pair;
          a.sum2 += pair * pair;
        } else if (!per_path) {
          throw std::logic_error("antithetic accumulation needs per-path");
        }
      } else {
        a.sum += usum;
        a.sum2 += usum * usum;
      }
      if (flagged) ++a.flagged;
    }
    acc[w] = a;
  };

  // antithetic pairing needs the per-path buffer
  std::vector<double> scratch;
  if (cfg.antithetic && !per_path) {
    scratch.assign(n_paths, 0.0);
    per_path = &scratch;
  }

  if (n_threads == 1) {
    worker(0, 0, n_paths);
  } else {
    std::vector<std::thread> pool;
    const long chunk0 = n_paths / n_threads;
    long chunk = cfg.antithetic ? (chunk0 + (chunk0 & 1)) : chunk0;
    if (chunk < 1) chunk = 1;
    long lo = 0;
    for (int w = 0; w < n_threads && lo < n_paths; ++w) {
      const long hi = (w + 1 == n_threads) ? n_paths
                                           : std::min(n_paths, lo + chunk);
      pool.emplace_back(worker, w, lo, hi);
      lo = hi;
    }
    for (auto& th : pool) th.join();
  }

  PathAccum tot;
  for (const auto& a : acc) {
    tot.sum += a.sum;
    tot.sum2 += a.sum2;
    tot.flagged += a.flagged;
    tot.max_absU = std::max(tot.max_absU, a.max_absU);
  }
  const long n_eff = cfg.antithetic ? n_paths / 2 : n_paths;

  UtilityEstimate est;
  est.n_paths = n_paths;
  est.flagged_paths = tot.flagged;
  est.mean = tot.sum / n_eff;
  const double var =
      std::max(0.0, tot.sum2 / n_eff - est.mean * est.mean);
  est.stderr_mean = std::sqrt(var / n_eff);
  // |int_{t_max}^inf Phi| bound with the largest magnitude seen
  const double tail = expo ? s.scale() / p.kappa * std::exp(-p.kappa * t_max)
                           : -s.antideriv(t_max);
  est.truncation_bound = tot.max_absU * tail;
  est.reliable = tot.flagged <= n_paths / 1000;
  return est;
}

std::vector<SweepCell> perturbation_sweep(const ModelParams& p,
                                          const SurvivalFn& s,
                                          const PolicySource& base,
                                          const std::vector<double>& scales,
                                          double l0, double h0,
                                          const PathConfig& cfg,
                                          bool hara_kind) {
  std::vector<SweepCell> cells;
  std::vector<std::vector<double>> per(scales.size() * scales.size());
  std::vector<double> center;
  std::size_t idx = 0;
  for (double spi : scales)
    for (double sc : scales) {
      PolicySource scaled = [base, spi, sc](double t, double l, double h) {
        PolicyEval pe = base(t, l, h);
        pe.pi *= spi;
        pe.c *= sc;
        return pe;
      };
      SweepCell cell;
      cell.scale_pi = spi;
      cell.scale_c = sc;
      cell.estimate = simulate_utility(p, s, scaled, l0, h0, cfg, hara_kind,
                                       false, &per[idx]);
      if (spi == 1.0 && sc == 1.0) center = per[idx];
      cells.push_back(cell);
      ++idx;
    }
  // common-random-numbers differences against the center cell
  for (std::size_t k = 0; k < cells.size(); ++k) {
    double dsum = 0.0, dsum2 = 0.0;
    const long n = static_cast<long>(per[k].size());
    for (long i = 0; i < n; ++i) {
      const double d = per[k][i] - center[i];
      dsum += d;
      dsum2 += d * d;
    }
    const double mean = dsum / n;
    const double var = std::max(0.0, dsum2 / n - mean * mean);
    cells[k].diff_vs_center = mean;
    cells[k].diff_stderr = std::sqrt(var / n);
  }
  return cells;
}

OdePolicyTable::OdePolicyTable(const ReductionCase& rc, const Grid1D& sol,
                               int table_n)
    : p_(rc.spec.params) {
  hara_ = rc.spec.is_hara();
  gamma_ = p_.gamma;
  s_ = sol.shift;
  zlo_ = sol.z.front();
  zhi_ = sol.z.back();
  floor_ = 1e-3 * (zlo_ + s_) - s_;
  AM_ = hara_ ? merton_constant(p_) : 0.0;
  bM_ = hara_ ? 0.0 : merton_log_constant(p_);
  Y0_ = sol.Y.front();
  v0_ = std::log(zlo_ + s_);
  const double v1 = std::log(zhi_ + s_);
  dv_ = (v1 - v0_) / (table_n - 1);
  pi_h_.resize(table_n);
  c_h_.resize(table_n);
  for (int i = 0; i < table_n; ++i) {
    const double z = std::min(zhi_, std::max(zlo_, std::exp(v0_ + i * dv_) - s_));
    ReducedJet rj;
    rj.v1 = z;
    rj.W = sol.spline.value(z);
    rj.W1 = sol.spline.deriv(z);
    rj.W11 = manifold_second_derivative(rc, rj, sol.spline.second(z));
    const Policy pol = rc.policy_reduced(rj, 1.0);  // per unit h
    pi_h_[i] = pol.pi;
    c_h_[i] = pol.c;
  }
}

PolicyEval OdePolicyTable::operator()(double, double l, double h) const {
  PolicyEval out;
  if (!(h > 0.0)) {
    out.valid = false;
    return out;
  }
  const double z = l / h;
  if (z + s_ <= 1e-3 * (zlo_ + s_)) {
    out.valid = false;
    return out;
  }
  const double er = p_.eta * p_.rho;
  if (z < zlo_ || z > zhi_) {
    // analytic continuation: power / log profile consistent with the
    // Robin row below z0 and the Merton asymptote above z1
    double Yz;
    double ratio;  // Y_z / Y_zz
    if (hara_) {
      ratio = (z + s_) / (gamma_ - 1.0);
      const double coef =
          (z < zlo_) ? Y0_ * gamma_ / std::pow(zlo_ + s_, gamma_) : AM_ * gamma_;
      Yz = coef * std::pow(z + s_, gamma_ - 1.0);
      out.pi = h * (er / p_.sigma * z +
                    (er * p_.sigma * (1.0 - gamma_) - p_.alpha + p_.r) /
                        (p_.sigma * p_.sigma) * ratio);
      out.c = h * (1.0 - gamma_) * std::pow(Yz, -1.0 / (1.0 - gamma_));
    } else {
      ratio = -(z + s_);
      Yz = 1.0 / (z + s_);
      out.pi = h * (er / p_.sigma * z +
                    (er * p_.sigma - p_.alpha + p_.r) /
                        (p_.sigma * p_.sigma) * ratio);
      out.c = h * p_.kappa / Yz;
    }
    return out;
  }
  const double v = std::log(z + s_);
  double x = (v - v0_) / dv_;
  int i = static_cast<int>(x);
  i = std::clamp(i, 0, static_cast<int>(pi_h_.size()) - 2);
  const double w = x - i;
  out.pi = h * ((1.0 - w) * pi_h_[i] + w * pi_h_[i + 1]);
  out.c = h * ((1.0 - w) * c_h_[i] + w * c_h_[i + 1]);
  return out;
}

PolicySource OdePolicyTable::source() const {
  const OdePolicyTable copy = *this;
  return [copy](double t, double l, double h) { return copy(t, l, h); };
}

}  // namespace hjbsym
