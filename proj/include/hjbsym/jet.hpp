#ifndef HJBSYM_JET_HPP
#define HJBSYM_JET_HPP

#include <cstdint>
#include <random>

namespace hjbsym {

/// Second-order jet coordinates of V(t,l,h) at a point.
struct JetPoint {
  double t = 0.0, l = 0.0, h = 0.0, V = 0.0;
  double Vt = 0.0, Vl = 0.0, Vh = 0.0;
  double Vll = 0.0, Vlh = 0.0, Vhh = 0.0;
};

/// Samples admissible jets: h > 0, V_l > 0, V_ll < 0 bounded away from zero.
/// Ranges: t in [0,3], l,h in [0.5,5], V in [-1,1], first derivatives in
/// [0.05,2], V_ll in [-2,-0.05], V_lh,V_hh in [-1,1].
class JetSampler {
 public:
  explicit JetSampler(std::uint64_t seed) : rng_(seed) {}

  JetPoint sample() {
    JetPoint j;
    j.t = uni(0.0, 3.0);
    j.l = uni(0.5, 5.0);
    j.h = uni(0.5, 5.0);
    j.V = uni(-1.0, 1.0);
    j.Vt = uni(0.05, 2.0);
    j.Vl = uni(0.05, 2.0);
    j.Vh = uni(0.05, 2.0);
    j.Vll = uni(-2.0, -0.05);
    j.Vlh = uni(-1.0, 1.0);
    j.Vhh = uni(-1.0, 1.0);
    return j;
  }

 private:
  double uni(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng_);
  }
  std::mt19937_64 rng_;
};

}  // namespace hjbsym

#endif
