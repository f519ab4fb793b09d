#ifndef HJBSYM_DUAL_HPP
#define HJBSYM_DUAL_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace hjbsym {

/// Forward-mode dual number with N derivative slots over scalar type T.
/// Nesting (Dual<Dual<double,N>,M>) yields exact higher-order derivatives.
template <typename T, std::size_t N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  Dual() = default;
  Dual(double c) requires(!std::is_same_v<T, double>) : v(c) {}
  Dual(const T& value) : v(value) {}
  Dual(const T& value, const std::array<T, N>& deriv) : v(value), d(deriv) {}

  /// Independent variable: value x with unit seed in slot i.
  static Dual variable(const T& x, std::size_t i) {
    Dual r(x);
    r.d[i] = T(1.0);
    return r;
  }

  Dual operator-() const {
    Dual r(-v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.v / b.v);
    const T inv2 = T(1.0) / (b.v * b.v);
    for (std::size_t i = 0; i < N; ++i)
      r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
    return r;
  }
};

inline double value_of(double x) { return x; }
template <typename T, std::size_t N>
double value_of(const Dual<T, N>& x) { return value_of(x.v); }

/// Chain rule helper: f(u) given f(u.v) and f'(u.v).
template <typename T, std::size_t N>
Dual<T, N> chain(const Dual<T, N>& u, const T& f, const T& fp) {
  Dual<T, N> r(f);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = fp * u.d[i];
  return r;
}

using std::exp;
using std::log;
using std::pow;
using std::sqrt;
using std::erfc;
using std::sin;
using std::cos;

template <typename T, std::size_t N>
Dual<T, N> exp(const Dual<T, N>& u) {
  const T e = exp(u.v);
  return chain(u, e, e);
}

template <typename T, std::size_t N>
Dual<T, N> log(const Dual<T, N>& u) {
  return chain(u, log(u.v), T(1.0) / u.v);
}

template <typename T, std::size_t N>
Dual<T, N> sqrt(const Dual<T, N>& u) {
  const T s = sqrt(u.v);
  return chain(u, s, T(0.5) / s);
}

/// Power with constant exponent (the only form the PDEs need).
template <typename T, std::size_t N>
Dual<T, N> pow(const Dual<T, N>& u, double p) {
  const T f = pow(u.v, p);
  const T fp = pow(u.v, p - 1.0) * T(p);
  return chain(u, f, fp);
}

template <typename T, std::size_t N>
Dual<T, N> sin(const Dual<T, N>& u) { return chain(u, sin(u.v), cos(u.v)); }
template <typename T, std::size_t N>
Dual<T, N> cos(const Dual<T, N>& u) { return chain(u, cos(u.v), -sin(u.v)); }

template <typename T, std::size_t N>
Dual<T, N> erfc(const Dual<T, N>& u) {
  // erfc'(x) = -2/sqrt(pi) e^{-x^2}
  const T fp = T(-1.1283791670955126) * exp(-u.v * u.v);
  return chain(u, erfc(u.v), fp);
}

}  // namespace hjbsym

#endif
