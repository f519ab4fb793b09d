#ifndef HJBSYM_FIELD_HPP
#define HJBSYM_FIELD_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>

namespace hjbsym {

/// Base-space coordinate (t, l, h) plus the dependent variable V.
enum class Coord { T = 0, L = 1, H = 2, V = 3 };

struct Point4 {
  double t = 0.0, l = 0.0, h = 0.0, V = 0.0;
  double get(Coord c) const {
    switch (c) {
      case Coord::T: return t;
      case Coord::L: return l;
      case Coord::H: return h;
      default: return V;
    }
  }
};

namespace detail {
struct Node;
}

/// Immutable closed-form scalar field on (t,l,h,V) with exact symbolic
/// differentiation.  Covers everything the generator catalogs need:
/// polynomials, real powers, exponentials and survival antiderivatives.
class Field {
 public:
  Field();  // zero field

  double operator()(const Point4& p) const;
  Field diff(Coord c) const;
  bool depends_on(Coord c) const;
  bool is_zero() const;
  std::string str() const;

  static Field constant(double c);
  static Field coordinate(Coord c);
  /// Unary function of t given by its k-th derivative callback.
  static Field time_function(std::function<double(double, int)> dk,
                             std::string name, int order = 0);

  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b);
  friend Field operator*(const Field& a, const Field& b);
  friend Field operator-(const Field& a);
  friend Field pow(const Field& a, double p);
  friend Field exp(const Field& a);

  explicit Field(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  const std::shared_ptr<const detail::Node>& node() const { return node_; }

 private:
  std::shared_ptr<const detail::Node> node_;
};

inline Field operator*(double c, const Field& f) {
  return Field::constant(c) * f;
}
inline Field operator+(const Field& f, double c) {
  return f + Field::constant(c);
}
inline Field operator-(const Field& f, double c) {
  return f - Field::constant(c);
}

}  // namespace hjbsym

#endif
