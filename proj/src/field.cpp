#include "hjbsym/field.hpp"

#include <cmath>
#include <sstream>

namespace hjbsym {
namespace detail {

struct Node {
  enum class Kind { Const, Coord, Add, Mul, Pow, Exp, TimeFn } kind;
  double value = 0.0;                  // Const, Pow exponent
  Coord coord = Coord::T;              // Coord
  std::shared_ptr<const Node> a, b;    // children
  std::function<double(double, int)> fn;  // TimeFn: k-th derivative callback
  std::string fn_name;
  int fn_order = 0;

  explicit Node(Kind k) : kind(k) {}
};

using P = std::shared_ptr<const Node>;

P make_const(double c) {
  auto n = std::make_shared<Node>(Node::Kind::Const);
  n->value = c;
  return n;
}

bool is_const(const P& n, double c) {
  return n->kind == Node::Kind::Const && n->value == c;
}

P make_add(P a, P b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == Node::Kind::Const && b->kind == Node::Kind::Const)
    return make_const(a->value + b->value);
  auto n = std::make_shared<Node>(Node::Kind::Add);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

P make_mul(P a, P b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == Node::Kind::Const && b->kind == Node::Kind::Const)
    return make_const(a->value * b->value);
  auto n = std::make_shared<Node>(Node::Kind::Mul);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double eval(const Node& n, const Point4& p) {
  switch (n.kind) {
    case Node::Kind::Const: return n.value;
    case Node::Kind::Coord: return p.get(n.coord);
    case Node::Kind::Add: return eval(*n.a, p) + eval(*n.b, p);
    case Node::Kind::Mul: return eval(*n.a, p) * eval(*n.b, p);
    case Node::Kind::Pow: return std::pow(eval(*n.a, p), n.value);
    case Node::Kind::Exp: return std::exp(eval(*n.a, p));
    case Node::Kind::TimeFn: return n.fn(p.t, n.fn_order);
  }
  return 0.0;
}

P diff(const P& n, Coord c);

P diff(const P& n, Coord c) {
  switch (n->kind) {
    case Node::Kind::Const: return make_const(0.0);
    case Node::Kind::Coord: return make_const(n->coord == c ? 1.0 : 0.0);
    case Node::Kind::Add: return make_add(diff(n->a, c), diff(n->b, c));
    case Node::Kind::Mul:
      return make_add(make_mul(diff(n->a, c), n->b),
                      make_mul(n->a, diff(n->b, c)));
    case Node::Kind::Pow: {
      // d(a^p) = p a^{p-1} da
      auto base = std::make_shared<Node>(Node::Kind::Pow);
      base->a = n->a;
      base->value = n->value - 1.0;
      return make_mul(make_const(n->value),
                      make_mul(P(base), diff(n->a, c)));
    }
    case Node::Kind::Exp:
      return make_mul(n, diff(n->a, c));
    case Node::Kind::TimeFn: {
      if (c != Coord::T) return make_const(0.0);
      auto m = std::make_shared<Node>(Node::Kind::TimeFn);
      m->fn = n->fn;
      m->fn_name = n->fn_name;
      m->fn_order = n->fn_order + 1;
      return m;
    }
  }
  return make_const(0.0);
}

bool depends(const Node& n, Coord c) {
  switch (n.kind) {
    case Node::Kind::Const: return false;
    case Node::Kind::Coord: return n.coord == c;
    case Node::Kind::Add:
    case Node::Kind::Mul: return depends(*n.a, c) || depends(*n.b, c);
    case Node::Kind::Pow:
    case Node::Kind::Exp: return depends(*n.a, c);
    case Node::Kind::TimeFn: return c == Coord::T;
  }
  return false;
}

std::string to_str(const Node& n) {
  std::ostringstream os;
  switch (n.kind) {
    case Node::Kind::Const: os << n.value; break;
    case Node::Kind::Coord: {
      static const char* names[] = {"t", "l", "h", "V"};
      os << names[static_cast<int>(n.coord)];
      break;
    }
    case Node::Kind::Add: os << "(" << to_str(*n.a) << " + " << to_str(*n.b) << ")"; break;
    case Node::Kind::Mul: os << to_str(*n.a) << "*" << to_str(*n.b); break;
    case Node::Kind::Pow: os << to_str(*n.a) << "^" << n.value; break;
    case Node::Kind::Exp: os << "exp(" << to_str(*n.a) << ")"; break;
    case Node::Kind::TimeFn:
      os << n.fn_name;
      for (int i = 0; i < n.fn_order; ++i) os << "'";
      os << "(t)";
      break;
  }
  return os.str();
}

}  // namespace detail

Field::Field() : node_(detail::make_const(0.0)) {}

double Field::operator()(const Point4& p) const { return detail::eval(*node_, p); }

Field Field::diff(Coord c) const { return Field(detail::diff(node_, c)); }

bool Field::depends_on(Coord c) const { return detail::depends(*node_, c); }

bool Field::is_zero() const { return detail::is_const(node_, 0.0); }

std::string Field::str() const { return detail::to_str(*node_); }

Field Field::constant(double c) { return Field(detail::make_const(c)); }

Field Field::coordinate(Coord c) {
  auto n = std::make_shared<detail::Node>(detail::Node::Kind::Coord);
  n->coord = c;
  return Field(std::move(n));
}

Field Field::time_function(std::function<double(double, int)> dk,
                           std::string name, int order) {
  auto n = std::make_shared<detail::Node>(detail::Node::Kind::TimeFn);
  n->fn = std::move(dk);
  n->fn_name = std::move(name);
  n->fn_order = order;
  return Field(std::move(n));
}

Field operator+(const Field& a, const Field& b) {
  return Field(detail::make_add(a.node_, b.node_));
}
Field operator-(const Field& a, const Field& b) {
  return Field(detail::make_add(a.node_, detail::make_mul(detail::make_const(-1.0), b.node_)));
}
Field operator*(const Field& a, const Field& b) {
  return Field(detail::make_mul(a.node_, b.node_));
}
Field operator-(const Field& a) {
  return Field(detail::make_mul(detail::make_const(-1.0), a.node_));
}
Field pow(const Field& a, double p) {
  auto n = std::make_shared<detail::Node>(detail::Node::Kind::Pow);
  n->a = a.node_;
  n->value = p;
  return Field(std::move(n));
}
Field exp(const Field& a) {
  auto n = std::make_shared<detail::Node>(detail::Node::Kind::Exp);
  n->a = a.node_;
  return Field(std::move(n));
}

}  // namespace hjbsym
