#include "hjbsym/generator.hpp"

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

namespace hjbsym {

namespace {

double d1(const Field& f, Coord c, const Point4& p) { return f.diff(c)(p); }
double d2(const Field& f, Coord c1, Coord c2, const Point4& p) {
  return f.diff(c1).diff(c2)(p);
}

void check_supported(const Generator& g) {
  if (g.xi_t.depends_on(Coord::L) || g.xi_t.depends_on(Coord::H) ||
      g.xi_t.depends_on(Coord::V) || g.xi_l.depends_on(Coord::V) ||
      g.xi_h.depends_on(Coord::V))
    throw std::invalid_argument(
        "prolong2: generator class requires xi_t = xi_t(t) and V-free "
        "spatial coefficients");
}

}  // namespace

Prolonged prolong2(const Generator& g, const JetPoint& j) {
  check_supported(g);
  const Point4 p{j.t, j.l, j.h, j.V};

  const Coord T = Coord::T, L = Coord::L, H = Coord::H, V = Coord::V;
  const double Vc[3] = {j.Vt, j.Vl, j.Vh};
  const Coord cs[3] = {T, L, H};

  // first-order: eta^i = eta_i + V_i eta_V - sum_j (d_i xi_j) V_j
  const double etaV = d1(g.eta, V, p);
  auto first = [&](int i) {
    double r = d1(g.eta, cs[i], p) + Vc[i] * etaV;
    r -= d1(g.xi_t, cs[i], p) * j.Vt;
    r -= d1(g.xi_l, cs[i], p) * j.Vl;
    r -= d1(g.xi_h, cs[i], p) * j.Vh;
    return r;
  };

  // second-order (spatial pairs only; V_tl, V_th never enter because
  // xi_t = xi_t(t)):
  //   eta^{ik} = eta_{ik} + V_i eta_{kV} + V_k eta_{iV} + V_i V_k eta_{VV}
  //            + V_{ik} eta_V
  //            - sum_j [ (d2_{ik} xi_j) V_j + (d_i xi_j) V_{jk}
  //                      + (d_k xi_j) V_{ji} ]
  const double etaVV = d2(g.eta, V, V, p);
  auto vij = [&](Coord a, Coord b) -> double {
    // spatial second derivatives of V available in the jet
    if (a == L && b == L) return j.Vll;
    if (a == H && b == H) return j.Vhh;
    return j.Vlh;  // (L,H) or (H,L)
  };
  auto second = [&](Coord i, Coord k) {
    const double Vi = (i == L) ? j.Vl : j.Vh;
    const double Vk = (k == L) ? j.Vl : j.Vh;
    double r = d2(g.eta, i, k, p) + Vi * d2(g.eta, k, V, p) +
               Vk * d2(g.eta, i, V, p) + Vi * Vk * etaVV +
               vij(i, k) * etaV;
    r -= d2(g.xi_t, i, k, p) * j.Vt + d2(g.xi_l, i, k, p) * j.Vl +
         d2(g.xi_h, i, k, p) * j.Vh;
    r -= d1(g.xi_l, i, p) * vij(L, k) + d1(g.xi_h, i, p) * vij(H, k);
    r -= d1(g.xi_l, k, p) * vij(L, i) + d1(g.xi_h, k, p) * vij(H, i);
    return r;
  };

  Prolonged out;
  out.eta_t = first(0);
  out.eta_l = first(1);
  out.eta_h = first(2);
  out.eta_ll = second(L, L);
  out.eta_lh = second(L, H);
  out.eta_hh = second(H, H);
  return out;
}

Generator lie_bracket(const Generator& a, const Generator& b) {
  const Coord cs[4] = {Coord::T, Coord::L, Coord::H, Coord::V};
  auto apply = [&](const Generator& g, const Field& f) {
    // g acting on f as a derivation
    const Field* coef[4] = {&g.xi_t, &g.xi_l, &g.xi_h, &g.eta};
    Field r = Field::constant(0.0);
    for (int k = 0; k < 4; ++k) r = r + (*coef[k]) * f.diff(cs[k]);
    return r;
  };
  Generator out;
  out.xi_t = apply(a, b.xi_t) - apply(b, a.xi_t);
  out.xi_l = apply(a, b.xi_l) - apply(b, a.xi_l);
  out.xi_h = apply(a, b.xi_h) - apply(b, a.xi_h);
  out.eta = apply(a, b.eta) - apply(b, a.eta);
  out.name = "[" + a.name + "," + b.name + "]";
  return out;
}

double flow_transport_check(const Generator& g, const TestSurface& surf,
                            double eps, double t0, double l0, double h0) {
  if (!(eps >= 1e-6 && eps <= 1e-2))
    throw std::invalid_argument("flow_transport_check: eps out of [1e-6,1e-2]");

  // probe offset scales as sqrt(eps): the quadratic-fit aliasing error is
  // then O(eps * mu^2) = O(eps^2), matching the advection error order
  const double mu = 0.25 * std::sqrt(eps);
  const Point4 p0{t0, l0, h0, surf.value(t0, l0, h0)};

  // predicted transported jet increments
  JetPoint j0;
  j0.t = t0; j0.l = l0; j0.h = h0; j0.V = p0.V;
  j0.Vt = surf.d1(0, t0, l0, h0);
  j0.Vl = surf.d1(1, t0, l0, h0);
  j0.Vh = surf.d1(2, t0, l0, h0);
  j0.Vll = surf.d2(1, 1, t0, l0, h0);
  j0.Vlh = surf.d2(1, 2, t0, l0, h0);
  j0.Vhh = surf.d2(2, 2, t0, l0, h0);
  const Prolonged pr = prolong2(g, j0);

  // Advect probe points (x, S(x)) -> (x + eps xi, S + eps eta), then fit the
  // transported-minus-original difference D with a full quadratic in the
  // displaced base coordinates.
  const int off[3] = {-1, 0, 1};
  const int npts = 27, nmon = 10;
  Eigen::MatrixXd A(npts, nmon);
  Eigen::VectorXd rhs(npts);
  int row = 0;
  for (int it : off)
    for (int il : off)
      for (int ih : off) {
        const double t = t0 + mu * it, l = l0 + mu * il, h = h0 + mu * ih;
        const double S = surf.value(t, l, h);
        const Point4 q{t, l, h, S};
        const double tp = t + eps * g.xi_t(q);
        const double lp = l + eps * g.xi_l(q);
        const double hp = h + eps * g.xi_h(q);
        const double Wp = S + eps * g.eta(q);
        const double D = Wp - surf.value(tp, lp, hp);
        const double dt = tp - (t0 + eps * g.xi_t(p0));
        const double dl = lp - (l0 + eps * g.xi_l(p0));
        const double dh = hp - (h0 + eps * g.xi_h(p0));
        double mon[nmon] = {1.0, dt, dl, dh, 0.5 * dt * dt, dt * dl, dt * dh,
                            0.5 * dl * dl, dl * dh, 0.5 * dh * dh};
        for (int m = 0; m < nmon; ++m) A(row, m) = mon[m];
        rhs(row) = D;
        ++row;
      }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);

  // fitted jet of the transported surface minus original-surface jet at the
  // transported point
  const double tp0 = t0 + eps * g.xi_t(p0);
  const double lp0 = l0 + eps * g.xi_l(p0);
  const double hp0 = h0 + eps * g.xi_h(p0);
  const double fit[6] = {
      c(1) + surf.d1(0, tp0, lp0, hp0) - surf.d1(0, t0, l0, h0),
      c(2) + surf.d1(1, tp0, lp0, hp0) - surf.d1(1, t0, l0, h0),
      c(3) + surf.d1(2, tp0, lp0, hp0) - surf.d1(2, t0, l0, h0),
      c(7) + surf.d2(1, 1, tp0, lp0, hp0) - surf.d2(1, 1, t0, l0, h0),
      c(8) + surf.d2(1, 2, tp0, lp0, hp0) - surf.d2(1, 2, t0, l0, h0),
      c(9) + surf.d2(2, 2, tp0, lp0, hp0) - surf.d2(2, 2, t0, l0, h0)};
  const double pred[6] = {eps * pr.eta_t,  eps * pr.eta_l,  eps * pr.eta_h,
                          eps * pr.eta_ll, eps * pr.eta_lh, eps * pr.eta_hh};

  double defect = 0.0;
  for (int i = 0; i < 6; ++i)
    defect = std::max(defect, std::abs(fit[i] - pred[i]));
  return defect;
}

}  // namespace hjbsym
