#include "hjbsym/algebra.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace hjbsym {

namespace {

Field Fc(double c) { return Field::constant(c); }
Field Fco(Coord c) { return Field::coordinate(c); }

Field antideriv_field(const SurvivalFn& s) {
  return Field::time_function(
      [s](double t, int k) { return s.antideriv_derivative(t, k); }, "F");
}

Generator make_U1() {
  return Generator{Fc(0), Fc(0), Fc(0), Fc(1), "U1"};
}

Generator make_U2(double r) {
  return Generator{Fc(0), exp(Fc(r) * Fco(Coord::T)), Fc(0), Fc(0), "U2"};
}

Generator make_U3_hara(double gamma, const SurvivalFn& s) {
  Field F = antideriv_field(s);
  Field eta = Fc(gamma) * Fco(Coord::V) - Fc(1.0 - gamma) * F;
  return Generator{Fc(0), Fco(Coord::L), Fco(Coord::H), eta, "U3"};
}

Generator make_U3_log(const SurvivalFn& s) {
  Field F = antideriv_field(s);
  return Generator{Fc(0), Fco(Coord::L), Fco(Coord::H), -F, "U3"};
}

Generator combine(const std::vector<Generator>& U,
                  const std::vector<double>& w, const std::string& name) {
  Generator g{Fc(0), Fc(0), Fc(0), Fc(0), name};
  for (std::size_t j = 0; j < U.size(); ++j) {
    if (w[j] == 0.0) continue;
    g.xi_t = g.xi_t + Fc(w[j]) * U[j].xi_t;
    g.xi_l = g.xi_l + Fc(w[j]) * U[j].xi_l;
    g.xi_h = g.xi_h + Fc(w[j]) * U[j].xi_h;
    g.eta = g.eta + Fc(w[j]) * U[j].eta;
  }
  return g;
}

std::vector<SubalgebraEntry> table_L3_hara() {
  return {{"h1", 1, "<e1>"},         {"h2", 1, "<e2>"},
          {"h3", 1, "<e3>"},         {"h4", 1, "<e1 +- e2>"},
          {"h5", 2, "<e1, e2>"},     {"h6", 2, "<e3, e1>"},
          {"h7", 2, "<e3, e2>"}};
}

std::vector<SubalgebraEntry> table_2A2() {
  // shared by HARA_EXP (kappa != r gamma) and LOG_EXP
  return {{"h1", 1, "<e2>"},
          {"h2", 1, "<e3>"},
          {"h3", 1, "<e4>"},
          {"h4", 1, "<e1 + omega e3>"},
          {"h5", 1, "<e1 +- e4>"},
          {"h6", 1, "<e2 +- e4>"},
          {"h7", 1, "<e2 +- e3>"},
          {"h8", 2, "<e1, e3>"},
          {"h9", 2, "<e1, e4>"},
          {"h10", 2, "<e2, e3>"},
          {"h11", 2, "<e2, e4>"},
          {"h12", 2, "<e1 + omega e3, e2>"},
          {"h13", 2, "<e3 + omega e1, e4>"},
          {"h14", 2, "<e1 +- e4, e2>"},
          {"h15", 2, "<e3 +- e2, e4>"},
          {"h16", 2, "<e1 + e3, e2 +- e4>"},
          {"h17", 3, "<e1, e3, e2>"},
          {"h18", 3, "<e1, e4, e2>"},
          {"h19", 3, "<e1, e3, e4>"},
          {"h20", 3, "<e2, e3, e4>"},
          {"h21", 3, "<e1 +- e3, e2, e4>"},
          {"h22", 3, "<e1 + omega e3, e2, e4>"}};
}

std::vector<SubalgebraEntry> table_res() {
  return {{"h1", 1, "<e1>"},
          {"h2", 1, "<e2>"},
          {"h3", 1, "<e4>"},
          {"h4", 1, "<e1 +- e4>"},
          {"h5", 1, "<e2 +- e4>"},
          {"h6", 1, "<e3 + omega e4>"},
          {"h7", 1, "<e1 +- e2 + omega e4>"},
          {"h8", 2, "<e1, e2>"},
          {"h9", 2, "<e1, e4>"},
          {"h10", 2, "<e2, e4>"},
          {"h11", 2, "<e3, e4>"},
          {"h12", 2, "<e1 +- e2, e4>"},
          {"h13", 2, "<e1, e2 +- e4>"},
          {"h14", 2, "<e1 +- e4, e2 + omega e4>"},
          {"h15", 2, "<e3 + omega e4, e1>"},
          {"h16", 2, "<e3 + omega e4, e2>"},
          {"h17", 3, "<e1, e2, e4>"},
          {"h18", 3, "<e3, e4, e1>"},
          {"h19", 3, "<e3, e4, e2>"},
          {"h20", 3, "<e3 + omega e4, e1, e2>"}};
}

std::vector<SubalgebraEntry> table_L3_log() {
  return {{"h1", 1, "<e1 cos(beta) + e3 sin(beta)>"},
          {"h2", 1, "<e2 +- e3>"},
          {"h3", 1, "<e2>"},
          {"h4", 2, "<e1, e3>"},
          {"h5", 2, "<e2, e3>"},
          {"h6", 2, "<e1 + omega e3, e2>"}};
}

}  // namespace

Generator make_U4(double kappa) {
  return Generator{Fc(1), Fc(0), Fc(0), Fc(-kappa) * Fco(Coord::V), "U4"};
}

AlgebraCatalog catalog(const PDESpec& spec) {
  const ModelParams& p = spec.params;
  AlgebraCatalog cat;
  cat.spec_id = spec.id;
  const Generator U1 = make_U1();
  const Generator U2 = make_U2(p.r);

  switch (spec.id) {
    case PdeId::HaraGeneral: {
      cat.U = {U1, U2, make_U3_hara(p.gamma, spec.survival)};
      cat.basis_change = {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
      cat.structure = {{0, 2, 0, 1.0}, {1, 2, 1, p.gamma}};
      cat.classification = "A^γ_{3,5}";
      cat.subalgebras = table_L3_hara();
      break;
    }
    case PdeId::HaraExp: {
      if (std::abs(p.kappa - p.r * p.gamma) < 1e-14)
        throw ParameterError("HARA_EXP catalog requires kappa != r*gamma");
      cat.U = {U1, U2, make_U3_hara(p.gamma, spec.survival),
               make_U4(p.kappa)};
      const double q = p.kappa - p.r * p.gamma;
      cat.basis_change = {{0, 0, p.r / q, 1.0 / q},
                          {1, 0, 0, 0},
                          {0, 0, -p.kappa / q, -p.gamma / q},
                          {0, 1, 0, 0}};
      cat.structure = {{0, 1, 1, 1.0}, {2, 3, 3, 1.0}};
      cat.classification = "2A₂";
      cat.subalgebras = table_2A2();
      break;
    }
    case PdeId::HaraExpResonant: {
      cat.U = {U1, U2, make_U3_hara(p.gamma, spec.survival),
               make_U4(p.kappa)};
      cat.basis_change = {{0, 1, 0, 0},
                          {1, 0, 0, 0},
                          {0, 0, 0, -1.0 / p.r},
                          {0, 0, 1, 1.0 / p.r}};
      cat.structure = {{0, 2, 0, 1.0}, {1, 2, 1, p.gamma}};
      cat.classification = "A^γ_{3,5}⊕A₁";
      cat.subalgebras = table_res();
      break;
    }
    case PdeId::LogGeneral: {
      cat.U = {U1, U2, make_U3_log(spec.survival)};
      cat.basis_change = {{0, 0, -1}, {0, 1, 0}, {-1, 0, 0}};
      cat.structure = {{0, 1, 1, 1.0}};
      cat.classification = "A₁⊕A₂";
      cat.subalgebras = table_L3_log();
      break;
    }
    case PdeId::LogExp: {
      cat.U = {U1, U2, make_U3_log(spec.survival), make_U4(p.kappa)};
      cat.basis_change = {{0, 0, p.r / p.kappa, 1.0 / p.kappa},
                          {1, 0, 0, 0},
                          {0, 0, -1, 0},
                          {0, 1, 0, 0}};
      cat.structure = {{0, 1, 1, 1.0}, {2, 3, 3, 1.0}};
      cat.classification = "2A₂";
      cat.subalgebras = table_2A2();
      break;
    }
  }

  for (std::size_t i = 0; i < cat.basis_change.size(); ++i) {
    Generator e = combine(cat.U, cat.basis_change[i],
                          "e" + std::to_string(i + 1));
    cat.e.push_back(e);
  }
  return cat;
}

std::vector<double> symmetry_defects(const PDESpec& spec, const Generator& g,
                                     int n, std::uint64_t seed) {
  JetSampler sampler(seed);
  std::vector<double> out;
  out.reserve(n);
  int attempts = 0;
  const int max_attempts = 10 * n;
  while (static_cast<int>(out.size()) < n && attempts < max_attempts) {
    ++attempts;
    JetPoint j = sampler.sample();
    try {
      j.Vt = solve_for_vt(spec, j);
      using D = Dual<double, 10>;
      JetT<D> q;
      q.t = D::variable(j.t, 0);
      q.l = D::variable(j.l, 1);
      q.h = D::variable(j.h, 2);
      q.V = D::variable(j.V, 3);
      q.Vt = D::variable(j.Vt, 4);
      q.Vl = D::variable(j.Vl, 5);
      q.Vh = D::variable(j.Vh, 6);
      q.Vll = D::variable(j.Vll, 7);
      q.Vlh = D::variable(j.Vlh, 8);
      q.Vhh = D::variable(j.Vhh, 9);
      const D R = residual_t(spec, q);
      const Prolonged pr = prolong2(g, j);
      const Point4 pt{j.t, j.l, j.h, j.V};
      const double defect =
          g.xi_t(pt) * R.d[0] + g.xi_l(pt) * R.d[1] + g.xi_h(pt) * R.d[2] +
          g.eta(pt) * R.d[3] + pr.eta_t * R.d[4] + pr.eta_l * R.d[5] +
          pr.eta_h * R.d[6] + pr.eta_ll * R.d[7] + pr.eta_lh * R.d[8] +
          pr.eta_hh * R.d[9];
      out.push_back(std::abs(defect));
    } catch (const DomainError&) {
      continue;  // resample singular draws
    }
  }
  if (static_cast<int>(out.size()) < n)
    throw DomainError("symmetry_defects: sampler exhausted");
  return out;
}

double symmetry_defect(const PDESpec& spec, const Generator& g, int n,
                       std::uint64_t seed) {
  double m = 0.0;
  for (double d : symmetry_defects(spec, g, n, seed)) m = std::max(m, d);
  return m;
}

StructureReport verify_structure(const AlgebraCatalog& cat,
                                 std::uint64_t seed) {
  StructureReport rep{0.0, true, {}};
  const int npts = 8;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.1, 2.5), ux(0.5, 4.0),
      uv(-1.0, 1.0);
  std::vector<Point4> pts;
  for (int k = 0; k < npts; ++k)
    pts.push_back(Point4{ut(rng), ux(rng), ux(rng), uv(rng)});

  const int n = static_cast<int>(cat.e.size());
  auto coeff_rows = [&](const Generator& g, Eigen::VectorXd& rhs,
                        Eigen::MatrixXd& A) {
    // stack the 4 coefficient fields at the sample points
    A.resize(4 * npts, n);
    rhs.resize(4 * npts);
    for (int pI = 0; pI < npts; ++pI) {
      const Point4& q = pts[pI];
      const double gv[4] = {g.xi_t(q), g.xi_l(q), g.xi_h(q), g.eta(q)};
      for (int c = 0; c < 4; ++c) {
        rhs(4 * pI + c) = gv[c];
        for (int b = 0; b < n; ++b) {
          const Generator& eb = cat.e[b];
          const double ev[4] = {eb.xi_t(q), eb.xi_l(q), eb.xi_h(q), eb.eta(q)};
          A(4 * pI + c, b) = ev[c];
        }
      }
    }
  };

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Generator br = lie_bracket(cat.e[i], cat.e[j]);
      Eigen::MatrixXd A;
      Eigen::VectorXd rhs;
      coeff_rows(br, rhs, A);
      const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
      const double resid = (A * coef - rhs).cwiseAbs().maxCoeff();
      if (resid > 1e-6) {
        rep.closure_ok = false;
        rep.issues.push_back("[" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) +
                             "] not expressible in basis");
        continue;
      }
      Eigen::VectorXd printed = Eigen::VectorXd::Zero(n);
      for (const auto& sc : cat.structure)
        if (sc.i == i && sc.j == j) printed(sc.k) = sc.c;
      const double dev = (coef - printed).cwiseAbs().maxCoeff();
      if (dev > rep.max_deviation) rep.max_deviation = dev;
      if (dev > 1e-6)
        rep.issues.push_back("[e" + std::to_string(i + 1) + ",e" +
                             std::to_string(j + 1) +
                             "] deviates by " + std::to_string(dev));
    }
  }
  return rep;
}

LInfSample linf_sample(const ModelParams& p, LInfKind kind) {
  Field psi;
  switch (kind) {
    case LInfKind::Constant:
      psi = Fc(1.0);
      break;
    case LInfKind::Power: {
      if (p.eta == 0.0)
        throw ParameterError("linf_sample: power kind needs eta > 0");
      const double beta = 1.0 - 2.0 * (p.mu - p.delta) / (p.eta * p.eta);
      if (beta == 0.0)
        throw ParameterError("linf_sample: roots coincide (beta = 0)");
      psi = pow(Fco(Coord::H), beta);
      break;
    }
    case LInfKind::ExpH:
      psi = Fco(Coord::H) * exp(Fc(-(p.mu - p.delta)) * Fco(Coord::T));
      break;
  }
  LInfSample s{psi, Generator{Fc(0), Fc(0), Fc(0), psi, "psi-shift"}, {}};
  const Field psi_t = psi.diff(Coord::T);
  const Field psi_h = psi.diff(Coord::H);
  const Field psi_hh = psi_h.diff(Coord::H);
  const double half_eta2 = 0.5 * p.eta * p.eta;
  const double md = p.mu - p.delta;
  s.defect_op = [psi_t, psi_h, psi_hh, half_eta2, md](double h, double t) {
    const Point4 q{t, 0.0, h, 0.0};
    return psi_t(q) + half_eta2 * h * h * psi_hh(q) + md * h * psi_h(q);
  };
  return s;
}

}  // namespace hjbsym
