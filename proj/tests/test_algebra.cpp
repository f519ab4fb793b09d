#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hjbsym/algebra.hpp"

using namespace hjbsym;

namespace {

const ModelParams bp = ModelParams::benchmark();

ModelParams res_params() {
  ModelParams p = bp;
  p.kappa = p.r * p.gamma;
  return p;
}

PDESpec spec_of(PdeId id) {
  if (id == PdeId::HaraGeneral || id == PdeId::LogGeneral)
    return PDESpec::make(id, bp, SurvivalFn::super_exponential(0.1, 0.01));
  if (id == PdeId::HaraExpResonant) {
    const ModelParams p = res_params();
    return PDESpec::make(id, p, SurvivalFn::exponential(p.d, p.kappa));
  }
  return PDESpec::make(id, bp, SurvivalFn::exponential(bp.d, bp.kappa));
}

double gen_gap(const Generator& a, const Generator& b, int npts = 50) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> ut(0.1, 2.5), ux(0.5, 4.0),
      uv(-1.0, 1.0);
  double m = 0.0;
  for (int k = 0; k < npts; ++k) {
    const Point4 q{ut(rng), ux(rng), ux(rng), uv(rng)};
    m = std::max(m, std::abs(a.xi_t(q) - b.xi_t(q)));
    m = std::max(m, std::abs(a.xi_l(q) - b.xi_l(q)));
    m = std::max(m, std::abs(a.xi_h(q) - b.xi_h(q)));
    m = std::max(m, std::abs(a.eta(q) - b.eta(q)));
  }
  return m;
}

}  // namespace

TEST_CASE("classification labels") {
  CHECK(catalog(spec_of(PdeId::HaraGeneral)).classification ==
        "A^γ_{3,5}");
  CHECK(catalog(spec_of(PdeId::HaraExp)).classification == "2A₂");
  CHECK(catalog(spec_of(PdeId::HaraExpResonant)).classification ==
        "A^γ_{3,5}⊕A₁");
  CHECK(catalog(spec_of(PdeId::LogGeneral)).classification ==
        "A₁⊕A₂");
  CHECK(catalog(spec_of(PdeId::LogExp)).classification == "2A₂");
}

TEST_CASE("catalog sizes and subalgebra tables") {
  CHECK(catalog(spec_of(PdeId::HaraGeneral)).U.size() == 3);
  CHECK(catalog(spec_of(PdeId::HaraExp)).U.size() == 4);
  CHECK(catalog(spec_of(PdeId::LogGeneral)).U.size() == 3);
  CHECK(catalog(spec_of(PdeId::LogExp)).U.size() == 4);
  CHECK(catalog(spec_of(PdeId::HaraGeneral)).subalgebras.size() == 7);
  CHECK(catalog(spec_of(PdeId::HaraExp)).subalgebras.size() == 22);
  CHECK(catalog(spec_of(PdeId::HaraExpResonant)).subalgebras.size() == 20);
  CHECK(catalog(spec_of(PdeId::LogGeneral)).subalgebras.size() == 6);
  CHECK(catalog(spec_of(PdeId::LogExp)).subalgebras.size() == 22);
  // subalgebra entries reference only cataloged basis vectors
  for (PdeId id : {PdeId::HaraGeneral, PdeId::HaraExp, PdeId::HaraExpResonant,
                   PdeId::LogGeneral, PdeId::LogExp}) {
    const AlgebraCatalog cat = catalog(spec_of(id));
    const int n = static_cast<int>(cat.e.size());
    for (const auto& entry : cat.subalgebras)
      for (std::size_t pos = entry.generators.find('e');
           pos != std::string::npos;
           pos = entry.generators.find('e', pos + 1)) {
        const char d = entry.generators[pos + 1];
        if (d >= '1' && d <= '9') CHECK(d - '0' <= n);  // e<k> within basis
      }
  }
}

TEST_CASE("basis change reproduces the classification basis pointwise") {
  for (PdeId id : {PdeId::HaraGeneral, PdeId::HaraExp, PdeId::HaraExpResonant,
                   PdeId::LogGeneral, PdeId::LogExp}) {
    const AlgebraCatalog cat = catalog(spec_of(id));
    const int n = static_cast<int>(cat.e.size());
    // e_i from the matrix must equal the stored generator fields
    for (int i = 0; i < n; ++i) {
      Generator combo{Field::constant(0), Field::constant(0),
                      Field::constant(0), Field::constant(0), "combo"};
      for (int j = 0; j < n; ++j) {
        const double w = cat.basis_change[i][j];
        if (w == 0.0) continue;
        combo = combo.plus(cat.U[j].scaled(w));
      }
      CHECK(gen_gap(combo, cat.e[i]) < 1e-12);
    }
    // invertibility via a crude determinant check for n in {3,4}
    // (the matrices are permutation-like with scaling blocks)
    // verified indirectly: verify_structure closure succeeds in all bases
  }
}

TEST_CASE("structure constants reproduced to 1e-10") {
  for (PdeId id : {PdeId::HaraGeneral, PdeId::HaraExp, PdeId::HaraExpResonant,
                   PdeId::LogGeneral, PdeId::LogExp}) {
    CAPTURE(to_string(id));
    const StructureReport rep = verify_structure(catalog(spec_of(id)));
    CHECK(rep.closure_ok);
    CHECK(rep.max_deviation <= 1e-10);
    CHECK(rep.issues.empty());
  }
}

TEST_CASE("injected fault in the structure constants is detected") {
  AlgebraCatalog cat = catalog(spec_of(PdeId::HaraGeneral));
  for (auto& sc : cat.structure)
    if (sc.i == 1 && sc.j == 2) sc.c += 0.1;  // gamma -> gamma + 0.1
  const StructureReport rep = verify_structure(cat);
  CHECK(rep.max_deviation > 0.09);
  CHECK(rep.max_deviation < 0.11);
  CHECK(!rep.issues.empty());
}

TEST_CASE("symmetry defects of the cataloged generators are <= 1e-8") {
  for (PdeId id : {PdeId::HaraGeneral, PdeId::HaraExp, PdeId::HaraExpResonant,
                   PdeId::LogGeneral, PdeId::LogExp}) {
    CAPTURE(to_string(id));
    const PDESpec spec = spec_of(id);
    const AlgebraCatalog cat = catalog(spec);
    int gi = 0;
    for (const Generator& g : cat.U) {
      CAPTURE(gi);
      CHECK(symmetry_defect(spec, g, 200, 99 + gi) <= 1e-8);
      ++gi;
    }
  }
}

TEST_CASE("L-infinity shifts are symmetries and solve the linear PDE") {
  const PDESpec spec = spec_of(PdeId::HaraExp);
  for (LInfKind kind : {LInfKind::Constant, LInfKind::Power, LInfKind::ExpH}) {
    const LInfSample s = linf_sample(bp, kind);
    for (double h : {0.5, 1.0, 2.0})
      for (double t : {0.0, 0.7, 2.0})
        CHECK(std::abs(s.defect(h, t)) <= 1e-12);
    CHECK(symmetry_defect(spec, s.shift, 200, 17) <= 1e-8);
  }
  SUBCASE("const sample has defect 0 exactly") {
    const LInfSample s = linf_sample(bp, LInfKind::Constant);
    CHECK(s.defect(1.3, 0.4) == 0.0);
  }
  SUBCASE("exp_h hand check at (h=2, t=1, mu=0.03, delta=0.02)") {
    const LInfSample s = linf_sample(bp, LInfKind::ExpH);
    CHECK(std::abs(s.defect(2.0, 1.0)) <= 1e-14);
  }
  SUBCASE("power kind error paths") {
    ModelParams p = bp;
    p.eta = 0.0;
    CHECK_THROWS_AS(linf_sample(p, LInfKind::Power), ParameterError);
    p = bp;
    // mu - delta = eta^2/2 makes the nontrivial root collapse to zero
    p.mu = p.delta + 0.5 * p.eta * p.eta;
    CHECK_THROWS_AS(linf_sample(p, LInfKind::Power), ParameterError);
  }
}

TEST_CASE("U4 is a symmetry iff the survival is exponential") {
  const Generator U4 = make_U4(bp.kappa);
  SUBCASE("exponential: defect <= 1e-8") {
    CHECK(symmetry_defect(spec_of(PdeId::HaraExp), U4, 100, 3) <= 1e-8);
    CHECK(symmetry_defect(spec_of(PdeId::LogExp), U4, 100, 4) <= 1e-8);
  }
  SUBCASE("superexponential: defect >= 1e-2 on >= 95% of jets, U1-U3 stay") {
    // strongly non-exponential family used by the iff-exponential runs
    const SurvivalFn sx = SurvivalFn::super_exponential(1.0, 0.1);
    for (PdeId id : {PdeId::HaraGeneral, PdeId::LogGeneral}) {
      const PDESpec spec = PDESpec::make(id, bp, sx);
      const auto defects = symmetry_defects(spec, U4, 100, 5);
      int big = 0;
      for (double d : defects)
        if (d >= 1e-2) ++big;
      CHECK(big >= 95);
      for (const Generator& g : catalog(spec).U)
        CHECK(symmetry_defect(spec, g, 100, 6) <= 1e-8);
    }
  }
}

TEST_CASE("HARA catalog converges to the LOG catalog as gamma -> 0") {
  const SurvivalFn s = SurvivalFn::exponential(1.0, bp.kappa);
  double prev = 1e100;
  for (double g : {1e-2, 1e-3}) {
    ModelParams p = bp;
    p.gamma = g;
    const AlgebraCatalog hara =
        catalog(PDESpec::make(PdeId::HaraExp, p, s));
    const AlgebraCatalog logc = catalog(PDESpec::make(PdeId::LogExp, p, s));
    double gap = 0.0;
    for (std::size_t i = 0; i < hara.U.size(); ++i)
      gap = std::max(gap, gen_gap(hara.U[i], logc.U[i]));
    CHECK(gap < prev);
    CHECK(gap <= 10.0 * g);  // max gap <= C gamma
    prev = gap;
  }
}

TEST_CASE("requesting U4 from a non-exponential catalog is an error") {
  // the general catalogs simply do not carry U4
  CHECK(catalog(spec_of(PdeId::HaraGeneral)).U.size() == 3);
  CHECK(catalog(spec_of(PdeId::LogGeneral)).U.size() == 3);
  // and building an exponential-id spec on superexponential survival throws
  CHECK_THROWS_AS(PDESpec::make(PdeId::HaraExp, bp,
                                SurvivalFn::super_exponential(0.1, 0.01)),
                  ParameterError);
}

TEST_CASE("adding an L-infinity shift keeps the defect small (closure)") {
  const PDESpec spec = spec_of(PdeId::LogExp);
  const AlgebraCatalog cat = catalog(spec);
  const LInfSample psi = linf_sample(bp, LInfKind::ExpH);
  const Generator sum = cat.U[2].plus(psi.shift);
  CHECK(symmetry_defect(spec, sum, 200, 21) <= 1e-8);
}
