#ifndef HJBSYM_ALGEBRA_HPP
#define HJBSYM_ALGEBRA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hjbsym/generator.hpp"
#include "hjbsym/pde.hpp"

namespace hjbsym {

/// One- or two-dimensional subalgebra from the printed optimal systems.
struct SubalgebraEntry {
  std::string label;       ///< h1, h2, ...
  int dimension;           ///< of the subalgebra
  std::string generators;  ///< combination in the e-basis, with parameters
};

/// Generator catalog of a PDE spec: U-basis, classification e-basis, basis
/// change, structure constants and the optimal system of subalgebras.
struct AlgebraCatalog {
  PdeId spec_id;
  std::vector<Generator> U;       ///< U1..U3 or U1..U4
  std::vector<Generator> e;       ///< classification basis
  /// e_i = sum_j basis_change[i][j] U_j
  std::vector<std::vector<double>> basis_change;
  /// nonzero structure constants: [e_i, e_j] = c e_k  (i,j,k 0-based)
  struct StructureConstant {
    int i, j, k;
    double c;
  };
  std::vector<StructureConstant> structure;
  std::string classification;
  std::vector<SubalgebraEntry> subalgebras;
};

/// Builds the catalog for a spec.  HARA_GENERAL/LOG_GENERAL carry U1..U3 for
/// any survival; the exponential ids add U4.
AlgebraCatalog catalog(const PDESpec& spec);

/// U4 = d/dt - kappa V d/dV (for iff-exponential counterexamples).
Generator make_U4(double kappa);

/// Per-sample |U^(2) Delta| on the solution manifold (V_t from solve_for_vt).
/// Singular draws are resampled, up to 10x oversampling.
std::vector<double> symmetry_defects(const PDESpec& spec, const Generator& g,
                                     int n, std::uint64_t seed);

/// max over n on-manifold jets
double symmetry_defect(const PDESpec& spec, const Generator& g, int n,
                       std::uint64_t seed);

struct StructureReport {
  double max_deviation;             ///< worst |computed - printed| coefficient
  bool closure_ok;                  ///< every bracket expressible in basis
  std::vector<std::string> issues;  ///< human-readable mismatches
};

/// Recomputes all pairwise brackets of the e-basis, expresses them in the
/// basis by least squares over sample points, and compares against the
/// cataloged structure constants.
StructureReport verify_structure(const AlgebraCatalog& cat,
                                 std::uint64_t seed = 2024);

enum class LInfKind { Constant, Power, ExpH };

/// psi(h,t) d/dV with L psi = psi_t + 0.5 eta^2 h^2 psi_hh
///                            + (mu-delta) h psi_h = 0.
struct LInfSample {
  Field psi;
  Generator shift;  ///< psi d/dV
  std::function<double(double, double)> defect_op;  ///< L psi at (h,t)
  double defect(double h, double t) const { return defect_op(h, t); }
};

LInfSample linf_sample(const ModelParams& p, LInfKind kind);

}  // namespace hjbsym

#endif
