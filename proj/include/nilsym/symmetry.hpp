#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nilsym/dataset.hpp"
#include "nilsym/isotropy.hpp"

namespace nilsym {

/// Killing field V~ = U* + D~ of iso^aut(N), identified by its n-part U and
/// its isotropy part D (a matrix in the h^aut span). The value at e is U.
struct KillingPair {
  Eigen::VectorXd u;
  Eigen::MatrixXd d;
  Eigen::VectorXd d_coeffs;  // coordinates of d in the orthonormalized basis
};

/// Kernel of the linearized (nabla V~)_e operator on n ⊕ h^aut.
struct TransvectionSpace {
  std::vector<KillingPair> basis;
  Subspace s_e;                // values at e
  int index = 0;               // dim s_e
  SignatureReport s_e_signature;
  std::vector<Eigen::MatrixXd> haut;  // orthonormalized h^aut basis used
};

/// Span of the isotropy parts of brackets of transvections.
struct SymmetricIsotropy {
  std::vector<Eigen::MatrixXd> basis;
  double n_component_residual = 0.0;  // value at e of the brackets; must vanish
};

/// Outcome of the three independent solves for the symmetry subspace.
struct MainTheoremReport {
  Subspace s_e;
  Subspace fixed_points;
  Subspace center_of_g;  // c embedded into n
  double angle_se_f0 = 0.0;
  double angle_se_c = 0.0;
  SignatureReport s_e_signature;
  bool s_e_nondegenerate = false;
  int index = 0;
  bool assumes_full_isotropy_is_haut = true;
};

// -- operations ------------------------------------------------------------

/// Matrix of w -> (nabla_w V~)_e assembled from the case split
/// (both in v: -[W,U]/2; mixed: -j(Z)X/2; both in z: 0) plus D(w).
Eigen::MatrixXd nabla_killing_at_e(const MetricLieAlgebra& L, const JMap& jm,
                                   const Eigen::VectorXd& u, const Eigen::MatrixXd& d);

/// Kernel of the big linear solve over n ⊕ span(haut).
TransvectionSpace transvection_space(const MetricLieAlgebra& L,
                                     const std::vector<Eigen::MatrixXd>& haut,
                                     const TolerancePolicy& tol = {});

/// Common kernel of the h^aut action on n (fixed points of the connected
/// isotropy representation); all of n when the basis is empty.
Subspace fixed_point_subspace(const MetricLieAlgebra& L,
                              const std::vector<Eigen::MatrixXd>& haut,
                              const TolerancePolicy& tol = {});

/// The explicit transvection (Z, pi(Z)/2) for central Z (ZNotCentral else).
KillingPair transvection_for_central(const DataSet& d, const Eigen::VectorXd& Z,
                                     const TolerancePolicy& tol = {});

/// Three independent solves (transvections, fixed points, center of g) that
/// must agree; throws TheoremMismatch when they do not, or when s_e is
/// degenerate.
MainTheoremReport verify_main_theorem(const DataSet& d, const TolerancePolicy& tol = {});

/// Span of [p~, p~] inside the isotropy, computed with the semidirect bracket
/// and the Killing anti-isomorphism sign applied here, once.
SymmetricIsotropy symmetric_isotropy(const MetricLieAlgebra& L,
                                     const TransvectionSpace& p,
                                     const TolerancePolicy& tol = {});

}  // namespace nilsym
