#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nilsym/dataset.hpp"

namespace nilsym {

/// Structural description of the isotropy algebra: the embedded commutator
/// part acting as (ad Z, pi Z) on n = g ⊕ v, and the commutant part acting
/// as 0 ⊕ B. Both consist of skew-symmetric derivations of n.
struct IsotropySplit {
  std::vector<Eigen::MatrixXd> gbar_part;  // matrices on n, one per gbar basis vector
  std::vector<Eigen::MatrixXd> u_part;     // matrices on n (zero on the g block)
  std::vector<Eigen::MatrixXd> u_on_v;     // the same u generators on v only
  int total_dim = 0;
  double span_residual = 0.0;              // mutual containment vs the direct solve
};

struct GroupCheckReport {
  bool ok = false;
  double max_residual = 0.0;
};

// -- operations ------------------------------------------------------------

/// Basis of u = {B in so(v) : [B, pi(Z)] = 0 for all Z}, Frobenius-orthonormal.
std::vector<Eigen::MatrixXd> commutant_skew(const DataSet& d,
                                            const TolerancePolicy& tol = {});

/// The derivation (ad Z) ⊕ (pi Z) of n for Z in the commutator part of g.
/// Throws ZNotInGbar when Z has a component outside [g, g].
Eigen::MatrixXd embed_gbar(const DataSet& d, const Eigen::VectorXd& Z,
                           const TolerancePolicy& tol = {});

/// Assemble the isotropy algebra structurally and verify that it matches the
/// direct skew-derivation solve in dimension and span (TheoremMismatch else).
IsotropySplit isotropy_split(const DataSet& d, const TolerancePolicy& tol = {});

/// Group-level spot check: with phi = exp(t ad_Z) and T = exp(t pi(Z)),
/// pi(phi Z') = T pi(Z') T^{-1} on sampled Z', and the pair preserves the
/// metric and the brackets of n.
GroupCheckReport group_level_check(const DataSet& d, const Eigen::VectorXd& Z,
                                   double t, int samples, Rng& rng,
                                   const TolerancePolicy& tol = {});

/// Lie algebra n ⋊ h^aut with the semidirect bracket rules; the h^aut basis
/// must be closed under commutators (checked by least squares).
StructureTensor build_iso_aut(const MetricLieAlgebra& L,
                              const std::vector<Eigen::MatrixXd>& haut,
                              const TolerancePolicy& tol = {});

}  // namespace nilsym
