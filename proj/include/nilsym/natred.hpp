#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nilsym/liealg.hpp"

namespace nilsym {

/// The maps tau_Z on the center defined by [j(Z), j(Z')] = j(tau_Z Z').
struct TauMap {
  std::vector<Eigen::MatrixXd> matrices;  // one z x z matrix per center basis vector
  double relation_residual = 0.0;
  double skew_residual = 0.0;
};

/// Outcome of the natural-reductivity test. When j is not injective only the
/// necessary condition can be certified and `caveat_j_not_injective` is set.
struct NatRedCertificate {
  bool is_subalgebra = false;
  std::optional<TauMap> tau;
  std::optional<StructureTensor> induced_bracket;
  bool verdict = false;
  bool caveat_j_not_injective = false;
  double max_residual = 0.0;
};

/// Reductive decomposition g = m ⊕ h of an ambient algebra, with the metric
/// given in m-coordinates.
struct ReductiveDecomposition {
  StructureTensor ambient;
  Subspace m;
  Subspace h;
  Eigen::MatrixXd metric_m;
};

// -- operations ------------------------------------------------------------

/// True iff every [j(Z_a), j(Z_b)] lies in span{j(Z_c)} (least-squares test).
bool check_j_subalgebra(const JMap& j, const TolerancePolicy& tol = {});

/// Solve for tau by expressing commutators in the j-image basis.
/// Throws JNotInjective / NotSubalgebra when the preconditions fail.
TauMap solve_tau(const JMap& j, const TolerancePolicy& tol = {});

/// Lie bracket on z defined by [Z, Z']_z = tau_Z(Z'). Verifies antisymmetry,
/// Jacobi, that j represents the new bracket and that the z-metric is
/// ad-invariant for it; throws JacobiFailure on numerical inconsistency.
StructureTensor induced_center_bracket(const TauMap& tau, const JMap& j,
                                       const TolerancePolicy& tol = {});

/// Full certificate for a 2-step algebra with non-degenerate center.
NatRedCertificate is_naturally_reductive(const MetricLieAlgebra& L,
                                         const TolerancePolicy& tol = {});

/// Direct evaluation of the cyclic skewness condition on a user-supplied
/// reductive decomposition. Throws NotReductiveDecomposition when
/// ad(h) m ⊄ m or the decomposition is not direct.
bool check_natred_definition(const ReductiveDecomposition& dec,
                             const TolerancePolicy& tol = {},
                             double* max_residual = nullptr);

}  // namespace nilsym
