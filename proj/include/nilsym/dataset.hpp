#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nilsym/liealg.hpp"
#include "nilsym/natred.hpp"
#include "nilsym/rng.hpp"

namespace nilsym {

/// Representation of g on v, stored as one v x v matrix per g-basis vector.
struct Representation {
  int g_dim = 0;
  int v_dim = 0;
  std::vector<Eigen::MatrixXd> matrices;

  /// pi(Z) for Z given by coordinates in the g basis.
  Eigen::MatrixXd apply(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(v_dim, v_dim);
    for (int a = 0; a < g_dim; ++a) m += z(a) * matrices[a];
    return m;
  }
};

/// Construction input (g, v, pi): g with ad-invariant metric, metric space v,
/// faithful skew representation without trivial subrepresentations.
struct DataSet {
  MetricLieAlgebra g;
  BilinearForm v_metric;
  Representation pi;
  std::string name;

  int total_dim() const { return g.dim() + pi.v_dim; }
};

/// Splitting g = [g,g] ⊕ c with semisimple commutator and center c.
struct CompactSplit {
  Subspace gbar;  // subspace of g
  Subspace c;     // subspace of g
};

/// Per-axiom validation verdicts. `valid` aggregates the four axioms plus
/// the structural sanity of the pieces.
struct ValidationReport {
  bool shapes_ok = false;
  bool g_structure_ok = false;      // antisymmetry + Jacobi of g
  bool g_metric_nondegenerate = false;
  bool v_metric_nondegenerate = false;
  bool ad_invariant = false;        // axiom 1
  bool homomorphism = false;        // axiom 2
  bool faithful = false;            // axiom 3a
  bool no_trivial_subrep = false;   // axiom 3b
  bool skew_adjoint = false;        // axiom 4
  bool dims_within_limit = false;   // soft cap, total dim <= 24
  SignatureReport g_signature;
  SignatureReport v_signature;
  SignatureReport total_signature;
  bool lorentzian = false;          // total signature has index one
  double max_residual = 0.0;
  std::vector<std::string> failures;

  bool valid() const {
    return shapes_ok && g_structure_ok && g_metric_nondegenerate &&
           v_metric_nondegenerate && ad_invariant && homomorphism && faithful &&
           no_trivial_subrep && skew_adjoint;
  }
};

/// recover_data_set output: the data set plus the adapted bases of the input
/// algebra it is expressed in.
struct RecoveredDataSet {
  DataSet data;
  Subspace z_basis;
  Subspace v_basis;
};

// -- operations ------------------------------------------------------------

ValidationReport validate_data_set(const DataSet& d, const TolerancePolicy& tol = {});

/// Build n(g, v, pi) = g ⊕ v with the block metric and the bracket defined by
/// <[X,Y], Z> = <pi(Z)X, Y>. Throws InvalidDataSet when validation fails.
MetricLieAlgebra build_nilpotent(const DataSet& d, const TolerancePolicy& tol = {});

/// Recover ((z, [.,.]_z), z^perp, j) from a metric Lie algebra with
/// non-degenerate center, injective j and a natural-reductivity certificate.
RecoveredDataSet recover_data_set(const MetricLieAlgebra& L,
                                  const TolerancePolicy& tol = {});

/// g = [g,g] ⊕ c with a compactness certificate (Killing form negative
/// semi-definite with kernel exactly c). Throws NotCompact otherwise.
CompactSplit compact_split(const MetricLieAlgebra& g, const TolerancePolicy& tol = {});

/// Seeded random validated Lorentzian data set with total dim <= max_total_dim.
DataSet random_lorentzian_data_set(Rng& rng, int max_total_dim = 16,
                                   const TolerancePolicy& tol = {});

/// Adversarial draw: an attempted Lorentzian data set with semisimple g.
/// Every attempt must fail validation (no such data set exists).
DataSet adversarial_semisimple_attempt(Rng& rng);

// -- small constructors used by the generator and the gallery ---------------

/// su(2) with brackets [u1,u2]=u3 cyclic and metric scale * Id (ad-invariant).
MetricLieAlgebra su2_algebra(double metric_scale);

/// Abelian algebra with the given metric.
MetricLieAlgebra abelian_algebra(const BilinearForm& metric);

/// Block-diagonal direct sum of two metric Lie algebras.
MetricLieAlgebra direct_sum(const MetricLieAlgebra& a, const MetricLieAlgebra& b);

/// Realification of the su(2) standard representation on C^2: the three
/// images of the su2_algebra basis as real 4x4 matrices, plus the complex
/// structure (multiplication by i).
struct RealifiedSu2Rep {
  std::vector<Eigen::MatrixXd> generators;  // 3 matrices, 4x4
  Eigen::MatrixXd complex_structure;        // 4x4, squares to -Id
};
RealifiedSu2Rep su2_standard_realified();

Eigen::MatrixXd rotation_generator2();  // [[0,-1],[1,0]]
Eigen::MatrixXd boost_generator2();     // [[0,1],[1,0]]

}  // namespace nilsym
