#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nilsym/numkernel.hpp"

namespace nilsym {

/// Structure-constant tensor of a Lie algebra in a fixed basis:
/// [x, y]^k = sum_{ij} c[i][j][k] x_i y_j, stored per output component as
/// comp[k](i, j) = c[i][j][k].
struct StructureTensor {
  int dim = 0;
  std::vector<Eigen::MatrixXd> comp;

  static StructureTensor zero(int n) {
    StructureTensor t;
    t.dim = n;
    t.comp.assign(n, Eigen::MatrixXd::Zero(n, n));
    return t;
  }

  /// Set c[i][j][k] = v and its antisymmetric mirror.
  void set(int i, int j, int k, double v) {
    comp[k](i, j) = v;
    comp[k](j, i) = -v;
  }

  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    Eigen::VectorXd r(dim);
    for (int k = 0; k < dim; ++k) r(k) = x.dot(comp[k] * y);
    return r;
  }

  /// Matrix of ad_x = [x, .].
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd a(dim, dim);
    for (int k = 0; k < dim; ++k) a.row(k) = x.transpose() * comp[k];
    return a;
  }

  double antisymmetry_residual() const;
  double jacobi_residual() const;
};

/// Lie algebra with a non-degenerate symmetric bilinear form.
struct MetricLieAlgebra {
  StructureTensor structure;
  BilinearForm metric;

  int dim() const { return structure.dim; }
  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
};

/// The map j : z -> so(v) defined by <[X,Y], Z> = <j(Z)X, Y>, together with
/// the adapted bases it is expressed in.
struct JMap {
  Subspace center;          // z, canonical basis, subspace of n
  Subspace v;               // z^perp, canonical basis, subspace of n
  BilinearForm metric_z;    // Gram of the metric on the z basis
  BilinearForm metric_v;    // Gram of the metric on the v basis
  std::vector<Eigen::MatrixXd> matrices;  // j(Z_a) on v coordinates
  Subspace ker;             // kernel of j, as a subspace of n

  int center_dim() const { return center.dim(); }
  int v_dim() const { return v.dim(); }

  /// j(Z) for Z given by its coordinates in the center basis.
  Eigen::MatrixXd apply(const Eigen::VectorXd& z_coeffs) const;
  /// Center coordinates of an ambient vector (metric-orthogonal projection).
  Eigen::VectorXd z_coords(const Eigen::VectorXd& x, const BilinearForm& metric) const;
  /// v coordinates of an ambient vector (metric-orthogonal projection).
  Eigen::VectorXd v_coords(const Eigen::VectorXd& x, const BilinearForm& metric) const;
};

// -- operations ------------------------------------------------------------

/// Structural sanity: antisymmetry, Jacobi, symmetric non-degenerate metric.
/// Throws InvalidInput / InvalidForm with a description on failure.
void validate_algebra(const MetricLieAlgebra& L, const TolerancePolicy& tol = {});

Subspace center(const MetricLieAlgebra& L, const TolerancePolicy& tol = {});

Subspace commutator_ideal(const MetricLieAlgebra& L, const TolerancePolicy& tol = {});

bool is_abelian(const MetricLieAlgebra& L, const TolerancePolicy& tol = {});

/// [[n,n],n] = 0 and [n,n] != 0 (abelian algebras are excluded).
bool is_two_step_nilpotent(const MetricLieAlgebra& L, const TolerancePolicy& tol = {});

/// Throws CenterDegenerate when the metric restricted to the center is singular.
JMap j_map(const MetricLieAlgebra& L, const TolerancePolicy& tol = {});

/// Basis of the skew-symmetric derivations Der(n) ∩ so(n), Frobenius-orthonormal.
std::vector<Eigen::MatrixXd> skew_derivations(const MetricLieAlgebra& L,
                                              const TolerancePolicy& tol = {});

bool is_ad_invariant(const BilinearForm& metric, const MetricLieAlgebra& L,
                     const TolerancePolicy& tol = {});

double ad_invariance_residual(const BilinearForm& metric, const MetricLieAlgebra& L);

/// Residual of the derivation identity D[x,y] = [Dx,y] + [x,Dy] over basis pairs.
double derivation_residual(const MetricLieAlgebra& L, const Eigen::MatrixXd& D);

namespace detail {
/// Test hook: j-map solve with an explicit sign on the result, used by the
/// fuzz mutation check. The public j_map calls this with sign = +1.
JMap j_map_with_sign(const MetricLieAlgebra& L, const TolerancePolicy& tol, double sign);
}  // namespace detail

}  // namespace nilsym
