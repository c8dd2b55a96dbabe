#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nilsym/errors.hpp"
#include "nilsym/tolerance.hpp"

namespace nilsym {

/// Symmetric bilinear form stored as its Gram matrix in a fixed basis.
struct BilinearForm {
  Eigen::MatrixXd gram;

  BilinearForm() = default;
  explicit BilinearForm(Eigen::MatrixXd g) : gram(std::move(g)) {}

  int dim() const { return static_cast<int>(gram.rows()); }

  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return x.dot(gram * y);
  }

  static BilinearForm euclidean(int n) {
    return BilinearForm(Eigen::MatrixXd::Identity(n, n));
  }
  /// Canonical Lorentzian form diag(-1, 1, ..., 1).
  static BilinearForm minkowski(int n) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    g(0, 0) = -1.0;
    return BilinearForm(g);
  }
};

enum class SignatureClass { riemannian, lorentzian, degenerate, higher_index };

std::string to_string(SignatureClass c);

/// Eigenvalue-sign census of a symmetric form. The Lorentzian convention is
/// index one: exactly one negative direction and no null ones.
struct SignatureReport {
  int positive = 0;
  int negative = 0;
  int null = 0;
  SignatureClass cls = SignatureClass::riemannian;

  int dim() const { return positive + negative + null; }
  bool nondegenerate() const { return null == 0; }
};

/// Linear subspace of R^ambient stored as a canonical orthonormal basis
/// (orthonormalized row-echelon form), so equal subspaces have equal bases.
struct Subspace {
  int ambient_dim = 0;
  Eigen::MatrixXd basis;  // ambient_dim x dim, orthonormal columns

  Subspace() = default;
  Subspace(int ambient, Eigen::MatrixXd b) : ambient_dim(ambient), basis(std::move(b)) {}

  int dim() const { return static_cast<int>(basis.cols()); }

  /// Canonicalize the span of arbitrary columns (rank-revealing).
  static Subspace span_of(const Eigen::MatrixXd& columns, const TolerancePolicy& tol = {});
  static Subspace zero(int ambient) { return Subspace(ambient, Eigen::MatrixXd(ambient, 0)); }
  static Subspace full(int ambient);

  /// Euclidean-orthogonal projector onto the subspace.
  Eigen::MatrixXd projector() const { return basis * basis.transpose(); }

  /// Row index of the leading entry of the first basis vector (-1 if empty).
  int first_pivot() const;
};

// -- operations ------------------------------------------------------------

/// Sign census of the eigenvalues of a symmetric form; eigenvalues below the
/// rank threshold count as null. Throws InvalidForm on non-symmetric input.
SignatureReport signature(const BilinearForm& form, const TolerancePolicy& tol = {});

/// Gram matrix of the form restricted to a subspace (B^T G B).
BilinearForm restrict_form(const BilinearForm& form, const Subspace& s);

/// Orthogonal complement w.r.t. a non-degenerate ambient form.
/// Throws AmbientDegenerate when the ambient form is singular.
Subspace orthogonal_complement(const Subspace& s, const BilinearForm& form,
                               const TolerancePolicy& tol = {});

/// Null space of a linear map via SVD.
Subspace kernel(const Eigen::MatrixXd& map, const TolerancePolicy& tol = {});

/// Intersection of the kernels of several maps (kernel of the vertical stack).
Subspace common_kernel(const std::vector<Eigen::MatrixXd>& maps,
                       const TolerancePolicy& tol = {});

/// Intersection of two subspaces.
Subspace intersect(const Subspace& a, const Subspace& b, const TolerancePolicy& tol = {});

/// True iff A^T G + G A vanishes up to tol.abs_tol * (1 + |G||A|).
bool is_skew_adjoint(const Eigen::MatrixXd& a, const BilinearForm& form,
                     const TolerancePolicy& tol = {});

/// Residual of the skew-adjointness identity (unnormalized Frobenius norm).
double skew_adjoint_residual(const Eigen::MatrixXd& a, const BilinearForm& form);

/// sin of the largest principal angle between equal-dimensional subspaces.
/// Returns 1 when dimensions differ (and 0 for two empty subspaces).
double max_principal_angle_sin(const Subspace& a, const Subspace& b);

/// Subspace equality up to principal angles < angle_tol.
bool subspaces_equal(const Subspace& a, const Subspace& b, double angle_tol = 1e-7);

/// True iff every vector of b lies in a (up to angle_tol).
bool subspace_contains(const Subspace& a, const Subspace& b, double angle_tol = 1e-7);

}  // namespace nilsym
