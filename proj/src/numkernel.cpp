#include "nilsym/numkernel.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace nilsym {

namespace {

// Reduced row echelon form of a matrix with near-orthonormal rows.
// Row pivoting by largest absolute entry per column; pivots of an
// orthonormal row block are bounded below, so this is stable here.
void rref_inplace(Eigen::MatrixXd& m, std::vector<int>& pivots, double pivot_tol) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  pivots.clear();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = r;
    for (int i = r + 1; i < rows; ++i)
      if (std::abs(m(i, c)) > std::abs(m(best, c))) best = i;
    if (std::abs(m(best, c)) <= pivot_tol) continue;
    m.row(r).swap(m.row(best));
    m.row(r) /= m(r, c);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      m.row(i) -= m(i, c) * m.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
}

}  // namespace

std::string to_string(SignatureClass c) {
  switch (c) {
    case SignatureClass::riemannian: return "riemannian";
    case SignatureClass::lorentzian: return "lorentzian";
    case SignatureClass::degenerate: return "degenerate";
    case SignatureClass::higher_index: return "higher_index";
  }
  return "unknown";
}

Subspace Subspace::span_of(const Eigen::MatrixXd& columns, const TolerancePolicy& tol) {
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() == 0) return Subspace::zero(n);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  const double th = tol.rank_threshold(static_cast<int>(columns.rows()),
                                       static_cast<int>(columns.cols()), smax);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > th) ++rank;
  if (rank == 0) return Subspace::zero(n);

  // Canonical form: RREF of the transposed orthonormal basis, then
  // re-orthonormalized rows with positive pivot entries.
  Eigen::MatrixXd rows = svd.matrixU().leftCols(rank).transpose();
  std::vector<int> pivots;
  rref_inplace(rows, pivots, 1e-10);
  const int k = static_cast<int>(pivots.size());
  Eigen::MatrixXd basis(n, k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = rows.row(i).transpose();
    for (int j = 0; j < i; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    v.normalize();
    basis.col(i) = v;
  }
  for (int i = 0; i < k; ++i)
    if (basis(pivots[i], i) < 0.0) basis.col(i) = -basis.col(i);
  return Subspace(n, std::move(basis));
}

Subspace Subspace::full(int ambient) {
  return Subspace(ambient, Eigen::MatrixXd::Identity(ambient, ambient));
}

int Subspace::first_pivot() const {
  if (dim() == 0) return -1;
  for (int i = 0; i < ambient_dim; ++i)
    if (std::abs(basis(i, 0)) > 1e-8) return i;
  return -1;
}

SignatureReport signature(const BilinearForm& form, const TolerancePolicy& tol) {
  const Eigen::MatrixXd& g = form.gram;
  if (g.rows() != g.cols()) throw InvalidForm("gram matrix is not square");
  const double scale = 1.0 + g.norm();
  if ((g - g.transpose()).norm() > tol.abs_tol * scale)
    throw InvalidForm("gram matrix is not symmetric");

  SignatureReport rep;
  if (g.rows() == 0) {
    rep.cls = SignatureClass::riemannian;
    return rep;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lmax = ev.cwiseAbs().maxCoeff();
  const double th = tol.rank_threshold(form.dim(), form.dim(), lmax);
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= th)
      ++rep.null;
    else if (ev(i) > 0.0)
      ++rep.positive;
    else
      ++rep.negative;
  }
  if (rep.null > 0)
    rep.cls = SignatureClass::degenerate;
  else if (rep.negative == 0)
    rep.cls = SignatureClass::riemannian;
  else if (rep.negative == 1)
    rep.cls = SignatureClass::lorentzian;
  else
    rep.cls = SignatureClass::higher_index;
  return rep;
}

BilinearForm restrict_form(const BilinearForm& form, const Subspace& s) {
  if (s.ambient_dim != form.dim())
    throw InvalidInput("restrict_form: subspace/form dimension mismatch");
  return BilinearForm(s.basis.transpose() * form.gram * s.basis);
}

Subspace orthogonal_complement(const Subspace& s, const BilinearForm& form,
                               const TolerancePolicy& tol) {
  if (s.ambient_dim != form.dim())
    throw InvalidInput("orthogonal_complement: dimension mismatch");
  if (signature(form, tol).null > 0)
    throw AmbientDegenerate("ambient form is degenerate");
  if (s.dim() == 0) return Subspace::full(s.ambient_dim);
  return kernel(s.basis.transpose() * form.gram, tol);
}

Subspace kernel(const Eigen::MatrixXd& map, const TolerancePolicy& tol) {
  const int n = static_cast<int>(map.cols());
  if (map.rows() == 0) return Subspace::full(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  const double th = tol.rank_threshold(static_cast<int>(map.rows()), n, smax);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > th) ++rank;
  return Subspace::span_of(svd.matrixV().rightCols(n - rank), tol);
}

Subspace common_kernel(const std::vector<Eigen::MatrixXd>& maps,
                       const TolerancePolicy& tol) {
  if (maps.empty()) throw InvalidInput("common_kernel: empty map list");
  const int n = static_cast<int>(maps.front().cols());
  long total_rows = 0;
  for (const auto& m : maps) {
    if (m.cols() != n) throw InvalidInput("common_kernel: inconsistent shapes");
    total_rows += m.rows();
  }
  Eigen::MatrixXd stacked(total_rows, n);
  long r = 0;
  for (const auto& m : maps) {
    stacked.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return kernel(stacked, tol);
}

Subspace intersect(const Subspace& a, const Subspace& b, const TolerancePolicy& tol) {
  if (a.ambient_dim != b.ambient_dim)
    throw InvalidInput("intersect: ambient dimension mismatch");
  const int n = a.ambient_dim;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  return common_kernel({id - a.projector(), id - b.projector()}, tol);
}

double skew_adjoint_residual(const Eigen::MatrixXd& a, const BilinearForm& form) {
  return (a.transpose() * form.gram + form.gram * a).norm();
}

bool is_skew_adjoint(const Eigen::MatrixXd& a, const BilinearForm& form,
                     const TolerancePolicy& tol) {
  if (a.rows() != a.cols() || a.rows() != form.dim())
    throw InvalidInput("is_skew_adjoint: dimension mismatch");
  const double scale = 1.0 + form.gram.norm() * a.norm();
  return skew_adjoint_residual(a, form) <= tol.abs_tol * scale;
}

double max_principal_angle_sin(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  const Eigen::MatrixXd rest =
      b.basis - a.basis * (a.basis.transpose() * b.basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest);
  return std::min(1.0, svd.singularValues()(0));
}

bool subspaces_equal(const Subspace& a, const Subspace& b, double angle_tol) {
  return a.dim() == b.dim() && max_principal_angle_sin(a, b) < angle_tol;
}

bool subspace_contains(const Subspace& a, const Subspace& b, double angle_tol) {
  if (b.dim() == 0) return true;
  if (b.dim() > a.dim()) return false;
  const Eigen::MatrixXd rest =
      b.basis - a.basis * (a.basis.transpose() * b.basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest);
  return svd.singularValues()(0) < angle_tol;
}

}  // namespace nilsym
