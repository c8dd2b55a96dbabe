#include "nilsym/liealg.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace nilsym {

double StructureTensor::antisymmetry_residual() const {
  double r = 0.0;
  for (int k = 0; k < dim; ++k) r = std::max(r, (comp[k] + comp[k].transpose()).norm());
  return r;
}

double StructureTensor::jacobi_residual() const {
  double r = 0.0;
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(dim), ej = ei, ek = ei;
  for (int i = 0; i < dim; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = i + 1; j < dim; ++j) {
      ej.setZero(); ej(j) = 1.0;
      const Eigen::VectorXd bij = bracket(ei, ej);
      for (int k = j + 1; k < dim; ++k) {
        ek.setZero(); ek(k) = 1.0;
        const Eigen::VectorXd cyc = bracket(bij, ek) + bracket(bracket(ej, ek), ei) +
                                    bracket(bracket(ek, ei), ej);
        r = std::max(r, cyc.norm());
      }
    }
  }
  return r;
}

Eigen::VectorXd MetricLieAlgebra::bracket(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) const {
  if (x.size() != dim() || y.size() != dim())
    throw InvalidInput("bracket: dimension mismatch");
  return structure.bracket(x, y);
}

void validate_algebra(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  if (static_cast<int>(L.structure.comp.size()) != L.dim())
    throw InvalidInput("structure tensor has wrong number of components");
  if (L.metric.dim() != L.dim())
    throw InvalidInput("metric dimension disagrees with structure tensor");
  double scale = 1.0;
  for (const auto& m : L.structure.comp) scale = std::max(scale, m.norm());
  if (L.structure.antisymmetry_residual() > tol.abs_tol * scale)
    throw InvalidInput("structure tensor is not antisymmetric");
  if (L.structure.jacobi_residual() > tol.abs_tol * scale * scale)
    throw InvalidInput("Jacobi identity violated");
  const SignatureReport sig = signature(L.metric, tol);
  if (sig.null > 0) throw InvalidForm("metric is degenerate");
}

Subspace center(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  const int n = L.dim();
  std::vector<Eigen::MatrixXd> ads;
  ads.reserve(n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    e.setZero(); e(i) = 1.0;
    ads.push_back(L.structure.ad(e));
  }
  return common_kernel(ads, tol);
}

Subspace commutator_ideal(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  const int n = L.dim();
  Eigen::MatrixXd cols(n, n * (n - 1) / 2);
  int c = 0;
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = ei;
  for (int i = 0; i < n; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      ej.setZero(); ej(j) = 1.0;
      cols.col(c++) = L.structure.bracket(ei, ej);
    }
  }
  return Subspace::span_of(cols.leftCols(c), tol);
}

bool is_abelian(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  return commutator_ideal(L, tol).dim() == 0;
}

bool is_two_step_nilpotent(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  const Subspace comm = commutator_ideal(L, tol);
  if (comm.dim() == 0) return false;
  const int n = L.dim();
  double scale = 1.0;
  for (const auto& m : L.structure.comp) scale = std::max(scale, m.norm());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < comm.dim(); ++c) {
    for (int k = 0; k < n; ++k) {
      e.setZero(); e(k) = 1.0;
      if (L.structure.bracket(comm.basis.col(c), e).norm() > tol.abs_tol * scale)
        return false;
    }
  }
  return true;
}

namespace detail {

JMap j_map_with_sign(const MetricLieAlgebra& L, const TolerancePolicy& tol, double sign) {
  JMap jm;
  jm.center = center(L, tol);
  jm.metric_z = restrict_form(L.metric, jm.center);
  if (jm.center.dim() == 0 || signature(jm.metric_z, tol).null > 0)
    throw CenterDegenerate("metric restricted to the center is degenerate");
  jm.v = orthogonal_complement(jm.center, L.metric, tol);
  jm.metric_v = restrict_form(L.metric, jm.v);

  const int p = jm.center.dim();
  const int q = jm.v.dim();
  Eigen::PartialPivLU<Eigen::MatrixXd> gv(jm.metric_v.gram);
  jm.matrices.reserve(p);
  for (int a = 0; a < p; ++a) {
    // B(i, j) = <[V_i, V_j], Z_a>; the defining identity gives J^T Gv = B.
    Eigen::MatrixXd B(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        B(i, j) = L.structure.bracket(jm.v.basis.col(i), jm.v.basis.col(j))
                      .dot(L.metric.gram * jm.center.basis.col(a));
    jm.matrices.push_back(sign * gv.solve(B.transpose()));
  }

  // ker j in z-coordinates, lifted back to the ambient space.
  Eigen::MatrixXd stacked(q * q, p);
  for (int a = 0; a < p; ++a)
    stacked.col(a) = Eigen::Map<const Eigen::VectorXd>(jm.matrices[a].data(), q * q);
  const Subspace lambda = kernel(stacked, tol);
  jm.ker = Subspace::span_of(jm.center.basis * lambda.basis, tol);
  return jm;
}

}  // namespace detail

JMap j_map(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  return detail::j_map_with_sign(L, tol, 1.0);
}

Eigen::MatrixXd JMap::apply(const Eigen::VectorXd& z_coeffs) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(v_dim(), v_dim());
  for (int a = 0; a < center_dim(); ++a) m += z_coeffs(a) * matrices[a];
  return m;
}

Eigen::VectorXd JMap::z_coords(const Eigen::VectorXd& x, const BilinearForm& metric) const {
  return metric_z.gram.partialPivLu().solve(center.basis.transpose() * metric.gram * x);
}

Eigen::VectorXd JMap::v_coords(const Eigen::VectorXd& x, const BilinearForm& metric) const {
  return metric_v.gram.partialPivLu().solve(v.basis.transpose() * metric.gram * x);
}

std::vector<Eigen::MatrixXd> skew_derivations(const MetricLieAlgebra& L,
                                              const TolerancePolicy& tol) {
  const int n = L.dim();
  const int unknowns = n * n;  // column-major vec(D)
  const int pair_rows = n * (n - 1) / 2 * n;
  const int skew_rows = n * (n + 1) / 2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(pair_rows + skew_rows, unknowns);

  // Precompute basis brackets b[i][j] = [e_i, e_j].
  std::vector<std::vector<Eigen::VectorXd>> b(n, std::vector<Eigen::VectorXd>(n));
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = ei;
  for (int i = 0; i < n; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = 0; j < n; ++j) {
      ej.setZero(); ej(j) = 1.0;
      b[i][j] = L.structure.bracket(ei, ej);
    }
  }

  auto col_of = [n](int r, int c) { return c * n + r; };

  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k, ++row) {
        // component k of D[e_i,e_j] - [De_i, e_j] - [e_i, De_j]
        for (int m = 0; m < n; ++m) {
          A(row, col_of(k, m)) += b[i][j](m);
          A(row, col_of(m, i)) -= b[m][j](k);
          A(row, col_of(m, j)) -= b[i][m](k);
        }
      }
  const Eigen::MatrixXd& G = L.metric.gram;
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c, ++row) {
      // (D^T G + G D)(r, c) = 0
      for (int m = 0; m < n; ++m) {
        A(row, col_of(m, r)) += G(m, c);
        A(row, col_of(m, c)) += G(r, m);
      }
    }

  const Subspace null = kernel(A, tol);
  std::vector<Eigen::MatrixXd> basis;
  basis.reserve(null.dim());
  for (int c = 0; c < null.dim(); ++c)
    basis.push_back(Eigen::Map<const Eigen::MatrixXd>(null.basis.col(c).data(), n, n));
  return basis;
}

double ad_invariance_residual(const BilinearForm& metric, const MetricLieAlgebra& L) {
  const int n = L.dim();
  double r = 0.0;
  Eigen::VectorXd ez = Eigen::VectorXd::Zero(n), ex = ez, ey = ez;
  for (int z = 0; z < n; ++z) {
    ez.setZero(); ez(z) = 1.0;
    for (int x = 0; x < n; ++x) {
      ex.setZero(); ex(x) = 1.0;
      for (int y = x; y < n; ++y) {
        ey.setZero(); ey(y) = 1.0;
        const double val = metric.eval(L.structure.bracket(ez, ex), ey) +
                           metric.eval(ex, L.structure.bracket(ez, ey));
        r = std::max(r, std::abs(val));
      }
    }
  }
  return r;
}

bool is_ad_invariant(const BilinearForm& metric, const MetricLieAlgebra& L,
                     const TolerancePolicy& tol) {
  double scale = 1.0 + metric.gram.norm();
  for (const auto& m : L.structure.comp) scale = std::max(scale, m.norm());
  return ad_invariance_residual(metric, L) <= tol.abs_tol * scale;
}

double derivation_residual(const MetricLieAlgebra& L, const Eigen::MatrixXd& D) {
  const int n = L.dim();
  double r = 0.0;
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = ei;
  for (int i = 0; i < n; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      ej.setZero(); ej(j) = 1.0;
      const Eigen::VectorXd lhs = D * L.structure.bracket(ei, ej);
      const Eigen::VectorXd rhs =
          L.structure.bracket(D.col(i), ej) + L.structure.bracket(ei, D.col(j));
      r = std::max(r, (lhs - rhs).norm());
    }
  }
  return r;
}

}  // namespace nilsym
