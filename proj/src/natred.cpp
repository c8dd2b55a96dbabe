#include "nilsym/natred.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace nilsym {

namespace {

Eigen::MatrixXd stacked_j(const JMap& j) {
  const int p = j.center_dim();
  const int q = j.v_dim();
  Eigen::MatrixXd s(q * q, p);
  for (int a = 0; a < p; ++a)
    s.col(a) = Eigen::Map<const Eigen::VectorXd>(j.matrices[a].data(), q * q);
  return s;
}

double j_scale(const JMap& j) {
  double s = 1.0;
  for (const auto& m : j.matrices) s = std::max(s, m.norm());
  return s;
}

bool j_injective(const JMap& j) { return j.ker.dim() == 0; }

}  // namespace

bool check_j_subalgebra(const JMap& j, const TolerancePolicy& tol) {
  const int p = j.center_dim();
  if (p <= 1) return true;  // abelian image
  const Eigen::MatrixXd S = stacked_j(j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double scale = j_scale(j);
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) {
      const Eigen::MatrixXd comm =
          j.matrices[a] * j.matrices[b] - j.matrices[b] * j.matrices[a];
      const Eigen::VectorXd w =
          Eigen::Map<const Eigen::VectorXd>(comm.data(), comm.size());
      const Eigen::VectorXd x = svd.solve(w);
      if ((S * x - w).norm() > tol.abs_tol * scale * scale) return false;
    }
  return true;
}

TauMap solve_tau(const JMap& j, const TolerancePolicy& tol) {
  const int p = j.center_dim();
  const int q = j.v_dim();
  if (!j_injective(j)) throw JNotInjective("solve_tau requires an injective j");
  if (!check_j_subalgebra(j, tol))
    throw NotSubalgebra("j(z) is not a subalgebra of so(v)");

  const Eigen::MatrixXd S = stacked_j(j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TauMap tau;
  tau.matrices.assign(p, Eigen::MatrixXd::Zero(p, p));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      const Eigen::MatrixXd comm =
          j.matrices[a] * j.matrices[b] - j.matrices[b] * j.matrices[a];
      tau.matrices[a].col(b) =
          svd.solve(Eigen::Map<const Eigen::VectorXd>(comm.data(), q * q));
    }

  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(q, q);
      for (int c = 0; c < p; ++c) rhs += tau.matrices[a](c, b) * j.matrices[c];
      const Eigen::MatrixXd comm =
          j.matrices[a] * j.matrices[b] - j.matrices[b] * j.matrices[a];
      tau.relation_residual = std::max(tau.relation_residual, (comm - rhs).norm());
    }
    tau.skew_residual = std::max(
        tau.skew_residual, skew_adjoint_residual(tau.matrices[a], j.metric_z));
  }
  return tau;
}

StructureTensor induced_center_bracket(const TauMap& tau, const JMap& j,
                                       const TolerancePolicy& tol) {
  const int p = j.center_dim();
  StructureTensor t = StructureTensor::zero(p);
  for (int k = 0; k < p; ++k)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) t.comp[k](a, b) = tau.matrices[a](k, b);

  double scale = 1.0;
  for (const auto& m : tau.matrices) scale = std::max(scale, m.norm());
  if (t.antisymmetry_residual() > tol.abs_tol * scale)
    throw JacobiFailure("induced center bracket is not antisymmetric");
  if (t.jacobi_residual() > tol.abs_tol * scale * scale)
    throw JacobiFailure("induced center bracket violates Jacobi");

  // j must represent the new bracket (same data as the tau relation).
  const double jrel = tau.relation_residual;
  if (jrel > tol.abs_tol * j_scale(j) * j_scale(j))
    throw JacobiFailure("j does not represent the induced bracket");

  MetricLieAlgebra zalg{t, j.metric_z};
  if (!is_ad_invariant(j.metric_z, zalg, tol))
    throw JacobiFailure("z-metric is not ad-invariant for the induced bracket");
  return t;
}

namespace {

// Joint least-squares feasibility of the tau relation together with the
// skew-adjointness constraint, for the non-injective case.
bool tau_feasible_with_skew(const JMap& j, const TolerancePolicy& tol, TauMap* out) {
  const int p = j.center_dim();
  const int q = j.v_dim();
  const Eigen::MatrixXd S = stacked_j(j);
  const Eigen::MatrixXd& Gz = j.metric_z.gram;
  const double scale = j_scale(j);

  TauMap tau;
  tau.matrices.assign(p, Eigen::MatrixXd::Zero(p, p));
  bool feasible = true;
  for (int a = 0; a < p; ++a) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(q * q * p + p * p, p * p);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
    for (int b = 0; b < p; ++b) {
      for (int c = 0; c < p; ++c)
        A.block(b * q * q, b * p + c, q * q, 1) = S.col(c);
      const Eigen::MatrixXd comm =
          j.matrices[a] * j.matrices[b] - j.matrices[b] * j.matrices[a];
      rhs.segment(b * q * q, q * q) =
          Eigen::Map<const Eigen::VectorXd>(comm.data(), q * q);
    }
    const int skew0 = q * q * p;
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) {
        const int row = skew0 + r * p + c;
        for (int m = 0; m < p; ++m) {
          A(row, r * p + m) += Gz(m, c);
          A(row, c * p + m) += Gz(r, m);
        }
      }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd x = svd.solve(rhs);
    if ((A * x - rhs).norm() > tol.abs_tol * scale * scale) feasible = false;
    tau.matrices[a] = Eigen::Map<const Eigen::MatrixXd>(x.data(), p, p);
    tau.skew_residual = std::max(
        tau.skew_residual, skew_adjoint_residual(tau.matrices[a], j.metric_z));
  }
  if (out) *out = tau;
  return feasible;
}

}  // namespace

NatRedCertificate is_naturally_reductive(const MetricLieAlgebra& L,
                                         const TolerancePolicy& tol) {
  if (!is_two_step_nilpotent(L, tol))
    throw InvalidInput("is_naturally_reductive: algebra is not 2-step nilpotent");
  const JMap jm = j_map(L, tol);  // throws CenterDegenerate

  NatRedCertificate cert;
  cert.is_subalgebra = check_j_subalgebra(jm, tol);
  const double scale = j_scale(jm);

  if (j_injective(jm)) {
    if (!cert.is_subalgebra) {
      cert.verdict = false;
      return cert;
    }
    TauMap tau = solve_tau(jm, tol);
    cert.max_residual = std::max(tau.relation_residual, tau.skew_residual);
    const bool ok = tau.relation_residual <= tol.abs_tol * scale * scale &&
                    tau.skew_residual <= tol.abs_tol * scale * scale;
    cert.tau = std::move(tau);
    if (ok) cert.induced_bracket = induced_center_bracket(*cert.tau, jm, tol);
    cert.verdict = ok;
    return cert;
  }

  // j not injective: only the necessary condition can be reported.
  cert.caveat_j_not_injective = true;
  TauMap tau;
  const bool feasible = tau_feasible_with_skew(jm, tol, &tau);
  cert.tau = std::move(tau);
  cert.verdict = cert.is_subalgebra && feasible;
  return cert;
}

bool check_natred_definition(const ReductiveDecomposition& dec,
                             const TolerancePolicy& tol, double* max_residual) {
  const int N = dec.ambient.dim;
  const int nm = dec.m.dim();
  const int nh = dec.h.dim();
  if (nm + nh != N)
    throw NotReductiveDecomposition("m and h dimensions do not sum to the ambient one");
  Eigen::MatrixXd T(N, N);
  T.leftCols(nm) = dec.m.basis;
  T.rightCols(nh) = dec.h.basis;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(T);
  if (!lu.isInvertible())
    throw NotReductiveDecomposition("m + h is not a direct sum");

  double scale = 1.0 + dec.metric_m.norm();
  for (const auto& m : dec.ambient.comp) scale = std::max(scale, m.norm());

  // ad(h) m ⊂ m
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nm; ++b) {
      const Eigen::VectorXd w = dec.ambient.bracket(dec.h.basis.col(a), dec.m.basis.col(b));
      const Eigen::VectorXd coords = lu.solve(w);
      if (coords.tail(nh).norm() > tol.abs_tol * scale)
        throw NotReductiveDecomposition("ad(h) m is not contained in m");
    }

  double worst = 0.0;
  std::vector<Eigen::VectorXd> mcomp(nm * nm);
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nm; ++j) {
      const Eigen::VectorXd w = dec.ambient.bracket(dec.m.basis.col(i), dec.m.basis.col(j));
      mcomp[i * nm + j] = lu.solve(w).head(nm);
    }
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nm; ++j)
      for (int k = 0; k < nm; ++k) {
        const double val = mcomp[i * nm + j].dot(dec.metric_m.col(k)) +
                           dec.metric_m.row(j).dot(mcomp[i * nm + k]);
        worst = std::max(worst, std::abs(val));
      }
  if (max_residual) *max_residual = worst;
  return worst <= tol.abs_tol * scale;
}

}  // namespace nilsym
