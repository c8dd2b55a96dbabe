#include "nilsym/isotropy.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace nilsym {

namespace {

Eigen::MatrixXd vec_stack(const std::vector<Eigen::MatrixXd>& mats) {
  if (mats.empty()) return Eigen::MatrixXd(0, 0);
  const long sz = mats.front().size();
  Eigen::MatrixXd s(sz, static_cast<long>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i)
    s.col(static_cast<long>(i)) =
        Eigen::Map<const Eigen::VectorXd>(mats[i].data(), sz);
  return s;
}

// Largest relative distance from the columns of B to the span of A.
double containment_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const TolerancePolicy& tol) {
  if (B.cols() == 0) return 0.0;
  if (A.cols() == 0) return B.norm();
  const Subspace span = Subspace::span_of(A, tol);
  double worst = 0.0;
  for (long c = 0; c < B.cols(); ++c) {
    const Eigen::VectorXd x = B.col(c);
    const double r = (x - span.basis * (span.basis.transpose() * x)).norm();
    worst = std::max(worst, r / std::max(1.0, x.norm()));
  }
  return worst;
}

}  // namespace

std::vector<Eigen::MatrixXd> commutant_skew(const DataSet& d, const TolerancePolicy& tol) {
  const int q = d.pi.v_dim;
  const int p = d.pi.g_dim;
  const int unknowns = q * q;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<long>(p) * q * q + q * q, unknowns);
  auto col_of = [q](int r, int c) { return c * q + r; };

  long row = 0;
  for (int a = 0; a < p; ++a) {
    const Eigen::MatrixXd& P = d.pi.matrices[a];
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c, ++row)
        for (int k = 0; k < q; ++k) {
          A(row, col_of(r, k)) += P(k, c);
          A(row, col_of(k, c)) -= P(r, k);
        }
  }
  const Eigen::MatrixXd& G = d.v_metric.gram;
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < q; ++c, ++row)
      for (int m = 0; m < q; ++m) {
        A(row, col_of(m, r)) += G(m, c);
        A(row, col_of(m, c)) += G(r, m);
      }

  const Subspace null = kernel(A, tol);
  std::vector<Eigen::MatrixXd> basis;
  basis.reserve(null.dim());
  for (int c = 0; c < null.dim(); ++c)
    basis.push_back(Eigen::Map<const Eigen::MatrixXd>(null.basis.col(c).data(), q, q));
  return basis;
}

Eigen::MatrixXd embed_gbar(const DataSet& d, const Eigen::VectorXd& Z,
                           const TolerancePolicy& tol) {
  const CompactSplit split = compact_split(d.g, tol);
  const Eigen::VectorXd proj =
      split.gbar.basis * (split.gbar.basis.transpose() * Z);
  if ((Z - proj).norm() > 1e-8 * (1.0 + Z.norm()))
    throw ZNotInGbar("vector is not in the commutator part of g");

  const int p = d.g.dim();
  const int q = d.pi.v_dim;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(p + q, p + q);
  D.topLeftCorner(p, p) = d.g.structure.ad(Z);
  D.bottomRightCorner(q, q) = d.pi.apply(Z);
  return D;
}

IsotropySplit isotropy_split(const DataSet& d, const TolerancePolicy& tol) {
  const CompactSplit split = compact_split(d.g, tol);
  const int p = d.g.dim();
  const int q = d.pi.v_dim;

  IsotropySplit out;
  for (int b = 0; b < split.gbar.dim(); ++b)
    out.gbar_part.push_back(embed_gbar(d, split.gbar.basis.col(b), tol));
  out.u_on_v = commutant_skew(d, tol);
  for (const auto& B : out.u_on_v) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(p + q, p + q);
    D.bottomRightCorner(q, q) = B;
    out.u_part.push_back(D);
  }
  out.total_dim = static_cast<int>(out.gbar_part.size() + out.u_part.size());

  // Theorem-level agreement with the direct solver on the built algebra.
  const MetricLieAlgebra n = build_nilpotent(d, tol);
  const std::vector<Eigen::MatrixXd> direct = skew_derivations(n, tol);
  std::vector<Eigen::MatrixXd> assembled = out.gbar_part;
  assembled.insert(assembled.end(), out.u_part.begin(), out.u_part.end());

  const Eigen::MatrixXd SA = vec_stack(assembled);
  const Eigen::MatrixXd SD = vec_stack(direct);
  if (static_cast<int>(direct.size()) != out.total_dim)
    throw TheoremMismatch("structural isotropy dimension " +
                          std::to_string(out.total_dim) +
                          " != direct solve dimension " +
                          std::to_string(direct.size()));
  const double r1 = containment_residual(SA, SD, tol);
  const double r2 = containment_residual(SD, SA, tol);
  out.span_residual = std::max(r1, r2);
  if (out.span_residual > 1e-8)
    throw TheoremMismatch("isotropy spans disagree, residual " +
                          std::to_string(out.span_residual));
  return out;
}

GroupCheckReport group_level_check(const DataSet& d, const Eigen::VectorXd& Z,
                                   double t, int samples, Rng& rng,
                                   const TolerancePolicy& tol) {
  const CompactSplit split = compact_split(d.g, tol);
  const Eigen::VectorXd proj = split.gbar.basis * (split.gbar.basis.transpose() * Z);
  if (split.gbar.dim() == 0) {
    // Vacuous when g has no commutator part.
    if (Z.norm() > 1e-12) throw ZNotInGbar("Z must lie in [g, g]");
    return {true, 0.0};
  }
  if ((Z - proj).norm() > 1e-8 * (1.0 + Z.norm()))
    throw ZNotInGbar("Z must lie in [g, g]");

  const int p = d.g.dim();
  const Eigen::MatrixXd phi = (t * d.g.structure.ad(Z)).exp();
  const Eigen::MatrixXd T = (t * d.pi.apply(Z)).exp();
  const Eigen::MatrixXd Tinv = T.inverse();

  GroupCheckReport rep;
  auto check_vec = [&](const Eigen::VectorXd& zp) {
    const Eigen::MatrixXd lhs = d.pi.apply(phi * zp);
    const Eigen::MatrixXd rhs = T * d.pi.apply(zp) * Tinv;
    rep.max_residual = std::max(rep.max_residual, (lhs - rhs).norm());
  };
  for (int a = 0; a < p; ++a) check_vec(Eigen::VectorXd::Unit(p, a));
  for (int s = 0; s < samples; ++s) check_vec(rng.normal_vector(p));

  // The exponentiated pair must preserve the metric and the bracket of n.
  const MetricLieAlgebra n = build_nilpotent(d, tol);
  const int nn = n.dim();
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(nn, nn);
  F.topLeftCorner(p, p) = phi;
  F.bottomRightCorner(nn - p, nn - p) = T;
  rep.max_residual = std::max(
      rep.max_residual, (F.transpose() * n.metric.gram * F - n.metric.gram).norm());
  for (int s = 0; s < std::max(samples, 1); ++s) {
    const Eigen::VectorXd x = rng.normal_vector(nn);
    const Eigen::VectorXd y = rng.normal_vector(nn);
    rep.max_residual =
        std::max(rep.max_residual,
                 (F * n.structure.bracket(x, y) - n.structure.bracket(F * x, F * y))
                     .norm());
  }
  rep.ok = rep.max_residual <= 1e-8 * (1.0 + Z.norm()) * (1.0 + std::abs(t)) * 10.0;
  return rep;
}

StructureTensor build_iso_aut(const MetricLieAlgebra& L,
                              const std::vector<Eigen::MatrixXd>& haut,
                              const TolerancePolicy& tol) {
  const int n = L.dim();
  const int k = static_cast<int>(haut.size());
  StructureTensor t = StructureTensor::zero(n + k);

  for (int m = 0; m < n; ++m)
    t.comp[m].topLeftCorner(n, n) = L.structure.comp[m];

  for (int a = 0; a < k; ++a)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd w = haut[a].col(j);  // [D_a, e_j] = D_a e_j
      for (int m = 0; m < n; ++m) t.set(n + a, j, m, w(m));
    }

  if (k > 0) {
    const Eigen::MatrixXd S = vec_stack(haut);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double scale = 1.0;
    for (const auto& m : haut) scale = std::max(scale, m.norm());
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        const Eigen::MatrixXd comm = haut[a] * haut[b] - haut[b] * haut[a];
        const Eigen::VectorXd w =
            Eigen::Map<const Eigen::VectorXd>(comm.data(), comm.size());
        const Eigen::VectorXd gamma = svd.solve(w);
        if ((S * gamma - w).norm() > tol.abs_tol * scale * scale * 1e3)
          throw InvalidInput("build_iso_aut: h^aut basis is not closed under brackets");
        for (int c = 0; c < k; ++c) t.set(n + a, n + b, n + c, gamma(c));
      }
  }
  return t;
}

}  // namespace nilsym
