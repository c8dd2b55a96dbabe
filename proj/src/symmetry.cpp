#include "nilsym/symmetry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace nilsym {

namespace {

std::vector<Eigen::MatrixXd> orthonormalize_frobenius(
    const std::vector<Eigen::MatrixXd>& mats, const TolerancePolicy& tol) {
  if (mats.empty()) return {};
  const int n = static_cast<int>(mats.front().rows());
  Eigen::MatrixXd s(n * n, static_cast<long>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i)
    s.col(static_cast<long>(i)) =
        Eigen::Map<const Eigen::VectorXd>(mats[i].data(), n * n);
  const Subspace span = Subspace::span_of(s, tol);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(span.dim());
  for (int c = 0; c < span.dim(); ++c)
    out.push_back(Eigen::Map<const Eigen::MatrixXd>(span.basis.col(c).data(), n, n));
  return out;
}

}  // namespace

Eigen::MatrixXd nabla_killing_at_e(const MetricLieAlgebra& L, const JMap& jm,
                                   const Eigen::VectorXd& u, const Eigen::MatrixXd& d) {
  const int n = L.dim();
  const Eigen::VectorXd uz = jm.z_coords(u, L.metric);
  const Eigen::VectorXd uv = jm.v_coords(u, L.metric);
  const Eigen::VectorXd u_v_ambient = jm.v.basis * uv;
  const Eigen::MatrixXd ju = jm.apply(uz);

  Eigen::MatrixXd out = d;
  for (int w = 0; w < n; ++w) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, w);
    const Eigen::VectorXd wz = jm.z_coords(e, L.metric);
    const Eigen::VectorXd wv = jm.v_coords(e, L.metric);
    Eigen::VectorXd col = -0.5 * L.structure.bracket(jm.v.basis * wv, u_v_ambient);
    col -= 0.5 * jm.v.basis * (ju * wv);             // W in v, U-part in z
    col -= 0.5 * jm.v.basis * (jm.apply(wz) * uv);   // W in z, U-part in v
    out.col(w) += col;
  }
  return out;
}

TransvectionSpace transvection_space(const MetricLieAlgebra& L,
                                     const std::vector<Eigen::MatrixXd>& haut,
                                     const TolerancePolicy& tol) {
  const JMap jm = j_map(L, tol);  // CenterDegenerate
  const int n = L.dim();
  const std::vector<Eigen::MatrixXd> basis = orthonormalize_frobenius(haut, tol);
  const int k = static_cast<int>(basis.size());
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);

  Eigen::MatrixXd A(n * n, n + k);
  for (int j = 0; j < n; ++j) {
    const Eigen::MatrixXd m = nabla_killing_at_e(L, jm, Eigen::VectorXd::Unit(n, j), zero);
    A.col(j) = Eigen::Map<const Eigen::VectorXd>(m.data(), n * n);
  }
  for (int a = 0; a < k; ++a)
    A.col(n + a) = Eigen::Map<const Eigen::VectorXd>(basis[a].data(), n * n);

  const Subspace null = kernel(A, tol);
  TransvectionSpace ts;
  ts.haut = basis;
  Eigen::MatrixXd values(n, null.dim());
  for (int c = 0; c < null.dim(); ++c) {
    KillingPair pair;
    pair.u = null.basis.col(c).head(n);
    pair.d_coeffs = null.basis.col(c).tail(k);
    pair.d = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < k; ++a) pair.d += pair.d_coeffs(a) * basis[a];
    values.col(c) = pair.u;
    ts.basis.push_back(std::move(pair));
  }
  ts.s_e = Subspace::span_of(values, tol);
  ts.index = ts.s_e.dim();
  ts.s_e_signature = signature(restrict_form(L.metric, ts.s_e), tol);
  return ts;
}

Subspace fixed_point_subspace(const MetricLieAlgebra& L,
                              const std::vector<Eigen::MatrixXd>& haut,
                              const TolerancePolicy& tol) {
  if (haut.empty()) return Subspace::full(L.dim());
  return common_kernel(haut, tol);
}

KillingPair transvection_for_central(const DataSet& d, const Eigen::VectorXd& Z,
                                     const TolerancePolicy& tol) {
  const CompactSplit split = compact_split(d.g, tol);
  const Eigen::VectorXd proj = split.c.basis * (split.c.basis.transpose() * Z);
  if ((Z - proj).norm() > 1e-8 * (1.0 + Z.norm()))
    throw ZNotCentral("vector is not in the center of g");

  const int p = d.g.dim();
  const int q = d.pi.v_dim;
  KillingPair pair;
  pair.u = Eigen::VectorXd::Zero(p + q);
  pair.u.head(p) = Z;
  pair.d = Eigen::MatrixXd::Zero(p + q, p + q);
  pair.d.bottomRightCorner(q, q) = 0.5 * d.pi.apply(Z);
  return pair;
}

MainTheoremReport verify_main_theorem(const DataSet& d, const TolerancePolicy& tol) {
  const ValidationReport vrep = validate_data_set(d, tol);
  if (!vrep.valid() || !vrep.lorentzian)
    throw InvalidDataSet("verify_main_theorem requires a validated Lorentzian data set");

  const MetricLieAlgebra n = build_nilpotent(d, tol);
  const std::vector<Eigen::MatrixXd> haut = skew_derivations(n, tol);
  const CompactSplit split = compact_split(d.g, tol);

  MainTheoremReport rep;
  const TransvectionSpace ts = transvection_space(n, haut, tol);
  rep.s_e = ts.s_e;
  rep.index = ts.index;
  rep.s_e_signature = ts.s_e_signature;
  rep.fixed_points = fixed_point_subspace(n, haut, tol);

  Eigen::MatrixXd c_in_n = Eigen::MatrixXd::Zero(n.dim(), split.c.dim());
  c_in_n.topRows(d.g.dim()) = split.c.basis;
  rep.center_of_g = Subspace::span_of(c_in_n, tol);

  rep.angle_se_f0 = max_principal_angle_sin(rep.s_e, rep.fixed_points);
  rep.angle_se_c = max_principal_angle_sin(rep.s_e, rep.center_of_g);
  rep.s_e_nondegenerate = rep.s_e_signature.null == 0;

  if (rep.angle_se_f0 >= 1e-7 || rep.angle_se_c >= 1e-7 || !rep.s_e_nondegenerate) {
    std::ostringstream oss;
    oss << "symmetry subspace disagreement: dim s_e=" << rep.s_e.dim()
        << " dim F0=" << rep.fixed_points.dim() << " dim c=" << rep.center_of_g.dim()
        << " angle(s_e,F0)=" << rep.angle_se_f0 << " angle(s_e,c)=" << rep.angle_se_c
        << " nondegenerate=" << rep.s_e_nondegenerate;
    throw TheoremMismatch(oss.str());
  }
  return rep;
}

SymmetricIsotropy symmetric_isotropy(const MetricLieAlgebra& L,
                                     const TransvectionSpace& p,
                                     const TolerancePolicy& tol) {
  SymmetricIsotropy out;
  std::vector<Eigen::MatrixXd> parts;
  const std::size_t m = p.basis.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const KillingPair& a = p.basis[i];
      const KillingPair& b = p.basis[j];
      // Semidirect bracket on n ⋊ h^aut, then the anti-isomorphism sign.
      Eigen::VectorXd n_part =
          L.structure.bracket(a.u, b.u) + a.d * b.u - b.d * a.u;
      Eigen::MatrixXd d_part = a.d * b.d - b.d * a.d;
      n_part = -n_part;
      d_part = -d_part;
      out.n_component_residual = std::max(out.n_component_residual, n_part.norm());
      parts.push_back(d_part);
    }
  out.basis = orthonormalize_frobenius(parts, tol);
  return out;
}

}  // namespace nilsym
