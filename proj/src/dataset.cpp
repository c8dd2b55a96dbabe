#include "nilsym/dataset.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace nilsym {

namespace {

Eigen::MatrixXd realify2x2(const Eigen::Matrix2cd& m) {
  // Coordinates (Re z1, Im z1, Re z2, Im z2); a+ib becomes [[a,-b],[b,a]].
  Eigen::MatrixXd r(4, 4);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      const double a = m(k, l).real();
      const double b = m(k, l).imag();
      r(2 * k, 2 * l) = a;
      r(2 * k, 2 * l + 1) = -b;
      r(2 * k + 1, 2 * l) = b;
      r(2 * k + 1, 2 * l + 1) = a;
    }
  return r;
}

Eigen::MatrixXd block_diag(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

}  // namespace

Eigen::MatrixXd rotation_generator2() {
  Eigen::MatrixXd j(2, 2);
  j << 0, -1, 1, 0;
  return j;
}

Eigen::MatrixXd boost_generator2() {
  Eigen::MatrixXd b(2, 2);
  b << 0, 1, 1, 0;
  return b;
}

MetricLieAlgebra su2_algebra(double metric_scale) {
  StructureTensor t = StructureTensor::zero(3);
  t.set(0, 1, 2, 1.0);
  t.set(1, 2, 0, 1.0);
  t.set(2, 0, 1, 1.0);
  return MetricLieAlgebra{t, BilinearForm(metric_scale * Eigen::MatrixXd::Identity(3, 3))};
}

MetricLieAlgebra abelian_algebra(const BilinearForm& metric) {
  return MetricLieAlgebra{StructureTensor::zero(metric.dim()), metric};
}

MetricLieAlgebra direct_sum(const MetricLieAlgebra& a, const MetricLieAlgebra& b) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  StructureTensor t = StructureTensor::zero(n);
  for (int k = 0; k < na; ++k) t.comp[k].topLeftCorner(na, na) = a.structure.comp[k];
  for (int k = 0; k < nb; ++k)
    t.comp[na + k].bottomRightCorner(nb, nb) = b.structure.comp[k];
  return MetricLieAlgebra{t, BilinearForm(block_diag(a.metric.gram, b.metric.gram))};
}

RealifiedSu2Rep su2_standard_realified() {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  Eigen::Matrix2cd s1, s2, s3, id;
  s1 << C(0), C(1), C(1), C(0);
  s2 << C(0), -i, i, C(0);
  s3 << C(1), C(0), C(0), C(-1);
  id.setIdentity();
  RealifiedSu2Rep rep;
  rep.generators = {realify2x2(-0.5 * i * s1), realify2x2(-0.5 * i * s2),
                    realify2x2(-0.5 * i * s3)};
  rep.complex_structure = realify2x2(i * id);
  return rep;
}

ValidationReport validate_data_set(const DataSet& d, const TolerancePolicy& tol) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& what) { rep.failures.push_back(what); };

  const int p = d.g.dim();
  const int q = d.v_metric.dim();
  rep.shapes_ok = d.pi.g_dim == p && d.pi.v_dim == q &&
                  static_cast<int>(d.pi.matrices.size()) == p;
  for (const auto& m : d.pi.matrices)
    if (m.rows() != q || m.cols() != q) rep.shapes_ok = false;
  if (!rep.shapes_ok) {
    fail("inconsistent shapes");
    return rep;
  }
  rep.dims_within_limit = d.total_dim() <= 24;
  if (!rep.dims_within_limit) fail("total dimension exceeds the supported limit of 24");

  double scale = 1.0;
  for (const auto& m : d.pi.matrices) scale = std::max(scale, m.norm());
  for (const auto& m : d.g.structure.comp) scale = std::max(scale, m.norm());

  rep.g_structure_ok =
      d.g.structure.antisymmetry_residual() <= tol.abs_tol * scale &&
      d.g.structure.jacobi_residual() <= tol.abs_tol * scale * scale;
  if (!rep.g_structure_ok) fail("g is not a Lie algebra (antisymmetry/Jacobi)");

  try {
    rep.g_signature = signature(d.g.metric, tol);
    rep.g_metric_nondegenerate = rep.g_signature.null == 0;
  } catch (const InvalidForm&) {
    rep.g_metric_nondegenerate = false;
  }
  if (!rep.g_metric_nondegenerate) fail("g metric degenerate or not symmetric");
  try {
    rep.v_signature = signature(d.v_metric, tol);
    rep.v_metric_nondegenerate = rep.v_signature.null == 0;
  } catch (const InvalidForm&) {
    rep.v_metric_nondegenerate = false;
  }
  if (!rep.v_metric_nondegenerate) fail("v metric degenerate or not symmetric");

  // Axiom 1: ad-invariance of the g metric.
  const double adres = ad_invariance_residual(d.g.metric, d.g);
  rep.max_residual = std::max(rep.max_residual, adres);
  rep.ad_invariant = adres <= tol.abs_tol * scale * (1.0 + d.g.metric.gram.norm());
  if (!rep.ad_invariant) fail("g metric is not ad-invariant");

  // Axiom 2: pi is a Lie algebra homomorphism.
  double homres = 0.0;
  Eigen::VectorXd ea = Eigen::VectorXd::Zero(p), eb = ea;
  for (int a = 0; a < p; ++a) {
    ea.setZero(); ea(a) = 1.0;
    for (int b = a + 1; b < p; ++b) {
      eb.setZero(); eb(b) = 1.0;
      const Eigen::MatrixXd lhs = d.pi.apply(d.g.structure.bracket(ea, eb));
      const Eigen::MatrixXd rhs =
          d.pi.matrices[a] * d.pi.matrices[b] - d.pi.matrices[b] * d.pi.matrices[a];
      homres = std::max(homres, (lhs - rhs).norm());
    }
  }
  rep.max_residual = std::max(rep.max_residual, homres);
  rep.homomorphism = homres <= tol.abs_tol * scale * scale;
  if (!rep.homomorphism) fail("pi is not a homomorphism");

  // Axiom 3: faithful and without trivial subrepresentations.
  Eigen::MatrixXd stacked(q * q, p);
  for (int a = 0; a < p; ++a)
    stacked.col(a) =
        Eigen::Map<const Eigen::VectorXd>(d.pi.matrices[a].data(), q * q);
  rep.faithful = kernel(stacked, tol).dim() == 0;
  if (!rep.faithful) fail("pi is not faithful");
  rep.no_trivial_subrep = common_kernel(d.pi.matrices, tol).dim() == 0;
  if (!rep.no_trivial_subrep) fail("pi has a trivial subrepresentation");

  // Axiom 4: pi maps into so(v).
  rep.skew_adjoint = true;
  for (const auto& m : d.pi.matrices) {
    const double r = skew_adjoint_residual(m, d.v_metric);
    rep.max_residual = std::max(rep.max_residual, r);
    if (r > tol.abs_tol * (1.0 + d.v_metric.gram.norm() * m.norm()))
      rep.skew_adjoint = false;
  }
  if (!rep.skew_adjoint) fail("pi(Z) is not skew-adjoint for some Z");

  if (rep.g_metric_nondegenerate && rep.v_metric_nondegenerate) {
    BilinearForm total(block_diag(d.g.metric.gram, d.v_metric.gram));
    rep.total_signature = signature(total, tol);
    rep.lorentzian = rep.total_signature.cls == SignatureClass::lorentzian;
  }
  return rep;
}

MetricLieAlgebra build_nilpotent(const DataSet& d, const TolerancePolicy& tol) {
  const ValidationReport rep = validate_data_set(d, tol);
  if (!rep.valid()) {
    std::ostringstream oss;
    oss << "data set invalid:";
    for (const auto& f : rep.failures) oss << " [" << f << "]";
    throw InvalidDataSet(oss.str());
  }
  const int p = d.g.dim();
  const int q = d.pi.v_dim;
  const int n = p + q;

  MetricLieAlgebra L;
  L.metric = BilinearForm(block_diag(d.g.metric.gram, d.v_metric.gram));
  L.structure = StructureTensor::zero(n);

  // [X_i, X_j] in g solved from <[X,Y], Z> = <pi(Z)X, Y> via the g Gram.
  Eigen::PartialPivLU<Eigen::MatrixXd> gg(d.g.metric.gram);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      Eigen::VectorXd rhs(p);
      for (int a = 0; a < p; ++a)
        rhs(a) = d.pi.matrices[a].col(i).dot(d.v_metric.gram.col(j));
      const Eigen::VectorXd coeff = gg.solve(rhs);
      for (int a = 0; a < p; ++a) L.structure.set(p + i, p + j, a, coeff(a));
    }
  return L;
}

RecoveredDataSet recover_data_set(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  validate_algebra(L, tol);
  if (!is_two_step_nilpotent(L, tol))
    throw InvalidInput("recover_data_set: algebra is not 2-step nilpotent");
  const JMap jm = j_map(L, tol);  // CenterDegenerate
  if (jm.ker.dim() > 0)
    throw JNotInjective("recover_data_set: j has a nontrivial kernel");
  const NatRedCertificate cert = is_naturally_reductive(L, tol);
  if (!cert.verdict || !cert.induced_bracket)
    throw NotNaturallyReductive("recover_data_set: certificate failed");

  RecoveredDataSet out;
  out.data.g = MetricLieAlgebra{*cert.induced_bracket, jm.metric_z};
  out.data.v_metric = jm.metric_v;
  out.data.pi = Representation{jm.center_dim(), jm.v_dim(), jm.matrices};
  out.z_basis = jm.center;
  out.v_basis = jm.v;
  return out;
}

CompactSplit compact_split(const MetricLieAlgebra& g, const TolerancePolicy& tol) {
  const int p = g.dim();
  CompactSplit split;
  split.gbar = commutator_ideal(g, tol);
  split.c = center(g, tol);

  Eigen::MatrixXd killing(p, p);
  std::vector<Eigen::MatrixXd> ads(p);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < p; ++i) {
    e.setZero(); e(i) = 1.0;
    ads[i] = g.structure.ad(e);
  }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) killing(i, j) = (ads[i] * ads[j]).trace();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(killing);
  const double lmax = p ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
  const double th = std::max(tol.rank_threshold(p, p, lmax), tol.abs_tol);
  if (p && es.eigenvalues().maxCoeff() > th)
    throw NotCompact("Killing form is not negative semi-definite");
  if (!subspaces_equal(kernel(killing, tol), split.c))
    throw NotCompact("Killing kernel does not equal the center of g");

  Eigen::MatrixXd combined(p, split.gbar.dim() + split.c.dim());
  combined << split.gbar.basis, split.c.basis;
  if (split.gbar.dim() + split.c.dim() != p ||
      Subspace::span_of(combined, tol).dim() != p)
    throw NotCompact("g does not split as [g,g] + center");
  return split;
}

DataSet random_lorentzian_data_set(Rng& rng, int max_total_dim,
                                   const TolerancePolicy& tol) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const bool v_lorentzian = rng.uniform01() < 0.5;
    bool with_su2 = rng.uniform01() < 0.5;
    if (max_total_dim < (v_lorentzian ? 10 : 10)) with_su2 = false;

    const int base = (with_su2 ? 7 : 0) + (v_lorentzian ? 2 : 0);
    int m = 1 + (rng.uniform01() < 0.4 ? 1 : 0);  // dim c
    int rot_blocks = rng.uniform_int(v_lorentzian ? 0 : 1, 2);
    // Blocks the center can act on: su2 block + rotations + boost.
    int c_active = (with_su2 ? 1 : 0) + rot_blocks + (v_lorentzian ? 1 : 0);
    while (m > c_active) {
      ++rot_blocks;
      ++c_active;
    }
    while (base + m + 2 * rot_blocks > max_total_dim && rot_blocks > 0 &&
           c_active > m) {
      --rot_blocks;
      --c_active;
    }
    if (base + m + 2 * rot_blocks > max_total_dim || m > c_active) continue;

    // Assemble g = (su2 ⊕) R^m with one timelike direction when v is Riemannian.
    MetricLieAlgebra g;
    Eigen::MatrixXd cg = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) cg(i, i) = rng.uniform(0.5, 2.0);
    if (!v_lorentzian) cg(0, 0) = -cg(0, 0);
    const MetricLieAlgebra cal = abelian_algebra(BilinearForm(cg));
    g = with_su2 ? direct_sum(su2_algebra(rng.uniform(0.15, 0.6)), cal) : cal;
    const int p = g.dim();
    const int gbar_off = 0;  // su2 occupies the first 3 coordinates when present
    const int c_off = with_su2 ? 3 : 0;

    // Assemble v block by block.
    const RealifiedSu2Rep su2rep = su2_standard_realified();
    std::vector<int> block_dims;
    std::vector<Eigen::MatrixXd> block_metrics;
    std::vector<Eigen::MatrixXd> c_actions;  // generator of the c action per block
    if (with_su2) {
      block_dims.push_back(4);
      block_metrics.push_back(rng.uniform(0.5, 2.0) * Eigen::MatrixXd::Identity(4, 4));
      c_actions.push_back(su2rep.complex_structure);
    }
    for (int r = 0; r < rot_blocks; ++r) {
      block_dims.push_back(2);
      block_metrics.push_back(rng.uniform(0.5, 2.0) * Eigen::MatrixXd::Identity(2, 2));
      c_actions.push_back(rotation_generator2());
    }
    if (v_lorentzian) {
      Eigen::MatrixXd bm = rng.uniform(0.5, 2.0) * Eigen::MatrixXd::Identity(2, 2);
      bm(0, 0) = -bm(0, 0);
      block_dims.push_back(2);
      block_metrics.push_back(bm);
      c_actions.push_back(boost_generator2());
    }
    const int nblocks = static_cast<int>(block_dims.size());
    int q = 0;
    std::vector<int> offs(nblocks);
    for (int b = 0; b < nblocks; ++b) {
      offs[b] = q;
      q += block_dims[b];
    }

    // Coefficients of the c action, full row rank so pi stays faithful.
    Eigen::MatrixXd coeff(m, nblocks);
    for (int i = 0; i < m; ++i)
      for (int b = 0; b < nblocks; ++b)
        coeff(i, b) = rng.uniform(0.4, 1.6) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
    if (Subspace::span_of(coeff.transpose(), tol).dim() < m) continue;

    DataSet d;
    d.g = g;
    Eigen::MatrixXd gv = Eigen::MatrixXd::Zero(q, q);
    for (int b = 0; b < nblocks; ++b)
      gv.block(offs[b], offs[b], block_dims[b], block_dims[b]) = block_metrics[b];
    d.v_metric = BilinearForm(gv);
    d.pi.g_dim = p;
    d.pi.v_dim = q;
    d.pi.matrices.assign(p, Eigen::MatrixXd::Zero(q, q));
    if (with_su2)
      for (int k = 0; k < 3; ++k)
        d.pi.matrices[gbar_off + k].block(offs[0], offs[0], 4, 4) = su2rep.generators[k];
    for (int i = 0; i < m; ++i)
      for (int b = 0; b < nblocks; ++b)
        d.pi.matrices[c_off + i].block(offs[b], offs[b], block_dims[b], block_dims[b]) +=
            coeff(i, b) * c_actions[b];
    d.name = "random";

    const ValidationReport rep = validate_data_set(d, tol);
    if (rep.valid() && rep.lorentzian) return d;
  }
  throw InvalidInput("random_lorentzian_data_set: could not assemble an instance");
}

DataSet adversarial_semisimple_attempt(Rng& rng) {
  const int variant = rng.uniform_int(0, 3);
  DataSet d;
  d.name = "adversarial";
  switch (variant) {
    case 0: {
      // Honest skew action on R^{1,4}, but the timelike direction is fixed.
      d.g = su2_algebra(rng.uniform(0.2, 1.0));
      d.v_metric = BilinearForm::minkowski(5);
      const RealifiedSu2Rep rep = su2_standard_realified();
      d.pi.g_dim = 3;
      d.pi.v_dim = 5;
      d.pi.matrices.assign(3, Eigen::MatrixXd::Zero(5, 5));
      for (int k = 0; k < 3; ++k)
        d.pi.matrices[k].block(1, 1, 4, 4) = rep.generators[k];
      // Conjugate by a Lorentz transform to hide the fixed vector.
      const Eigen::MatrixXd a = rng.normal_matrix(5, 5);
      const Eigen::MatrixXd g = d.v_metric.gram;
      Eigen::MatrixXd so1n = 0.5 * (a - g.inverse() * a.transpose() * g);
      so1n = 0.3 * so1n / (1.0 + so1n.norm());
      const Eigen::MatrixXd T = so1n.exp();
      for (auto& mtx : d.pi.matrices) mtx = T * mtx * T.inverse();
      break;
    }
    case 1: {
      // Too little room: random so(1,2) images cannot close into su(2).
      d.g = su2_algebra(rng.uniform(0.2, 1.0));
      d.v_metric = BilinearForm::minkowski(3);
      d.pi.g_dim = 3;
      d.pi.v_dim = 3;
      for (int k = 0; k < 3; ++k) {
        Eigen::MatrixXd a = rng.normal_matrix(3, 3);
        // Project onto so(1,2): A = -G^{-1} A^T G symmetrized.
        Eigen::MatrixXd g = d.v_metric.gram;
        d.pi.matrices.push_back(0.5 * (a - g.inverse() * a.transpose() * g));
      }
      break;
    }
    case 2: {
      // Metric on su(2) that is not ad-invariant.
      d.g = su2_algebra(1.0);
      d.g.metric = BilinearForm(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal());
      d.v_metric = BilinearForm::minkowski(3);
      d.pi.g_dim = 3;
      d.pi.v_dim = 3;
      d.pi.matrices.assign(3, Eigen::MatrixXd::Zero(3, 3));
      d.pi.matrices[0].block(1, 1, 2, 2) = rotation_generator2();
      d.pi.matrices[1].block(1, 1, 2, 2) = 2.0 * rotation_generator2();
      d.pi.matrices[2].block(1, 1, 2, 2) = 3.0 * rotation_generator2();
      break;
    }
    default: {
      // Valid data set but with negative-definite g: total index is 3+.
      d.g = su2_algebra(-rng.uniform(0.2, 1.0));
      d.v_metric = BilinearForm::minkowski(5);
      const RealifiedSu2Rep rep = su2_standard_realified();
      d.pi.g_dim = 3;
      d.pi.v_dim = 5;
      d.pi.matrices.assign(3, Eigen::MatrixXd::Zero(5, 5));
      for (int k = 0; k < 3; ++k)
        d.pi.matrices[k].block(1, 1, 4, 4) = rep.generators[k];
      break;
    }
  }
  return d;
}

}  // namespace nilsym
