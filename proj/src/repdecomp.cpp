#include "nilsym/repdecomp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace nilsym {

namespace {

double maps_scale(const std::vector<Eigen::MatrixXd>& maps) {
  double s = 1.0;
  for (const auto& m : maps) s = std::max(s, m.norm());
  return s;
}

// Basis of {B : [B, R_a] = 0 for all a}, optionally restricted to symmetric B.
std::vector<Eigen::MatrixXd> commutant_basis(const std::vector<Eigen::MatrixXd>& maps,
                                             bool symmetric_only,
                                             const TolerancePolicy& tol) {
  const int m = static_cast<int>(maps.front().rows());
  const int sym_rows = symmetric_only ? m * m : 0;
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Zero(static_cast<long>(maps.size()) * m * m + sym_rows, m * m);
  auto col_of = [m](int r, int c) { return c * m + r; };
  long row = 0;
  for (const auto& R : maps) {
    // (B R - R B)(r, c) = 0
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c, ++row) {
        for (int k = 0; k < m; ++k) {
          A(row, col_of(r, k)) += R(k, c);
          A(row, col_of(k, c)) -= R(r, k);
        }
      }
  }
  if (symmetric_only)
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c, ++row) {
        A(row, col_of(r, c)) += 1.0;
        A(row, col_of(c, r)) -= 1.0;
      }
  const Subspace null = kernel(A, tol);
  std::vector<Eigen::MatrixXd> basis;
  basis.reserve(null.dim());
  for (int c = 0; c < null.dim(); ++c)
    basis.push_back(Eigen::Map<const Eigen::MatrixXd>(null.basis.col(c).data(), m, m));
  return basis;
}

// Split sorted eigenvalues into clusters at relative gaps above 1e-7.
std::vector<std::pair<int, int>> eigen_clusters(const Eigen::VectorXd& ev) {
  const double th = 1e-7 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<std::pair<int, int>> clusters;
  int start = 0;
  for (int i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev(i) - ev(i - 1) > th) {
      clusters.emplace_back(start, i - start);
      start = i;
    }
  }
  return clusters;
}

// Recursive orthogonal decomposition of a Riemannian invariant subspace into
// irreducibles via generic symmetric commutant elements.
void riemannian_split(const Subspace& W, const std::vector<Eigen::MatrixXd>& pi,
                      const BilinearForm& Gv, Rng& rng, const TolerancePolicy& tol,
                      std::vector<IsotypicBlock>& out) {
  const int m = W.dim();
  if (m == 0) return;

  const Eigen::MatrixXd Gw = restrict_form(Gv, W).gram;
  Eigen::LLT<Eigen::MatrixXd> llt(Gw);
  if (llt.info() != Eigen::Success)
    throw DecompositionFailure("Riemannian block has a non positive-definite metric");
  // Metric-orthonormal coordinates: columns of C satisfy C^T Gv C = Id.
  const Eigen::MatrixXd Lmat = llt.matrixL();
  const Eigen::MatrixXd C = W.basis * Lmat.transpose()
                                          .triangularView<Eigen::Upper>()
                                          .solve(Eigen::MatrixXd::Identity(m, m));

  const double scale = maps_scale(pi);
  std::vector<Eigen::MatrixXd> restricted;
  restricted.reserve(pi.size());
  for (const auto& P : pi) {
    const Eigen::MatrixXd R = C.transpose() * Gv.gram * P * C;
    if ((P * C - C * R).norm() > 1e3 * tol.abs_tol * scale)
      throw DecompositionFailure("subspace is not invariant under the action");
    restricted.push_back(R);
  }

  const auto sym = commutant_basis(restricted, true, tol);
  if (static_cast<int>(sym.size()) <= 1) {
    const auto full = commutant_basis(restricted, false, tol);
    const int cdim = static_cast<int>(full.size());
    if (cdim != 1 && cdim != 2 && cdim != 4)
      throw DecompositionFailure("irreducible block with non division-algebra commutant");
    IsotypicBlock block;
    block.subspace = W;
    block.kind = BlockKind::riemannian_irreducible;
    block.commutant_dim = cdim;
    out.push_back(std::move(block));
    return;
  }

  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
    for (const auto& b : sym) S += rng.normal() * b;
    S = 0.5 * (S + S.transpose());
    const Eigen::MatrixXd S0 = S - (S.trace() / m) * Eigen::MatrixXd::Identity(m, m);
    if (S0.norm() < 1e-8) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const auto clusters = eigen_clusters(es.eigenvalues());
    if (clusters.size() < 2) continue;
    for (const auto& [start, len] : clusters) {
      const Subspace sub =
          Subspace::span_of(C * es.eigenvectors().middleCols(start, len), tol);
      riemannian_split(sub, pi, Gv, rng, tol, out);
    }
    return;
  }
  throw DecompositionFailure("eigenvalue clustering failed after 8 retries");
}

Eigen::VectorXd normalize_line(Eigen::VectorXd w) {
  w.normalize();
  for (int i = 0; i < w.size(); ++i)
    if (std::abs(w(i)) > 1e-8) {
      if (w(i) < 0.0) w = -w;
      break;
    }
  return w;
}

}  // namespace

std::string to_string(BlockKind k) {
  return k == BlockKind::lorentzian_v0 ? "lorentzian_v0" : "riemannian_irreducible";
}

int InvariantDecomposition::v0_count() const {
  int c = 0;
  for (const auto& b : blocks)
    if (b.kind == BlockKind::lorentzian_v0) ++c;
  return c;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> find_invariant_lightlike_pair(
    const std::vector<Eigen::MatrixXd>& maps, const BilinearForm& form, Rng& rng,
    const TolerancePolicy& tol) {
  if (maps.empty()) throw InvalidInput("find_invariant_lightlike_pair: no maps");
  if (common_kernel(maps, tol).dim() > 0)
    throw NoBoostPart("maps still have a common kernel");
  const int k = static_cast<int>(maps.front().rows());
  const double scale = maps_scale(maps);

  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
    for (const auto& m : maps) A += rng.normal() * m;

    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    // Skew-adjoint w.r.t. a Lorentzian form: real spectrum is a pair ±lambda
    // carried by lightlike eigenvectors.
    double best = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto ev = es.eigenvalues()(i);
      if (std::abs(ev.imag()) <= 1e-9 * scale && std::abs(ev.real()) > 1e-7 * scale)
        best = std::max(best, std::abs(ev.real()));
    }
    if (best == 0.0) continue;

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(k, k);
    const Subspace e_plus = kernel(A - best * id, tol);
    const Subspace e_minus = kernel(A + best * id, tol);
    if (e_plus.dim() != 1 || e_minus.dim() != 1) continue;
    Eigen::VectorXd w0 = normalize_line(e_plus.basis.col(0));
    Eigen::VectorXd w1 = normalize_line(e_minus.basis.col(0));

    const double n0 = std::abs(form.eval(w0, w0));
    const double n1 = std::abs(form.eval(w1, w1));
    const double cross = form.eval(w0, w1);
    if (n0 > 1e-7 || n1 > 1e-7 || std::abs(cross) < 1e-7) continue;

    bool invariant = true;
    for (const auto& m : maps) {
      const Eigen::VectorXd m0 = m * w0;
      const Eigen::VectorXd m1 = m * w1;
      if ((m0 - w0.dot(m0) * w0).norm() > 1e-7 * scale ||
          (m1 - w1.dot(m1) * w1).norm() > 1e-7 * scale)
        invariant = false;
    }
    if (!invariant) continue;
    return {w0, w1};
  }
  throw NoBoostPart("no real eigenvalue pair with lightlike eigenvectors found");
}

void extract_J_lambda(IsotypicBlock& block, const DataSet& d, const CompactSplit& split,
                      const TolerancePolicy& tol) {
  const int m = block.subspace.dim();
  const int nc = split.c.dim();
  const Eigen::MatrixXd& Gv = d.v_metric.gram;

  // Pseudo-orthonormal coordinates of the block (timelike direction first).
  const Eigen::MatrixXd Gw = restrict_form(d.v_metric, block.subspace).gram;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gw);
  Eigen::VectorXd eta(m);
  Eigen::MatrixXd P(m, m);
  for (int i = 0; i < m; ++i) {
    const double d_i = es.eigenvalues()(i);
    if (std::abs(d_i) < tol.abs_tol)
      throw NotScalarMultiple("block metric is degenerate");
    eta(i) = d_i > 0.0 ? 1.0 : -1.0;
    P.col(i) = es.eigenvectors().col(i) / std::sqrt(std::abs(d_i));
  }
  Eigen::MatrixXd Cb = block.subspace.basis * P;
  for (int i = 0; i < m; ++i)
    for (int r = 0; r < Cb.rows(); ++r) {
      if (std::abs(Cb(r, i)) <= 1e-8) continue;
      if (Cb(r, i) < 0.0) Cb.col(i) = -Cb.col(i);
      break;
    }

  double scale = 1.0;
  std::vector<Eigen::MatrixXd> restrictions(nc);
  for (int kc = 0; kc < nc; ++kc) {
    const Eigen::MatrixXd Pi = d.pi.apply(split.c.basis.col(kc));
    restrictions[kc] = eta.asDiagonal() * (Cb.transpose() * Gv * Pi * Cb);
    scale = std::max(scale, Pi.norm());
    if ((Pi * Cb - Cb * restrictions[kc]).norm() > 1e3 * tol.abs_tol * scale)
      throw NotScalarMultiple("block is not invariant under the central action");
  }

  int kbest = -1;
  double nbest = 0.0;
  for (int kc = 0; kc < nc; ++kc)
    if (restrictions[kc].norm() > nbest) {
      nbest = restrictions[kc].norm();
      kbest = kc;
    }
  if (kbest < 0 || nbest <= 1e3 * tol.abs_tol * scale) {
    block.lambda = Eigen::VectorXd::Zero(nc);
    return;  // pi(c) restricts to zero; no J is defined
  }

  const Eigen::MatrixXd M = restrictions[kbest] * restrictions[kbest];
  const double c_diag = M.trace() / m;
  if ((M - c_diag * Eigen::MatrixXd::Identity(m, m)).norm() >
      1e3 * tol.abs_tol * scale * scale)
    throw NotScalarMultiple("square of the restriction is not scalar");
  const bool want_positive = block.kind == BlockKind::lorentzian_v0;
  if (want_positive ? c_diag <= 0.0 : c_diag >= 0.0)
    throw NotScalarMultiple("restriction squares to the wrong sign");

  Eigen::MatrixXd J = restrictions[kbest] / std::sqrt(std::abs(c_diag));
  Eigen::VectorXd lambda(nc);
  const double jfro = J.squaredNorm();
  for (int kc = 0; kc < nc; ++kc) {
    lambda(kc) = (restrictions[kc].array() * J.array()).sum() / jfro;
    if ((restrictions[kc] - lambda(kc) * J).norm() > 1e3 * tol.abs_tol * scale)
      throw NotScalarMultiple("central restriction is not a multiple of J");
  }
  for (int kc = 0; kc < nc; ++kc) {
    if (std::abs(lambda(kc)) <= 1e3 * tol.abs_tol * scale) continue;
    if (lambda(kc) < 0.0) {
      J = -J;
      lambda = -lambda;
    }
    break;
  }
  block.J = J;
  block.lambda = lambda;
}

InvariantDecomposition invariant_decomposition(const DataSet& d, Rng& rng,
                                               const TolerancePolicy& tol) {
  const ValidationReport rep = validate_data_set(d, tol);
  if (!rep.valid()) throw InvalidDataSet("invariant_decomposition: data set invalid");
  const CompactSplit split = compact_split(d.g, tol);
  const int q = d.pi.v_dim;

  InvariantDecomposition dec;
  if (split.gbar.dim() == 0) {
    dec.u0 = Subspace::full(q);
  } else {
    std::vector<Eigen::MatrixXd> gbar_maps;
    for (int b = 0; b < split.gbar.dim(); ++b)
      gbar_maps.push_back(d.pi.apply(split.gbar.basis.col(b)));
    dec.u0 = common_kernel(gbar_maps, tol);
  }

  const SignatureReport vsig = signature(d.v_metric, tol);
  if (vsig.cls == SignatureClass::riemannian) {
    riemannian_split(Subspace::full(q), d.pi.matrices, d.v_metric, rng, tol, dec.blocks);
  } else if (vsig.cls == SignatureClass::lorentzian) {
    // The boost plane lives inside u0; the central action restricted there is
    // a commuting skew family with trivial common kernel.
    const BilinearForm Gu0 = restrict_form(d.v_metric, dec.u0);
    std::vector<Eigen::MatrixXd> mu;
    for (int kc = 0; kc < split.c.dim(); ++kc) {
      const Eigen::MatrixXd Pi = d.pi.apply(split.c.basis.col(kc));
      mu.push_back(dec.u0.basis.transpose() * Pi * dec.u0.basis);
    }
    auto [w0, w1] = find_invariant_lightlike_pair(mu, Gu0, rng, tol);

    IsotypicBlock v0;
    v0.kind = BlockKind::lorentzian_v0;
    Eigen::MatrixXd pair(q, 2);
    pair.col(0) = dec.u0.basis * w0;
    pair.col(1) = dec.u0.basis * w1;
    v0.subspace = Subspace::span_of(pair, tol);
    v0.lightlike_lines = {normalize_line(pair.col(0)), normalize_line(pair.col(1))};
    dec.blocks.push_back(std::move(v0));

    const Subspace rest = orthogonal_complement(dec.blocks[0].subspace, d.v_metric, tol);
    riemannian_split(rest, d.pi.matrices, d.v_metric, rng, tol, dec.blocks);
  } else {
    throw InvalidDataSet("v metric is neither Riemannian nor Lorentzian");
  }

  // Deterministic order: v0 first, then descending dimension, ties by pivot.
  std::stable_sort(dec.blocks.begin(), dec.blocks.end(),
                   [](const IsotypicBlock& a, const IsotypicBlock& b) {
                     const bool a0 = a.kind == BlockKind::lorentzian_v0;
                     const bool b0 = b.kind == BlockKind::lorentzian_v0;
                     if (a0 != b0) return a0;
                     if (a.subspace.dim() != b.subspace.dim())
                       return a.subspace.dim() > b.subspace.dim();
                     return a.subspace.first_pivot() < b.subspace.first_pivot();
                   });
  for (auto& block : dec.blocks) extract_J_lambda(block, d, split, tol);
  return dec;
}

KernelReport kernel_decomposition(const DataSet& d, const InvariantDecomposition& dec,
                                  const Eigen::VectorXd& Z, const TolerancePolicy& tol) {
  KernelReport rep;
  const Eigen::MatrixXd Pi = d.pi.apply(Z);
  rep.kernel = kernel(Pi, tol);

  int dims = 0;
  std::vector<Eigen::MatrixXd> pieces;
  for (const auto& block : dec.blocks) {
    rep.b_blocks.push_back(intersect(rep.kernel, block.subspace, tol));
    dims += rep.b_blocks.back().dim();
    if (rep.b_blocks.back().dim() > 0) pieces.push_back(rep.b_blocks.back().basis);
  }
  Eigen::MatrixXd joined(d.pi.v_dim, dims);
  int off = 0;
  for (const auto& p : pieces) {
    joined.middleCols(off, p.cols()) = p;
    off += static_cast<int>(p.cols());
  }
  rep.direct_sum_ok = dims == rep.kernel.dim() &&
                      subspaces_equal(Subspace::span_of(joined, tol), rep.kernel);

  rep.kernel_signature = signature(restrict_form(d.v_metric, rep.kernel), tol);
  rep.nondegenerate = rep.kernel_signature.null == 0;
  for (const auto& block : dec.blocks)
    if (block.kind == BlockKind::lorentzian_v0)
      rep.lorentzian_kernel = subspace_contains(rep.kernel, block.subspace);

  // For central Z each Riemannian slice must be all or nothing.
  const CompactSplit split = compact_split(d.g, tol);
  const Eigen::VectorXd zc = split.c.basis * (split.c.basis.transpose() * Z);
  if ((Z - zc).norm() <= 1e-8 * (1.0 + Z.norm())) {
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
      if (dec.blocks[i].kind == BlockKind::lorentzian_v0) continue;
      const int bd = rep.b_blocks[i].dim();
      if (bd != 0 && bd != dec.blocks[i].subspace.dim())
        rep.central_all_or_nothing = false;
    }
  }
  return rep;
}

Eigen::VectorXd timelike_fixed_vector(const std::vector<Eigen::MatrixXd>& maps,
                                      const BilinearForm& form,
                                      const TolerancePolicy& tol) {
  if (maps.empty()) throw InvalidInput("timelike_fixed_vector: empty map list");
  const Subspace fixed = common_kernel(maps, tol);
  if (fixed.dim() == 0)
    throw NoTimelikeFixed("the action has no fixed vectors at all");
  const BilinearForm Gf = restrict_form(form, fixed);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gf.gram);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= -tol.abs_tol * (1.0 + form.gram.norm()))
    throw NoTimelikeFixed("no timelike direction among the fixed vectors");
  return fixed.basis * es.eigenvectors().col(0);
}

}  // namespace nilsym
