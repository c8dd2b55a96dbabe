#include "nilsym/geometry.hpp"

#include <cmath>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace nilsym {

std::string to_string(FlatVerdict v) {
  switch (v) {
    case FlatVerdict::no_flat_factor: return "no_flat_factor";
    case FlatVerdict::flat_factor: return "flat_factor";
    case FlatVerdict::degenerate_V0: return "degenerate_V0";
  }
  return "unknown";
}

double ConnectionTable::metric_compatibility_residual(const BilinearForm& metric) const {
  double r = 0.0;
  for (const auto& g : gamma)
    r = std::max(r, (g.transpose() * metric.gram + metric.gram * g).norm());
  return r;
}

double ConnectionTable::torsion_residual(const MetricLieAlgebra& L) const {
  const int n = dim();
  double r = 0.0;
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = ei;
  for (int i = 0; i < n; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      ej.setZero(); ej(j) = 1.0;
      r = std::max(r, (gamma[i] * ej - gamma[j] * ei - L.structure.bracket(ei, ej)).norm());
    }
  }
  return r;
}

double CurvatureTensor::antisymmetry_residual() const {
  double res = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) res = std::max(res, (at(i, j) + at(j, i)).norm());
  return res;
}

double CurvatureTensor::first_bianchi_residual() const {
  double res = 0.0;
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(dim), ej = ei, ek = ei;
  for (int i = 0; i < dim; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = 0; j < dim; ++j) {
      ej.setZero(); ej(j) = 1.0;
      for (int k = 0; k < dim; ++k) {
        ek.setZero(); ek(k) = 1.0;
        res = std::max(res, (at(i, j) * ek + at(j, k) * ei + at(k, i) * ej).norm());
      }
    }
  }
  return res;
}

ConnectionTable levi_civita_2step(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  if (!is_two_step_nilpotent(L, tol))
    throw InvalidInput("levi_civita_2step: algebra is not 2-step nilpotent");
  const JMap jm = j_map(L, tol);  // CenterDegenerate
  const int n = L.dim();

  // Metric-orthogonal coordinates of each basis vector.
  std::vector<Eigen::VectorXd> zc(n), vc(n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    e.setZero(); e(i) = 1.0;
    zc[i] = jm.z_coords(e, L.metric);
    vc[i] = jm.v_coords(e, L.metric);
  }

  ConnectionTable conn;
  conn.gamma.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd vi = jm.v.basis * vc[i];
    const Eigen::MatrixXd ji = jm.apply(zc[i]);
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd vj = jm.v.basis * vc[j];
      Eigen::VectorXd out = 0.5 * L.structure.bracket(vi, vj);
      out -= 0.5 * jm.v.basis * (jm.apply(zc[j]) * vc[i]);
      out -= 0.5 * jm.v.basis * (ji * vc[j]);
      conn.gamma[i].col(j) = out;
    }
  }
  return conn;
}

ConnectionTable koszul_connection(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  validate_algebra(L, tol);
  const int n = L.dim();
  Eigen::PartialPivLU<Eigen::MatrixXd> g(L.metric.gram);

  std::vector<std::vector<Eigen::VectorXd>> b(n, std::vector<Eigen::VectorXd>(n));
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = ei;
  for (int i = 0; i < n; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = 0; j < n; ++j) {
      ej.setZero(); ej(j) = 1.0;
      b[i][j] = L.structure.bracket(ei, ej);
    }
  }

  ConnectionTable conn;
  conn.gamma.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd rhs(n);
      for (int k = 0; k < n; ++k)
        rhs(k) = L.metric.gram.col(k).dot(b[i][j]) -
                 L.metric.gram.col(j).dot(b[i][k]) -
                 L.metric.gram.col(i).dot(b[j][k]);
      conn.gamma[i].col(j) = 0.5 * g.solve(rhs);
    }
  return conn;
}

CurvatureTensor curvature(const ConnectionTable& conn, const MetricLieAlgebra& L) {
  const int n = conn.dim();
  CurvatureTensor R;
  R.dim = n;
  R.r.assign(n * n, Eigen::MatrixXd::Zero(n, n));
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = ei;
  for (int i = 0; i < n; ++i) {
    ei.setZero(); ei(i) = 1.0;
    for (int j = 0; j < n; ++j) {
      ej.setZero(); ej(j) = 1.0;
      Eigen::MatrixXd m = conn.gamma[i] * conn.gamma[j] - conn.gamma[j] * conn.gamma[i];
      const Eigen::VectorXd bij = L.structure.bracket(ei, ej);
      for (int k = 0; k < n; ++k) m -= bij(k) * conn.gamma[k];
      R.r[i * n + j] = m;
    }
  }
  return R;
}

double curvature_blocks_residual(const MetricLieAlgebra& L, const CurvatureTensor& R,
                                 const TolerancePolicy& tol) {
  const JMap jm = j_map(L, tol);
  const int n = L.dim();
  const int p = jm.center_dim();
  const int q = jm.v_dim();
  double res = 0.0;
  for (int a = 0; a < q; ++a) {        // A in v
    const Eigen::VectorXd A = jm.v.basis.col(a);
    for (int b = 0; b < p; ++b) {      // B in z
      const Eigen::VectorXd B = jm.center.basis.col(b);
      // Endomorphism R(A, B) by bilinearity from the coordinate tensor.
      Eigen::MatrixXd RAB = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) RAB += A(i) * B(j) * R.at(i, j);
      // Slot Z in z: R(A,B)Z = -(j(B) j(Z)) A / 4.
      const Eigen::VectorXd va = Eigen::VectorXd::Unit(q, a);  // A in v coordinates
      for (int c = 0; c < p; ++c) {
        const Eigen::VectorXd expect =
            -0.25 * jm.v.basis * (jm.matrices[b] * (jm.matrices[c] * va));
        res = std::max(res, (RAB * jm.center.basis.col(c) - expect).norm());
      }
      // Slot X in v: R(A,B)X = -[A, j(B)X] / 4.
      for (int c = 0; c < q; ++c) {
        const Eigen::VectorXd jbx = jm.v.basis * (jm.matrices[b] * Eigen::VectorXd::Unit(q, c));
        const Eigen::VectorXd expect = -0.25 * L.structure.bracket(A, jbx);
        res = std::max(res, (RAB * jm.v.basis.col(c) - expect).norm());
      }
    }
  }
  return res;
}

Subspace nullity(const CurvatureTensor& R, const TolerancePolicy& tol) {
  const int n = R.dim;
  std::vector<Eigen::MatrixXd> maps;
  maps.reserve(n * n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) maps.push_back(R.at(i, j));
  // Second characterization: v with R(v, .). = 0, linear in v.
  Eigen::MatrixXd flat(n * n * n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const int row = (j * n + k) * n + l;
        for (int i = 0; i < n; ++i) flat(row, i) = R.at(i, j)(l, k);
      }
  maps.push_back(flat);
  return common_kernel(maps, tol);
}

FlatFactorReport flat_factor_analysis(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  if (!is_two_step_nilpotent(L, tol))
    throw InvalidInput("flat_factor_analysis: algebra is not 2-step nilpotent");
  const JMap jm = j_map(L, tol);

  FlatFactorReport rep;
  rep.ker_j = jm.ker;
  rep.nullity = nullity(curvature(levi_civita_2step(L, tol), L), tol);
  const Subspace comm = commutator_ideal(L, tol);
  rep.commutator_nondegenerate =
      comm.dim() == 0 || signature(restrict_form(L.metric, comm), tol).null == 0;

  if (jm.ker.dim() == 0) {
    rep.verdict = FlatVerdict::no_flat_factor;
  } else if (signature(restrict_form(L.metric, jm.ker), tol).null == 0) {
    rep.verdict = FlatVerdict::flat_factor;
    rep.flat_dim = jm.ker.dim();
  } else {
    rep.verdict = FlatVerdict::degenerate_V0;
  }
  return rep;
}

namespace {

struct GeodesicOde {
  const MetricLieAlgebra& L;
  Eigen::PartialPivLU<Eigen::MatrixXd> glu;

  explicit GeodesicOde(const MetricLieAlgebra& l) : L(l), glu(l.metric.gram) {}

  // d/dt (x, v): xdot = v + [x,v]/2, <vdot, w> = <v, [v,w]>.
  void eval(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
            Eigen::VectorXd& xdot, Eigen::VectorXd& vdot) const {
    xdot = v + 0.5 * L.structure.bracket(x, v);
    const Eigen::MatrixXd adv = L.structure.ad(v);
    vdot = glu.solve(adv.transpose() * (L.metric.gram * v));
  }
};

}  // namespace

Trajectory geodesic_integrate(const MetricLieAlgebra& L, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& v0, double t_end, double step) {
  if (step <= 0.0) throw InvalidInput("geodesic_integrate: step must be positive");
  const GeodesicOde ode(L);
  const double e0 = L.metric.eval(v0, v0);
  const double escale = 1.0 + std::abs(e0);

  Trajectory traj;
  Eigen::VectorXd x = x0, v = v0;
  Eigen::VectorXd k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
  double t = 0.0;
  traj.push_back({t, x, v, e0});
  const long nsteps = std::lround(std::ceil(t_end / step - 1e-12));
  for (long s = 0; s < nsteps; ++s) {
    const double h = std::min(step, t_end - t);
    ode.eval(x, v, k1x, k1v);
    ode.eval(x + 0.5 * h * k1x, v + 0.5 * h * k1v, k2x, k2v);
    ode.eval(x + 0.5 * h * k2x, v + 0.5 * h * k2v, k3x, k3v);
    ode.eval(x + h * k3x, v + h * k3v, k4x, k4v);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t += h;
    const double e = L.metric.eval(v, v);
    if (std::abs(e - e0) / escale > 1e-6)
      throw StepTooLarge("geodesic energy drift exceeded 1e-6");
    traj.push_back({t, x, v, e});
  }
  return traj;
}

double energy_drift_per_unit_time(const Trajectory& traj) {
  if (traj.size() < 2) return 0.0;
  const double e0 = traj.front().energy;
  const double span = traj.back().t - traj.front().t;
  double drift = 0.0;
  for (const auto& s : traj) drift = std::max(drift, std::abs(s.energy - e0));
  return drift / ((1.0 + std::abs(e0)) * std::max(span, 1e-300));
}

Eigen::VectorXd killing_flow(const MetricLieAlgebra& L, const Eigen::VectorXd& U,
                             const Eigen::MatrixXd& D, const Eigen::VectorXd& x0,
                             double t, const TolerancePolicy& tol) {
  const int n = L.dim();
  double scale = 1.0 + D.norm();
  for (const auto& m : L.structure.comp) scale = std::max(scale, m.norm());
  if (derivation_residual(L, D) > tol.abs_tol * scale * scale)
    throw NotADerivation("killing_flow: D is not a derivation");

  Eigen::MatrixXd affine = Eigen::MatrixXd::Zero(n + 1, n + 1);
  affine.topLeftCorner(n, n) = D + 0.5 * L.structure.ad(U);
  affine.topRightCorner(n, 1) = U;
  const Eigen::MatrixXd flow = (t * affine).exp();
  Eigen::VectorXd hom(n + 1);
  hom << x0, 1.0;
  return (flow * hom).head(n);
}

std::vector<OrbitSample> killing_orbit_samples(const MetricLieAlgebra& L,
                                               const Eigen::VectorXd& U,
                                               const Eigen::MatrixXd& D, double t_end,
                                               double step) {
  if (step <= 0.0) throw InvalidInput("killing_orbit_samples: step must be positive");
  const int n = L.dim();
  const Eigen::MatrixXd A = D + 0.5 * L.structure.ad(U);
  Eigen::MatrixXd affine = Eigen::MatrixXd::Zero(n + 1, n + 1);
  affine.topLeftCorner(n, n) = A;
  affine.topRightCorner(n, 1) = U;

  const Eigen::MatrixXd stepflow = (step * affine).exp();
  Eigen::VectorXd hom = Eigen::VectorXd::Zero(n + 1);
  hom(n) = 1.0;

  std::vector<OrbitSample> samples;
  double t = 0.0;
  while (t <= t_end + 1e-12) {
    const Eigen::VectorXd x = hom.head(n);
    const Eigen::VectorXd xdot = U + A * x;
    const Eigen::VectorXd xddot = A * xdot;
    // Body velocity and its derivative from the 2-step reconstruction.
    const Eigen::VectorXd v = xdot - 0.5 * L.structure.bracket(x, xdot);
    const Eigen::VectorXd vdot = xddot - 0.5 * L.structure.bracket(x, xddot);
    const Eigen::MatrixXd adv = L.structure.ad(v);
    const Eigen::VectorXd lhs = L.metric.gram * vdot;
    const Eigen::VectorXd rhs = adv.transpose() * (L.metric.gram * v);
    samples.push_back({t, x, (lhs - rhs).norm()});
    hom = stepflow * hom;
    t += step;
  }
  return samples;
}

double killing_orbit_geodesic_residual(const MetricLieAlgebra& L,
                                       const Eigen::VectorXd& U,
                                       const Eigen::MatrixXd& D, double t_end,
                                       double step) {
  double res = 0.0;
  for (const auto& s : killing_orbit_samples(L, U, D, t_end, step))
    res = std::max(res, s.residual);
  return res;
}

}  // namespace nilsym
