#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nilsym/liealg.hpp"

namespace nilsym {

/// Left-invariant connection coefficients: nabla_{e_i} e_j = gamma[i] * e_j
/// (gamma[i] is the matrix of nabla_{e_i}).
struct ConnectionTable {
  std::vector<Eigen::MatrixXd> gamma;

  int dim() const { return static_cast<int>(gamma.size()); }
  double metric_compatibility_residual(const BilinearForm& metric) const;
  double torsion_residual(const MetricLieAlgebra& L) const;
};

/// Curvature tensor R(e_i, e_j) stored as one endomorphism per index pair.
struct CurvatureTensor {
  int dim = 0;
  std::vector<Eigen::MatrixXd> r;  // r[i * dim + j] = R(e_i, e_j)

  const Eigen::MatrixXd& at(int i, int j) const { return r[i * dim + j]; }
  double antisymmetry_residual() const;
  double first_bianchi_residual() const;
};

enum class FlatVerdict { no_flat_factor, flat_factor, degenerate_V0 };

std::string to_string(FlatVerdict v);

struct FlatFactorReport {
  Subspace ker_j;
  Subspace nullity;
  bool commutator_nondegenerate = false;
  FlatVerdict verdict = FlatVerdict::no_flat_factor;
  int flat_dim = 0;
};

/// One integration sample: time, exponential coordinates, body velocity.
struct TrajectorySample {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  double energy = 0.0;
};

using Trajectory = std::vector<TrajectorySample>;

// -- operations ------------------------------------------------------------

/// Case-wise connection of a 2-step algebra adapted to z ⊕ v:
/// nabla_X Y = [X,Y]/2, nabla_X Z = nabla_Z X = -j(Z)X/2, nabla_Z Z' = 0.
ConnectionTable levi_civita_2step(const MetricLieAlgebra& L,
                                  const TolerancePolicy& tol = {});

/// Koszul formula solved against the metric Gram; the independent route.
ConnectionTable koszul_connection(const MetricLieAlgebra& L,
                                  const TolerancePolicy& tol = {});

CurvatureTensor curvature(const ConnectionTable& conn, const MetricLieAlgebra& L);

/// Mixed curvature blocks from the closed 2-step formulas
/// R(A,B)Z = -(j(B) j(Z)) A / 4 and R(A,B)X = -[A, j(B)X] / 4, for A,X in v
/// and B,Z in z. Largest deviation from the supplied full tensor on those slots.
double curvature_blocks_residual(const MetricLieAlgebra& L, const CurvatureTensor& R,
                                 const TolerancePolicy& tol = {});

Subspace nullity(const CurvatureTensor& R, const TolerancePolicy& tol = {});

FlatFactorReport flat_factor_analysis(const MetricLieAlgebra& L,
                                      const TolerancePolicy& tol = {});

/// RK4 integration of the left-invariant geodesic ODE <v',w> = <v,[v,w]>
/// with position reconstruction through the 2-step group product. Throws
/// StepTooLarge when the relative energy drift exceeds 1e-6.
Trajectory geodesic_integrate(const MetricLieAlgebra& L, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& v0, double t_end,
                              double step = 1e-3);

/// Relative energy drift of an integrated trajectory, per unit time.
double energy_drift_per_unit_time(const Trajectory& traj);

/// Point reached at time t by the flow of the Killing field
/// K(x) = U + [U,x]/2 + D(x) in exponential coordinates. D must be a
/// derivation of L (NotADerivation otherwise).
Eigen::VectorXd killing_flow(const MetricLieAlgebra& L, const Eigen::VectorXd& U,
                             const Eigen::MatrixXd& D, const Eigen::VectorXd& x0,
                             double t, const TolerancePolicy& tol = {});

struct OrbitSample {
  double t = 0.0;
  Eigen::VectorXd x;
  double residual = 0.0;  // geodesic ODE residual at this sample
};

/// Killing-flow orbit through the identity on [0, t_end], with the geodesic
/// ODE residual evaluated analytically at every sample.
std::vector<OrbitSample> killing_orbit_samples(const MetricLieAlgebra& L,
                                               const Eigen::VectorXd& U,
                                               const Eigen::MatrixXd& D, double t_end,
                                               double step);

/// Max residual of the geodesic ODE along the Killing-flow orbit through the
/// identity, sampled on [0, t_end] with the given step (analytic derivatives).
double killing_orbit_geodesic_residual(const MetricLieAlgebra& L,
                                       const Eigen::VectorXd& U,
                                       const Eigen::MatrixXd& D, double t_end,
                                       double step);

}  // namespace nilsym
