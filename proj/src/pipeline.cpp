#include "nilsym/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "nilsym/geometry.hpp"
#include "nilsym/isotropy.hpp"
#include "nilsym/repdecomp.hpp"
#include "nilsym/symmetry.hpp"

namespace nilsym {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json signature_to_json(const SignatureReport& s) {
  return {{"positive", s.positive},
          {"negative", s.negative},
          {"null", s.null},
          {"class", to_string(s.cls)}};
}

json validation_to_json(const ValidationReport& r) {
  return {{"valid", r.valid()},
          {"lorentzian", r.lorentzian},
          {"ad_invariant", r.ad_invariant},
          {"homomorphism", r.homomorphism},
          {"faithful", r.faithful},
          {"no_trivial_subrep", r.no_trivial_subrep},
          {"skew_adjoint", r.skew_adjoint},
          {"g_structure_ok", r.g_structure_ok},
          {"g_metric_nondegenerate", r.g_metric_nondegenerate},
          {"v_metric_nondegenerate", r.v_metric_nondegenerate},
          {"dims_within_limit", r.dims_within_limit},
          {"g_signature", signature_to_json(r.g_signature)},
          {"v_signature", signature_to_json(r.v_signature)},
          {"total_signature", signature_to_json(r.total_signature)},
          {"max_residual", r.max_residual},
          {"failures", r.failures}};
}

double koszul_vs_2step(const MetricLieAlgebra& L, const TolerancePolicy& tol) {
  const ConnectionTable a = levi_civita_2step(L, tol);
  const ConnectionTable b = koszul_connection(L, tol);
  double r = 0.0;
  for (int i = 0; i < a.dim(); ++i) r = std::max(r, (a.gamma[i] - b.gamma[i]).norm());
  return r;
}

json flat_factor_to_json(const FlatFactorReport& f) {
  json j = {{"verdict", to_string(f.verdict)},
            {"ker_j_dim", f.ker_j.dim()},
            {"nullity_dim", f.nullity.dim()},
            {"commutator_nondegenerate", f.commutator_nondegenerate},
            {"nullity_equals_ker_j_angle", max_principal_angle_sin(f.ker_j, f.nullity)}};
  if (f.verdict == FlatVerdict::flat_factor) j["flat_dim"] = f.flat_dim;
  return j;
}

json natred_to_json(const NatRedCertificate& c) {
  json j = {{"verdict", c.verdict},
            {"is_subalgebra", c.is_subalgebra},
            {"caveat_j_not_injective", c.caveat_j_not_injective},
            {"max_residual", c.max_residual}};
  if (c.tau) {
    j["tau_relation_residual"] = c.tau->relation_residual;
    j["tau_skew_residual"] = c.tau->skew_residual;
  }
  return j;
}

json decomposition_to_json(const InvariantDecomposition& dec) {
  json blocks = json::array();
  for (const auto& b : dec.blocks) {
    json bj = {{"kind", to_string(b.kind)},
               {"dim", b.subspace.dim()},
               {"commutant_dim", b.commutant_dim},
               {"has_J", b.J.has_value()}};
    if (b.lambda) {
      json lam = json::array();
      for (int i = 0; i < b.lambda->size(); ++i) lam.push_back((*b.lambda)(i));
      bj["lambda"] = lam;
    }
    blocks.push_back(bj);
  }
  return {{"blocks", blocks}, {"u0_dim", dec.u0.dim()}, {"v0_count", dec.v0_count()}};
}

// Runs one stage, converting typed errors into report entries.
template <class F>
bool stage(json& report, const char* name, F&& f) {
  try {
    f();
    return true;
  } catch (const TheoremMismatch& e) {
    report["theorem_mismatch"] = true;
    report["errors"].push_back({{"stage", name}, {"error", e.what()}});
  } catch (const Error& e) {
    report["errors"].push_back({{"stage", name}, {"error", e.what()}});
  }
  return false;
}

void analyze_data_set(const DataSet& d, const AnalyzeOptions& opt, json& report) {
  const TolerancePolicy& tol = opt.tol;
  const ValidationReport vrep = validate_data_set(d, tol);
  report["validation"] = validation_to_json(vrep);
  if (!vrep.valid()) {
    report["errors"].push_back(
        {{"stage", "validation"}, {"error", "data set failed validation"}});
    return;
  }

  MetricLieAlgebra n;
  stage(report, "build", [&] {
    n = build_nilpotent(d, tol);
    const JMap jm = opt.inject_flip_j_sign
                        ? detail::j_map_with_sign(n, tol, -1.0)
                        : j_map(n, tol);
    double jpi = 0.0;
    for (int a = 0; a < d.pi.g_dim; ++a)
      jpi = std::max(jpi, (jm.matrices[a] - d.pi.matrices[a]).norm());
    report["built"] = {{"dim", n.dim()},
                       {"center_dim", center(n, tol).dim()},
                       {"two_step", is_two_step_nilpotent(n, tol)},
                       {"j_equals_pi_residual", jpi}};
  });
  if (!report.contains("built")) return;

  stage(report, "flat_factor", [&] {
    report["flat_factor"] = flat_factor_to_json(flat_factor_analysis(n, tol));
  });
  stage(report, "connection", [&] {
    const double kvs = koszul_vs_2step(n, tol);
    const CurvatureTensor R = curvature(levi_civita_2step(n, tol), n);
    report["connection"] = {{"koszul_vs_2step", kvs},
                            {"curvature_blocks_residual",
                             curvature_blocks_residual(n, R, tol)}};
  });
  stage(report, "natred", [&] {
    report["natred"] = natred_to_json(is_naturally_reductive(n, tol));
  });
  stage(report, "decomposition", [&] {
    Rng rng(opt.seed);
    report["decomposition"] = decomposition_to_json(invariant_decomposition(d, rng, tol));
  });
  stage(report, "isotropy", [&] {
    const IsotropySplit split = isotropy_split(d, tol);
    report["isotropy"] = {{"dim_total", split.total_dim},
                          {"dim_gbar", static_cast<int>(split.gbar_part.size())},
                          {"dim_u", static_cast<int>(split.u_part.size())},
                          {"span_residual", split.span_residual}};
  });
  stage(report, "symmetry", [&] {
    if (vrep.lorentzian) {
      const MainTheoremReport mt = verify_main_theorem(d, tol);
      const std::vector<Eigen::MatrixXd> haut = skew_derivations(n, tol);
      const TransvectionSpace ts = transvection_space(n, haut, tol);
      const SymmetricIsotropy si = symmetric_isotropy(n, ts, tol);
      const JMap jm = j_map(n, tol);
      double central_residual = 0.0;
      const CompactSplit split = compact_split(d.g, tol);
      for (int k = 0; k < split.c.dim(); ++k) {
        const KillingPair pair = transvection_for_central(d, split.c.basis.col(k), tol);
        central_residual = std::max(
            central_residual, nabla_killing_at_e(n, jm, pair.u, pair.d).norm());
      }
      report["symmetry"] = {
          {"index_of_symmetry", mt.index},
          {"s_e_signature", signature_to_json(mt.s_e_signature)},
          {"angle_se_f0", mt.angle_se_f0},
          {"angle_se_c", mt.angle_se_c},
          {"s_e_nondegenerate", mt.s_e_nondegenerate},
          {"central_transvection_residual", central_residual},
          {"symmetric_isotropy_dim", static_cast<int>(si.basis.size())},
          {"symmetric_isotropy_n_residual", si.n_component_residual},
          {"verdict", true}};
    } else {
      const std::vector<Eigen::MatrixXd> haut = skew_derivations(n, tol);
      const TransvectionSpace ts = transvection_space(n, haut, tol);
      const Subspace f0 = fixed_point_subspace(n, haut, tol);
      report["symmetry"] = {
          {"index_of_symmetry", ts.index},
          {"s_e_signature", signature_to_json(ts.s_e_signature)},
          {"angle_se_f0", max_principal_angle_sin(ts.s_e, f0)},
          {"note", "input is not Lorentzian; headline theorem not asserted"}};
    }
  });
}

void analyze_lie_algebra(const MetricLieAlgebra& L, const AnalyzeOptions& opt,
                         json& report) {
  const TolerancePolicy& tol = opt.tol;
  try {
    validate_algebra(L, tol);
  } catch (const Error& e) {
    report["errors"].push_back({{"stage", "validation"}, {"error", e.what()}});
    report["validation"] = {{"valid", false}};
    return;
  }
  const Subspace z = center(L, tol);
  const bool two_step = is_two_step_nilpotent(L, tol);
  bool center_ok = false;
  try {
    center_ok = z.dim() > 0 && signature(restrict_form(L.metric, z), tol).null == 0;
  } catch (const Error&) {
  }
  report["validation"] = {
      {"valid", true},
      {"antisymmetry_residual", L.structure.antisymmetry_residual()},
      {"jacobi_residual", L.structure.jacobi_residual()},
      {"metric_signature", signature_to_json(signature(L.metric, tol))},
      {"two_step", two_step},
      {"abelian", is_abelian(L, tol)},
      {"center_dim", z.dim()},
      {"center_nondegenerate", center_ok}};
  if (!two_step || !center_ok) {
    report["errors"].push_back(
        {{"stage", "structure"},
         {"error", "analysis requires a 2-step algebra with non-degenerate center"}});
    return;
  }

  stage(report, "flat_factor", [&] {
    report["flat_factor"] = flat_factor_to_json(flat_factor_analysis(L, tol));
  });
  stage(report, "connection", [&] {
    const double kvs = koszul_vs_2step(L, tol);
    const CurvatureTensor R = curvature(levi_civita_2step(L, tol), L);
    report["connection"] = {{"koszul_vs_2step", kvs},
                            {"curvature_blocks_residual",
                             curvature_blocks_residual(L, R, tol)}};
  });
  stage(report, "natred", [&] {
    report["natred"] = natred_to_json(is_naturally_reductive(L, tol));
  });
  std::vector<Eigen::MatrixXd> haut;
  stage(report, "isotropy", [&] {
    haut = skew_derivations(L, tol);
    report["isotropy"] = {{"dim_total", static_cast<int>(haut.size())}};
  });
  stage(report, "symmetry", [&] {
    const TransvectionSpace ts = transvection_space(L, haut, tol);
    const Subspace f0 = fixed_point_subspace(L, haut, tol);
    report["symmetry"] = {{"index_of_symmetry", ts.index},
                          {"s_e_signature", signature_to_json(ts.s_e_signature)},
                          {"angle_se_f0", max_principal_angle_sin(ts.s_e, f0)},
                          {"s_e_dim", ts.s_e.dim()},
                          {"f0_dim", f0.dim()}};
  });
  stage(report, "recovery", [&] {
    try {
      const RecoveredDataSet rec = recover_data_set(L, tol);
      const ValidationReport vrep = validate_data_set(rec.data, tol);
      json rj = {{"recovered", true},
                 {"g_dim", rec.data.g.dim()},
                 {"lorentzian", vrep.lorentzian}};
      if (vrep.valid() && vrep.lorentzian) {
        const MainTheoremReport mt = verify_main_theorem(rec.data, tol);
        rj["index_of_symmetry"] = mt.index;
        rj["main_theorem_verdict"] = true;
      }
      report["recovery"] = rj;
    } catch (const JNotInjective& e) {
      report["recovery"] = {{"recovered", false}, {"reason", e.what()}};
    } catch (const NotNaturallyReductive& e) {
      report["recovery"] = {{"recovered", false}, {"reason", e.what()}};
    }
  });
}

}  // namespace

json analyze_document(const InputDocument& doc, const AnalyzeOptions& opt) {
  AnalyzeOptions local = opt;
  if (doc.tolerance) local.tol = *doc.tolerance;

  json report;
  report["tool_version"] = kToolVersion;
  report["seed"] = local.seed;
  report["tolerance"] = {{"abs_tol", local.tol.abs_tol},
                         {"rel_tol", local.tol.rel_tol},
                         {"rank_tol_factor", local.tol.rank_tol_factor}};
  report["assumes_full_isotropy_is_haut"] = true;
  report["input"] = to_json(doc);
  report["errors"] = json::array();

  if (doc.kind == InputDocument::Kind::data_set)
    analyze_data_set(*doc.data, local, report);
  else
    analyze_lie_algebra(*doc.algebra, local, report);
  return report;
}

int report_exit_code(const json& report) {
  if (report.value("theorem_mismatch", false)) return 1;
  if (!report["errors"].empty()) return 1;
  if (report.contains("validation") && !report["validation"].value("valid", false))
    return 1;
  return 0;
}

std::string pretty_report(const json& report) {
  std::ostringstream oss;
  std::function<void(const json&, int)> walk = [&](const json& j, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) {
        if (v.is_object() || v.is_array()) {
          oss << pad << k << ":\n";
          walk(v, depth + 1);
        } else {
          oss << pad << k << ": " << v.dump() << "\n";
        }
      }
    } else if (j.is_array()) {
      int idx = 0;
      for (const auto& v : j) {
        if (v.is_object() || v.is_array()) {
          oss << pad << "- [" << idx << "]\n";
          walk(v, depth + 1);
        } else {
          oss << pad << "- " << v.dump() << "\n";
        }
        ++idx;
      }
    }
  };
  walk(report, 0);
  return oss.str();
}

namespace {

// Theorem-level invariant suite shared by fuzz; returns failed invariants.
std::vector<std::string> invariant_suite(const DataSet& d, Rng& rng,
                                         const AnalyzeOptions& opt) {
  const TolerancePolicy& tol = opt.tol;
  std::vector<std::string> fails;

  const ValidationReport vrep = validate_data_set(d, tol);
  if (!vrep.valid() || !vrep.lorentzian) {
    fails.push_back("validation");
    return fails;
  }
  const MetricLieAlgebra n = build_nilpotent(d, tol);
  const JMap jm = opt.inject_flip_j_sign ? detail::j_map_with_sign(n, tol, -1.0)
                                         : j_map(n, tol);

  double jpi = 0.0;
  for (int a = 0; a < d.pi.g_dim; ++a)
    jpi = std::max(jpi, (jm.matrices[a] - d.pi.matrices[a]).lpNorm<Eigen::Infinity>());
  if (jpi > 1e-10) fails.push_back("j_equals_pi");

  if (!subspaces_equal(center(n, tol), jm.center))
    fails.push_back("center_equals_g");

  try {
    const NatRedCertificate cert = is_naturally_reductive(n, tol);
    if (!cert.verdict || cert.max_residual > 1e-9) fails.push_back("natred");
  } catch (const Error&) {
    fails.push_back("natred");
  }

  if (koszul_vs_2step(n, tol) > 1e-10) fails.push_back("koszul_vs_2step");
  const CurvatureTensor R = curvature(levi_civita_2step(n, tol), n);
  if (curvature_blocks_residual(n, R, tol) > 1e-10) fails.push_back("curvature_blocks");
  if (!subspaces_equal(nullity(R, tol), jm.ker)) fails.push_back("nullity_equals_ker_j");

  try {
    isotropy_split(d, tol);
  } catch (const Error&) {
    fails.push_back("isotropy_split");
  }
  try {
    verify_main_theorem(d, tol);
  } catch (const Error&) {
    fails.push_back("main_theorem");
  }

  try {
    const InvariantDecomposition dec = invariant_decomposition(d, rng, tol);
    const SignatureReport vsig = signature(d.v_metric, tol);
    const int expect_v0 = vsig.cls == SignatureClass::lorentzian ? 1 : 0;
    if (dec.v0_count() != expect_v0) fails.push_back("decomposition_v0_count");
    double res = 0.0;
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
      const Eigen::MatrixXd& B = dec.blocks[i].subspace.basis;
      const Eigen::MatrixXd P =
          B * (B.transpose() * d.v_metric.gram * B).partialPivLu().solve(
                  B.transpose() * d.v_metric.gram);
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(P.rows(), P.cols());
      for (const auto& Pi : d.pi.matrices)
        res = std::max(res, ((id - P) * Pi * P).norm());
      for (std::size_t k = i + 1; k < dec.blocks.size(); ++k)
        res = std::max(res, (B.transpose() * d.v_metric.gram *
                             dec.blocks[k].subspace.basis)
                                .norm());
    }
    if (res > 1e-9) fails.push_back("decomposition_residuals");
  } catch (const Error&) {
    fails.push_back("decomposition");
  }

  try {
    const CompactSplit split = compact_split(d.g, tol);
    double res = 0.0;
    for (int k = 0; k < split.c.dim(); ++k) {
      const KillingPair pair = transvection_for_central(d, split.c.basis.col(k), tol);
      res = std::max(res, nabla_killing_at_e(n, jm, pair.u, pair.d).norm());
    }
    if (res > 1e-10) fails.push_back("central_transvection");
  } catch (const Error&) {
    fails.push_back("central_transvection");
  }

  try {
    const RecoveredDataSet rec = recover_data_set(n, tol);
    const MetricLieAlgebra rebuilt = build_nilpotent(rec.data, tol);
    double diff = 0.0;
    for (int k = 0; k < n.dim(); ++k)
      diff = std::max(diff, (rebuilt.structure.comp[k] - n.structure.comp[k]).norm());
    if (diff > 1e-9) fails.push_back("recover_roundtrip");
  } catch (const Error&) {
    fails.push_back("recover_roundtrip");
  }

  return fails;
}

}  // namespace

FuzzResult run_fuzz(int count, std::uint64_t seed, int max_dim,
                    const AnalyzeOptions& opt) {
  Rng master(seed);
  FuzzResult result;
  result.count = count;
  json failing = json::array();
  for (int i = 0; i < count; ++i) {
    const std::uint64_t instance_seed = master.next_u64();
    Rng rng(instance_seed);
    std::vector<std::string> fails;
    try {
      const DataSet d = random_lorentzian_data_set(rng, max_dim, opt.tol);
      fails = invariant_suite(d, rng, opt);
    } catch (const Error& e) {
      fails.push_back(std::string("generator: ") + e.what());
    }
    if (!fails.empty()) {
      ++result.failures;
      failing.push_back(
          {{"instance", i}, {"seed", instance_seed}, {"failed", fails}});
    }
  }
  result.summary = {{"count", count},
                    {"seed", seed},
                    {"max_dim", max_dim},
                    {"failures", result.failures},
                    {"failing", failing}};
  return result;
}

GeodesicRun run_geodesic(const InputDocument& doc, int pair_index, int basis_index,
                         double t_end, double step, const AnalyzeOptions& opt) {
  AnalyzeOptions local = opt;
  if (doc.tolerance) local.tol = *doc.tolerance;
  const TolerancePolicy& tol = local.tol;

  MetricLieAlgebra L;
  if (doc.kind == InputDocument::Kind::data_set)
    L = build_nilpotent(*doc.data, tol);
  else
    L = *doc.algebra;
  validate_algebra(L, tol);

  Eigen::VectorXd U;
  Eigen::MatrixXd D;
  GeodesicRun run;
  if (basis_index >= 0) {
    if (basis_index >= L.dim())
      throw InvalidInput("basis index out of range");
    U = Eigen::VectorXd::Unit(L.dim(), basis_index);
    D = Eigen::MatrixXd::Zero(L.dim(), L.dim());
  } else {
    const std::vector<Eigen::MatrixXd> haut = skew_derivations(L, tol);
    const TransvectionSpace ts = transvection_space(L, haut, tol);
    if (pair_index < 0 || pair_index >= static_cast<int>(ts.basis.size()))
      throw InvalidInput("transvection pair index out of range (space has dim " +
                         std::to_string(ts.basis.size()) + ")");
    U = ts.basis[pair_index].u;
    D = ts.basis[pair_index].d;
  }
  const JMap jm = j_map(L, tol);
  run.is_transvection = nabla_killing_at_e(L, jm, U, D).norm() < 1e-8;

  const auto samples = killing_orbit_samples(L, U, D, t_end, step);
  std::ostringstream csv;
  csv << "t";
  for (int i = 1; i <= L.dim(); ++i) csv << ",x" << i;
  csv << ",residual\n";
  for (const auto& s : samples) {
    run.max_residual = std::max(run.max_residual, s.residual);
    csv << fmt17(s.t);
    for (int i = 0; i < L.dim(); ++i) csv << "," << fmt17(s.x(i));
    csv << "," << fmt17(s.residual) << "\n";
  }
  run.csv = csv.str();
  return run;
}

}  // namespace nilsym
