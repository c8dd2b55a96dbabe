#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nilsym/json_io.hpp"

namespace nilsym {

inline constexpr const char* kToolVersion = "0.1.0";

struct AnalyzeOptions {
  std::uint64_t seed = 0;
  TolerancePolicy tol = TolerancePolicy::from_env();
  bool inject_flip_j_sign = false;  // fuzz mutation hook
};

/// Full analysis pipeline. Never throws on schema-valid input: per-stage
/// errors are embedded in the report.
nlohmann::json analyze_document(const InputDocument& doc, const AnalyzeOptions& opt);

/// Exit code the CLI should use for a report: 0 ok, 1 mathematical failure.
int report_exit_code(const nlohmann::json& report);

/// Human-readable rendering of a report.
std::string pretty_report(const nlohmann::json& report);

struct FuzzResult {
  int count = 0;
  int failures = 0;
  nlohmann::json summary;
};

/// Generate `count` random Lorentzian data sets from `seed` and assert every
/// theorem-level invariant on each.
FuzzResult run_fuzz(int count, std::uint64_t seed, int max_dim,
                    const AnalyzeOptions& opt);

struct GeodesicRun {
  std::string csv;
  double max_residual = 0.0;
  bool is_transvection = false;
};

/// Killing-flow orbit of a transvection (or of the bare pair (e_basis, 0)
/// when basis_index >= 0), with the geodesic ODE residual column.
GeodesicRun run_geodesic(const InputDocument& doc, int pair_index, int basis_index,
                         double t_end, double step, const AnalyzeOptions& opt);

}  // namespace nilsym
