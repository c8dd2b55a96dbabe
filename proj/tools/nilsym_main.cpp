#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilsym/pipeline.hpp"

namespace {

using nlohmann::json;

nilsym::InputDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nilsym::SchemaError("cannot open input file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw nilsym::SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return nilsym::parse_input_document(j);
}

int cmd_validate(const std::string& path, const nilsym::AnalyzeOptions& opt) {
  const nilsym::InputDocument doc = load_document(path);
  nilsym::TolerancePolicy tol = doc.tolerance ? *doc.tolerance : opt.tol;
  json out;
  bool valid = false;
  if (doc.kind == nilsym::InputDocument::Kind::data_set) {
    const nilsym::ValidationReport rep = nilsym::validate_data_set(*doc.data, tol);
    valid = rep.valid();
    out = {{"valid", valid}, {"lorentzian", rep.lorentzian}, {"failures", rep.failures}};
  } else {
    try {
      nilsym::validate_algebra(*doc.algebra, tol);
      valid = true;
      out = {{"valid", true}};
    } catch (const nilsym::Error& e) {
      out = {{"valid", false}, {"failures", {e.what()}}};
    }
  }
  std::cout << out.dump(2) << "\n";
  return valid ? 0 : 1;
}

int cmd_analyze(const std::string& path, const nilsym::AnalyzeOptions& opt, bool pretty) {
  const nilsym::InputDocument doc = load_document(path);
  const json report = nilsym::analyze_document(doc, opt);
  if (pretty)
    std::cout << nilsym::pretty_report(report);
  else
    std::cout << report.dump(2) << "\n";
  return nilsym::report_exit_code(report);
}

int cmd_gallery(const std::string& name) {
  if (name.empty()) {
    for (const auto& n : nilsym::gallery_names()) std::cout << n << "\n";
    return 0;
  }
  const nilsym::InputDocument doc = nilsym::gallery_document(name);
  std::cout << nilsym::to_json(doc).dump(2) << "\n";
  return 0;
}

int cmd_fuzz(int count, std::uint64_t seed, int max_dim,
             const nilsym::AnalyzeOptions& opt) {
  const nilsym::FuzzResult result = nilsym::run_fuzz(count, seed, max_dim, opt);
  std::cout << result.summary.dump(2) << "\n";
  if (result.failures > 0) {
    std::cerr << result.failures << " of " << result.count
              << " instances failed; seeds are echoed in the summary\n";
    return 1;
  }
  return 0;
}

int cmd_geodesic(const std::string& path, int pair, int basis, double t_end,
                 double step, const std::string& csv_out,
                 const nilsym::AnalyzeOptions& opt) {
  const nilsym::InputDocument doc = load_document(path);
  const nilsym::GeodesicRun run =
      nilsym::run_geodesic(doc, pair, basis, t_end, step, opt);
  if (csv_out.empty() || csv_out == "-") {
    std::cout << run.csv;
  } else {
    std::ofstream out(csv_out);
    if (!out) throw nilsym::SchemaError("cannot open CSV output '" + csv_out + "'");
    out << run.csv;
  }
  std::cerr << "max geodesic residual: " << run.max_residual
            << (run.is_transvection ? " (transvection)" : " (not a transvection)")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilsym: Lorentzian geometry of 2-step nilpotent metric Lie algebras"};
  app.require_subcommand(1);

  nilsym::AnalyzeOptions opt;
  std::string path, name, csv_out;
  bool pretty = false;
  int count = 10, max_dim = 16, pair = 0, basis = -1;
  double t_end = 1.0, step = 1e-3;

  auto* validate = app.add_subcommand("validate", "Validate an input document");
  validate->add_option("path", path, "input JSON file")->required();

  auto* analyze = app.add_subcommand("analyze", "Run the full analysis pipeline");
  analyze->add_option("path", path, "input JSON file")->required();
  analyze->add_option("--seed", opt.seed, "seed for randomized stages");
  analyze->add_option("--tol", opt.tol.abs_tol, "absolute tolerance override");
  analyze->add_flag("--pretty", pretty, "human-readable text instead of JSON");

  auto* gallery = app.add_subcommand("gallery", "List or emit built-in examples");
  gallery->add_option("name", name, "example name (omit to list)");

  auto* fuzz = app.add_subcommand("fuzz", "Randomized theorem verification");
  fuzz->add_option("--count", count, "number of random instances");
  fuzz->add_option("--seed", opt.seed, "master seed");
  fuzz->add_option("--max-dim", max_dim, "total dimension cap per instance");
  fuzz->add_flag("--inject-bug", opt.inject_flip_j_sign,
                 "testing hook: flip a sign in the j-map solve");

  auto* geodesic = app.add_subcommand("geodesic", "Export a Killing-flow orbit as CSV");
  geodesic->add_option("path", path, "input JSON file")->required();
  geodesic->add_option("--pair", pair, "transvection index from the analysis");
  geodesic->add_option("--basis", basis,
                       "use the bare pair (e_i, 0) instead of a transvection");
  geodesic->add_option("--t-end", t_end, "integration end time");
  geodesic->add_option("--step", step, "sample step");
  geodesic->add_option("--csv", csv_out, "CSV output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(path, opt);
    if (analyze->parsed()) return cmd_analyze(path, opt, pretty);
    if (gallery->parsed()) return cmd_gallery(name);
    if (fuzz->parsed()) {
      opt.seed = fuzz->count("--seed") ? opt.seed : 0;
      return cmd_fuzz(count, opt.seed, max_dim, opt);
    }
    if (geodesic->parsed())
      return cmd_geodesic(path, geodesic->count("--basis") ? -1 : pair,
                          geodesic->count("--basis") ? basis : -1, t_end, step,
                          csv_out, opt);
  } catch (const nilsym::SchemaError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nilsym::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
