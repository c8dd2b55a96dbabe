#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilsym/dataset.hpp"

namespace nilsym {

/// Parsed form of the JSON input schema. Either a bare metric Lie algebra or
/// a data set (g, v, pi); structure-constant entries are 1-indexed.
struct InputDocument {
  enum class Kind { lie_algebra, data_set };
  Kind kind = Kind::lie_algebra;
  std::string name;
  std::optional<TolerancePolicy> tolerance;
  std::optional<MetricLieAlgebra> algebra;  // kind == lie_algebra
  std::optional<DataSet> data;              // kind == data_set
};

/// Throws SchemaError with a description on any malformed input.
InputDocument parse_input_document(const nlohmann::json& j);

nlohmann::json to_json(const InputDocument& doc);

nlohmann::json algebra_to_json(const MetricLieAlgebra& L);
nlohmann::json dataset_to_json(const DataSet& d);

// -- gallery -----------------------------------------------------------------

std::vector<std::string> gallery_names();

/// Built-in example by name; throws SchemaError for unknown names.
InputDocument gallery_document(const std::string& name);

}  // namespace nilsym
