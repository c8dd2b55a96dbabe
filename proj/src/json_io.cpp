#include "nilsym/json_io.hpp"

#include <cmath>

namespace nilsym {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

int parse_dim(const json& j) {
  const json& d = require_field(j, "dim");
  if (!d.is_number_integer() || d.get<int>() <= 0)
    throw SchemaError("'dim' must be a positive integer");
  return d.get<int>();
}

Eigen::MatrixXd parse_gram(const json& j, int dim) {
  const json& g = require_field(j, "gram");
  if (!g.is_array() || static_cast<int>(g.size()) != dim * dim)
    throw SchemaError("'gram' must be a row-major array of dim*dim numbers");
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const json& v = g[r * dim + c];
      if (!v.is_number()) throw SchemaError("'gram' entries must be numbers");
      m(r, c) = v.get<double>();
    }
  return m;
}

StructureTensor parse_structure(const json& j, int dim) {
  StructureTensor t = StructureTensor::zero(dim);
  const auto it = j.find("structure");
  if (it == j.end()) return t;  // abelian by default
  if (!it->is_array()) throw SchemaError("'structure' must be an array of entries");
  for (const json& e : *it) {
    if (!e.is_object()) throw SchemaError("structure entries must be objects");
    const int i = require_field(e, "i").get<int>();
    const int jj = require_field(e, "j").get<int>();
    const int k = require_field(e, "k").get<int>();
    const double v = require_field(e, "value").get<double>();
    if (i < 1 || i > dim || jj < 1 || jj > dim || k < 1 || k > dim)
      throw SchemaError("structure entry index out of range (entries are 1-indexed)");
    if (i == jj && v != 0.0)
      throw SchemaError("structure entry with i == j must vanish");
    t.set(i - 1, jj - 1, k - 1, v);
  }
  return t;
}

MetricLieAlgebra parse_algebra(const json& j) {
  const int dim = parse_dim(j);
  MetricLieAlgebra L;
  L.metric = BilinearForm(parse_gram(j, dim));
  L.structure = parse_structure(j, dim);
  return L;
}

json gram_to_json(const Eigen::MatrixXd& g) {
  json a = json::array();
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) a.push_back(g(r, c));
  return a;
}

json structure_to_json(const StructureTensor& t) {
  json a = json::array();
  for (int k = 0; k < t.dim; ++k)
    for (int i = 0; i < t.dim; ++i)
      for (int j = i + 1; j < t.dim; ++j)
        if (t.comp[k](i, j) != 0.0)
          a.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1},
                       {"value", t.comp[k](i, j)}});
  return a;
}

}  // namespace

InputDocument parse_input_document(const json& j) {
  if (!j.is_object()) throw SchemaError("input document must be a JSON object");
  InputDocument doc;
  const std::string kind = require_field(j, "kind").get<std::string>();
  if (const auto it = j.find("name"); it != j.end()) doc.name = it->get<std::string>();
  if (const auto it = j.find("tolerance"); it != j.end()) {
    TolerancePolicy tol;
    if (const auto f = it->find("abs_tol"); f != it->end()) tol.abs_tol = f->get<double>();
    if (const auto f = it->find("rel_tol"); f != it->end()) tol.rel_tol = f->get<double>();
    if (const auto f = it->find("rank_tol_factor"); f != it->end())
      tol.rank_tol_factor = f->get<double>();
    try {
      tol.validate();
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what());
    }
    doc.tolerance = tol;
  }

  if (kind == "lie_algebra") {
    doc.kind = InputDocument::Kind::lie_algebra;
    doc.algebra = parse_algebra(require_field(j, "lie_algebra"));
  } else if (kind == "data_set") {
    doc.kind = InputDocument::Kind::data_set;
    const json& ds = require_field(j, "data_set");
    DataSet d;
    d.g = parse_algebra(require_field(ds, "g"));
    const json& v = require_field(ds, "v");
    const int vdim = parse_dim(v);
    d.v_metric = BilinearForm(parse_gram(v, vdim));
    const json& pi = require_field(ds, "pi");
    if (!pi.is_array() || static_cast<int>(pi.size()) != d.g.dim())
      throw SchemaError("'pi' must hold one matrix per g basis vector");
    d.pi.g_dim = d.g.dim();
    d.pi.v_dim = vdim;
    for (const json& mj : pi) {
      if (!mj.is_array() || static_cast<int>(mj.size()) != vdim * vdim)
        throw SchemaError("each pi matrix must be a row-major array of v.dim^2 numbers");
      Eigen::MatrixXd m(vdim, vdim);
      for (int r = 0; r < vdim; ++r)
        for (int c = 0; c < vdim; ++c) m(r, c) = mj[r * vdim + c].get<double>();
      d.pi.matrices.push_back(std::move(m));
    }
    d.name = doc.name;
    doc.data = std::move(d);
  } else {
    throw SchemaError("'kind' must be 'lie_algebra' or 'data_set'");
  }
  return doc;
}

json algebra_to_json(const MetricLieAlgebra& L) {
  return {{"dim", L.dim()},
          {"gram", gram_to_json(L.metric.gram)},
          {"structure", structure_to_json(L.structure)}};
}

json dataset_to_json(const DataSet& d) {
  json pi = json::array();
  for (const auto& m : d.pi.matrices) pi.push_back(gram_to_json(m));
  return {{"g", algebra_to_json(d.g)},
          {"v", {{"dim", d.v_metric.dim()}, {"gram", gram_to_json(d.v_metric.gram)}}},
          {"pi", pi}};
}

json to_json(const InputDocument& doc) {
  json j;
  if (!doc.name.empty()) j["name"] = doc.name;
  if (doc.tolerance) {
    j["tolerance"] = {{"abs_tol", doc.tolerance->abs_tol},
                      {"rel_tol", doc.tolerance->rel_tol},
                      {"rank_tol_factor", doc.tolerance->rank_tol_factor}};
  }
  if (doc.kind == InputDocument::Kind::lie_algebra) {
    j["kind"] = "lie_algebra";
    j["lie_algebra"] = algebra_to_json(*doc.algebra);
  } else {
    j["kind"] = "data_set";
    j["data_set"] = dataset_to_json(*doc.data);
  }
  return j;
}

std::vector<std::string> gallery_names() {
  return {"heis3-timelike", "boost3",         "su2-mixed",
          "c2-rot",         "heis3-flatline", "heis3-nullline"};
}

InputDocument gallery_document(const std::string& name) {
  InputDocument doc;
  doc.name = name;

  if (name == "heis3-timelike") {
    // g = R·Z with <Z,Z> = -1; v = Euclidean plane; pi(Z) = rotation generator.
    DataSet d;
    d.g = abelian_algebra(BilinearForm(-Eigen::MatrixXd::Identity(1, 1)));
    d.v_metric = BilinearForm::euclidean(2);
    d.pi = {1, 2, {rotation_generator2()}};
    d.name = name;
    doc.kind = InputDocument::Kind::data_set;
    doc.data = std::move(d);
    return doc;
  }
  if (name == "boost3") {
    DataSet d;
    d.g = abelian_algebra(BilinearForm(Eigen::MatrixXd::Identity(1, 1)));
    d.v_metric = BilinearForm::minkowski(2);
    d.pi = {1, 2, {boost_generator2()}};
    d.name = name;
    doc.kind = InputDocument::Kind::data_set;
    doc.data = std::move(d);
    return doc;
  }
  if (name == "su2-mixed") {
    // g = su(2) ⊕ R·Z0, metric (-Killing/8) ⊕ [1];
    // v = realified C^2 ⊕ R^{1,1}; pi(Z0) = i ⊕ boost.
    DataSet d;
    d.g = direct_sum(su2_algebra(0.25),
                     abelian_algebra(BilinearForm(Eigen::MatrixXd::Identity(1, 1))));
    Eigen::MatrixXd gv = Eigen::MatrixXd::Identity(6, 6);
    gv(4, 4) = -1.0;
    d.v_metric = BilinearForm(gv);
    const RealifiedSu2Rep rep = su2_standard_realified();
    d.pi.g_dim = 4;
    d.pi.v_dim = 6;
    d.pi.matrices.assign(4, Eigen::MatrixXd::Zero(6, 6));
    for (int k = 0; k < 3; ++k)
      d.pi.matrices[k].topLeftCorner(4, 4) = rep.generators[k];
    d.pi.matrices[3].topLeftCorner(4, 4) = rep.complex_structure;
    d.pi.matrices[3].bottomRightCorner(2, 2) = boost_generator2();
    d.name = name;
    doc.kind = InputDocument::Kind::data_set;
    doc.data = std::move(d);
    return doc;
  }
  if (name == "c2-rot") {
    // Two commuting rotation planes; the center of g is all of g (dim 2).
    DataSet d;
    Eigen::MatrixXd gg = Eigen::MatrixXd::Identity(2, 2);
    gg(0, 0) = -1.0;
    d.g = abelian_algebra(BilinearForm(gg));
    d.v_metric = BilinearForm::euclidean(4);
    d.pi.g_dim = 2;
    d.pi.v_dim = 4;
    d.pi.matrices.assign(2, Eigen::MatrixXd::Zero(4, 4));
    d.pi.matrices[0].topLeftCorner(2, 2) = rotation_generator2();
    d.pi.matrices[1].bottomRightCorner(2, 2) = rotation_generator2();
    d.name = name;
    doc.kind = InputDocument::Kind::data_set;
    doc.data = std::move(d);
    return doc;
  }
  if (name == "heis3-flatline" || name == "heis3-nullline") {
    // Heisenberg algebra with an extra central line: basis (Z, W, X1, X2),
    // [X1, X2] = Z. Euclidean metric for the flat factor, a lightlike Z for
    // the degenerate-V0 variant.
    MetricLieAlgebra L;
    L.structure = StructureTensor::zero(4);
    L.structure.set(2, 3, 0, 1.0);
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
    if (name == "heis3-nullline") {
      g(0, 0) = 0.0;
      g(1, 1) = 0.0;
      g(0, 1) = 1.0;
      g(1, 0) = 1.0;
    }
    L.metric = BilinearForm(g);
    doc.kind = InputDocument::Kind::lie_algebra;
    doc.algebra = std::move(L);
    return doc;
  }
  throw SchemaError("unknown gallery name '" + name + "'");
}

}  // namespace nilsym
