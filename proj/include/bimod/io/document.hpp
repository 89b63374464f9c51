#pragma once

// JSON input documents: a field, named algebras, ring maps and bimodules,
// and a task list. Every object is validated when the document is loaded.
//
//   {
//     "field": "Q" | "F_p",
//     "algebras":  { name: {"dim", "mult", "unit", "basis"?} },
//     "ring_maps": { name: {"source", "target", "matrix"} | {"unit": algebra} | {"identity": algebra} },
//     "bimodules": { name: {"left", "right", "dim", "left_action", "right_action"}
//                        | {"regular": algebra, "left_map"?, "right_map"?}
//                        | {"dual": m} | {"kernel_of_ev": m} | {"tensor": [x, y]}
//                        | {"direct_sum": [x, y]} | {"change_basis": x, "matrix"} | {"left_module": x} },
//     "tasks": [ {"op", "args", "nmax"?, "depth"?, "mode"?, "expect"?} ]
//   }
//
// Scalars are strings ("p/q") or integers. An algebra named "k" (the ground
// field) is always available.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bimod/algebra.hpp"
#include "bimod/bimodule.hpp"
#include "bimod/error.hpp"
#include "bimod/field.hpp"
#include "bimod/matrix.hpp"

namespace bimod::io {

using json = nlohmann::ordered_json;

// -------------------------------------------------------------- scalars

inline json entry_json(const Rationals& k, const mpq_class& x) { return k.format(x); }
inline json entry_json(const PrimeField&, const Residue& x) { return x.value; }

template <class K>
typename K::Element parse_entry(const K& k, const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return k.parse(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return k.parse(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return k.parse(std::to_string(j.get<unsigned long long>()));
  throw ParseError(path + ": expected an exact scalar (string or integer)");
}

template <class K>
json matrix_json(const Matrix<K>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(entry_json(m.field(), m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// A column vector as a flat array.
template <class K>
json vector_json(const Matrix<K>& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.rows() * v.cols(); ++i) a.push_back(entry_json(v.field(), v[i]));
  return a;
}

inline void expect_array(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  if (j.size() != n)
    throw ParseError(path + ": expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
}

template <class K>
Matrix<K> parse_matrix(const K& k, const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  expect_array(j, rows, path);
  Matrix<K> m(k, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    auto rp = path + "/" + std::to_string(i);
    expect_array(j[i], cols, rp);
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = parse_entry(k, j[i][c], rp + "/" + std::to_string(c));
  }
  return m;
}

template <class K>
Matrix<K> parse_vector(const K& k, const json& j, std::size_t n, const std::string& path) {
  expect_array(j, n, path);
  Matrix<K> v(k, n, 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = parse_entry(k, j[i], path + "/" + std::to_string(i));
  return v;
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing \"" + key + "\"");
  return *it;
}

inline std::string require_string(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "/" + key + ": expected a string");
  return v.get<std::string>();
}

inline std::size_t require_count(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ParseError(path + "/" + key + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

/// Field named in a document: "Q" or "F_p" with p prime.
struct FieldSpec {
  bool rational = true;
  std::uint64_t modulus = 0;
};

inline FieldSpec parse_field(const json& doc) {
  auto name = require_string(doc, "field", "");
  if (name == "Q") return {};
  if (name.rfind("F_", 0) == 0 && name.size() > 2) {
    std::uint64_t p = 0;
    for (std::size_t i = 2; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') throw ParseError("/field: invalid field '" + name + "'");
      p = p * 10 + static_cast<std::uint64_t>(name[i] - '0');
      if (p > (1ULL << 62)) throw ParseError("/field: modulus too large");
    }
    return {false, p};
  }
  throw ParseError("/field: expected \"Q\" or \"F_p\", got '" + name + "'");
}

// -------------------------------------------------------------- document

template <class K>
class Document {
 public:
  Document(K field, json source) : field_(std::move(field)), source_(std::move(source)) { load(); }

  const K& field() const { return field_; }
  const json& source() const { return source_; }
  const json& tasks() const { return tasks_; }

  bool has_algebra(const std::string& n) const { return algebras_.count(n) != 0; }
  bool has_bimodule(const std::string& n) const { return bimodules_.count(n) != 0; }
  bool has_ring_map(const std::string& n) const { return maps_.count(n) != 0; }

  const AlgebraPtr<K>& algebra(const std::string& n) const { return lookup(algebras_, n, "algebra"); }
  const BimodulePtr<K>& bimodule(const std::string& n) const { return lookup(bimodules_, n, "bimodule"); }
  const RingMap<K>& ring_map(const std::string& n) const { return lookup(maps_, n, "ring map"); }

  /// Canonical form: the field, then every section in document order with
  /// explicit data rewritten in normalized scalars.
  json normalized() const {
    json out;
    out["field"] = field_.name();
    json algs = json::object();
    for (const auto& n : algebra_order_) {
      const auto& a = *algebras_.at(n);
      json e;
      e["dim"] = a.dim();
      e["basis"] = a.basis_names();
      json mult = json::array();
      for (std::size_t i = 0; i < a.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(vector_json(a.product(i, j)));
        mult.push_back(std::move(row));
      }
      e["mult"] = std::move(mult);
      e["unit"] = vector_json(a.unit());
      algs[n] = std::move(e);
    }
    out["algebras"] = std::move(algs);
    json maps = json::object();
    for (const auto& n : map_order_) {
      const auto& spec = source_["ring_maps"][n];
      if (spec.contains("matrix")) {
        const auto& f = maps_.at(n);
        maps[n] = {{"source", spec["source"]}, {"target", spec["target"]}, {"matrix", matrix_json(f.matrix)}};
      } else {
        maps[n] = spec;
      }
    }
    out["ring_maps"] = std::move(maps);
    json bims = json::object();
    for (const auto& n : bimodule_order_) {
      const auto& spec = source_["bimodules"][n];
      const auto& m = *bimodules_.at(n);
      if (spec.contains("left_action")) {
        json e;
        e["left"] = spec["left"];
        e["right"] = spec["right"];
        e["dim"] = m.dim();
        json l = json::array(), r = json::array();
        for (const auto& a : m.left_actions()) l.push_back(matrix_json(a));
        for (const auto& a : m.right_actions()) r.push_back(matrix_json(a));
        e["left_action"] = std::move(l);
        e["right_action"] = std::move(r);
        bims[n] = std::move(e);
      } else if (spec.contains("change_basis")) {
        json e = spec;
        e["matrix"] = matrix_json(parse_matrix(field_, spec["matrix"], m.dim(), m.dim(), "/bimodules/" + n + "/matrix"));
        bims[n] = std::move(e);
      } else {
        bims[n] = spec;
      }
    }
    out["bimodules"] = std::move(bims);
    out["tasks"] = tasks_;
    return out;
  }

 private:
  template <class V>
  static const V& lookup(const std::map<std::string, V>& m, const std::string& n, const char* what) {
    auto it = m.find(n);
    if (it == m.end()) throw ParseError(std::string("unknown ") + what + " '" + n + "'");
    return it->second;
  }

  void load() {
    if (!source_.is_object()) throw ParseError("document root must be an object");
    for (auto it = source_.begin(); it != source_.end(); ++it) {
      static const std::vector<std::string> known = {"field", "algebras", "ring_maps", "bimodules", "tasks"};
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        throw ParseError("/" + it.key() + ": unknown section");
    }
    if (source_.contains("algebras")) {
      const auto& algs = source_["algebras"];
      if (!algs.is_object()) throw ParseError("/algebras: expected an object");
      for (auto it = algs.begin(); it != algs.end(); ++it) load_algebra(it.key(), it.value());
    }
    if (!algebras_.count("k")) algebras_["k"] = ground_algebra(field_);
    if (source_.contains("ring_maps")) {
      const auto& maps = source_["ring_maps"];
      if (!maps.is_object()) throw ParseError("/ring_maps: expected an object");
      for (auto it = maps.begin(); it != maps.end(); ++it) load_map(it.key(), it.value());
    }
    if (source_.contains("bimodules")) {
      const auto& bims = source_["bimodules"];
      if (!bims.is_object()) throw ParseError("/bimodules: expected an object");
      for (auto it = bims.begin(); it != bims.end(); ++it) load_bimodule(it.key(), it.value());
    }
    tasks_ = source_.contains("tasks") ? source_["tasks"] : json::array();
    if (!tasks_.is_array()) throw ParseError("/tasks: expected an array");
  }

  void load_algebra(const std::string& name, const json& spec) {
    const auto path = "/algebras/" + name;
    auto dim = require_count(spec, "dim", path);
    if (dim == 0) throw ValidationError("algebra '" + name + "': dimension 0 (the zero ring) is not allowed");
    const auto& mult = require(spec, "mult", path);
    expect_array(mult, dim, path + "/mult");
    std::vector<std::vector<std::vector<typename K::Element>>> table(dim, std::vector<std::vector<typename K::Element>>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      expect_array(mult[i], dim, path + "/mult/" + std::to_string(i));
      for (std::size_t j = 0; j < dim; ++j) {
        auto p = path + "/mult/" + std::to_string(i) + "/" + std::to_string(j);
        auto v = parse_vector(field_, mult[i][j], dim, p);
        for (std::size_t c = 0; c < dim; ++c) table[i][j].push_back(v[c]);
      }
    }
    auto u = parse_vector(field_, require(spec, "unit", path), dim, path + "/unit");
    std::vector<typename K::Element> unit;
    for (std::size_t c = 0; c < dim; ++c) unit.push_back(u[c]);
    std::vector<std::string> names;
    if (spec.contains("basis")) {
      expect_array(spec["basis"], dim, path + "/basis");
      for (const auto& b : spec["basis"]) {
        if (!b.is_string()) throw ParseError(path + "/basis: expected strings");
        names.push_back(b.get<std::string>());
      }
    }
    auto a = std::make_shared<Algebra<K>>(field_, dim, table, unit, names);
    if (auto v = validate_algebra(*a); !v) throw ValidationError("algebra '" + name + "': " + v.message);
    algebras_[name] = a;
    algebra_order_.push_back(name);
  }

  void load_map(const std::string& name, const json& spec) {
    const auto path = "/ring_maps/" + name;
    RingMap<K> f;
    if (spec.contains("unit")) {
      f = unit_map(algebra(require_string(spec, "unit", path)));
    } else if (spec.contains("identity")) {
      f = identity_map(algebra(require_string(spec, "identity", path)));
    } else {
      auto src = algebra(require_string(spec, "source", path));
      auto tgt = algebra(require_string(spec, "target", path));
      f = {src, tgt, parse_matrix(field_, require(spec, "matrix", path), tgt->dim(), src->dim(), path + "/matrix")};
    }
    if (auto v = validate_ring_map(f); !v) throw ValidationError("ring map '" + name + "': " + v.message);
    maps_.emplace(name, f);
    map_order_.push_back(name);
  }

  std::pair<std::string, std::string> pair_of(const json& spec, const char* key, const std::string& path) {
    const auto& v = require(spec, key, path);
    if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string())
      throw ParseError(path + "/" + key + ": expected two names");
    return {v[0].get<std::string>(), v[1].get<std::string>()};
  }

  void load_bimodule(const std::string& name, const json& spec) {
    const auto path = "/bimodules/" + name;
    BimodulePtr<K> m;
    if (spec.contains("regular")) {
      m = regular_bimodule(algebra(require_string(spec, "regular", path)));
      const RingMap<K>* lf = spec.contains("left_map") ? &ring_map(require_string(spec, "left_map", path)) : nullptr;
      const RingMap<K>* rf = spec.contains("right_map") ? &ring_map(require_string(spec, "right_map", path)) : nullptr;
      if (lf || rf) m = restrict_scalars<K>(m, lf, rf);
    } else if (spec.contains("dual")) {
      m = dual_module(bimodule(require_string(spec, "dual", path))).module;
    } else if (spec.contains("kernel_of_ev")) {
      m = kernel_submodule(evaluation_map(bimodule(require_string(spec, "kernel_of_ev", path))).counit).module;
    } else if (spec.contains("tensor")) {
      auto [x, y] = pair_of(spec, "tensor", path);
      m = tensor_over(bimodule(x), bimodule(y), "bimodule '" + name + "'").module;
    } else if (spec.contains("direct_sum")) {
      auto [x, y] = pair_of(spec, "direct_sum", path);
      m = direct_sum(bimodule(x), bimodule(y));
    } else if (spec.contains("change_basis")) {
      auto x = bimodule(require_string(spec, "change_basis", path));
      auto p = parse_matrix(field_, require(spec, "matrix", path), x->dim(), x->dim(), path + "/matrix");
      if (rank(p) != x->dim()) throw ValidationError("bimodule '" + name + "': change of basis matrix is singular");
      m = change_basis(x, p);
    } else if (spec.contains("left_module")) {
      m = as_left_module(bimodule(require_string(spec, "left_module", path)));
    } else {
      auto l = algebra(require_string(spec, "left", path));
      auto r = algebra(require_string(spec, "right", path));
      auto dim = require_count(spec, "dim", path);
      auto read = [&](const char* key, std::size_t count) {
        const auto& arr = require(spec, key, path);
        expect_array(arr, count, path + "/" + key);
        std::vector<Matrix<K>> out;
        for (std::size_t i = 0; i < count; ++i)
          out.push_back(parse_matrix(field_, arr[i], dim, dim, path + "/" + key + "/" + std::to_string(i)));
        return out;
      };
      auto la = read("left_action", l->dim());
      auto ra = read("right_action", r->dim());
      m = std::make_shared<Bimodule<K>>(l, r, dim, std::move(la), std::move(ra));
    }
    if (auto v = validate_bimodule(*m); !v) throw ValidationError("bimodule '" + name + "': " + v.message);
    bimodules_[name] = m;
    bimodule_order_.push_back(name);
  }

  K field_;
  json source_;
  json tasks_;
  std::map<std::string, AlgebraPtr<K>> algebras_;
  std::map<std::string, RingMap<K>> maps_;
  std::map<std::string, BimodulePtr<K>> bimodules_;
  std::vector<std::string> algebra_order_;
  std::vector<std::string> map_order_;
  std::vector<std::string> bimodule_order_;
};

/// Parses JSON text, reporting the byte position of syntax errors.
inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace bimod::io
