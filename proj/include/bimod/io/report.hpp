#pragma once

// Runs the task list of a document and renders the results as JSON or as a
// plain-text table.

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bimod/bimodule.hpp"
#include "bimod/diagnostics.hpp"
#include "bimod/error.hpp"
#include "bimod/homology.hpp"
#include "bimod/io/document.hpp"

namespace bimod::io {

struct RunOptions {
  std::optional<std::size_t> nmax;  // used when a task gives none
  bool timings = false;
};

struct RunSummary {
  json report;
  std::size_t expectations = 0;
  std::size_t failed_expectations = 0;
};

template <class K>
json casimir_json(const CasimirVerdict<K>& c) {
  json w;
  if (c.casimir) w["casimir"] = vector_json(*c.casimir);
  if (c.obstruction) w["obstruction"] = vector_json(*c.obstruction);
  return w;
}

template <class K>
json section_json(const SectionVerdict<K>& s) {
  json w;
  if (s.section) w["section"] = matrix_json(*s.section);
  if (s.obstruction) w["obstruction"] = vector_json(*s.obstruction);
  return w;
}

template <class K>
json cohomology_json(const CohomologyResult<K>& r) {
  json out;
  out["dims"] = r.dims();
  json degs = json::array();
  for (std::size_t n = 0; n < r.degrees.size(); ++n) {
    const auto& d = r.degrees[n];
    json reps = json::array();
    for (const auto& m : d.representatives) reps.push_back(matrix_json(m));
    degs.push_back({{"n", n},
                    {"cochains", d.cochain_dim},
                    {"cocycles", d.cocycle_dim},
                    {"coboundaries", d.coboundary_dim},
                    {"dim", d.dim},
                    {"representatives", std::move(reps)}});
  }
  out["degrees"] = std::move(degs);
  return out;
}

inline json phi_json(const PhiReport& p) {
  return {{"ok", p.ok},
          {"isomorphisms", p.isomorphisms},
          {"squares", p.squares},
          {"source_dims", p.source_dims},
          {"target_dims", p.target_dims}};
}

template <class K>
class Runner {
 public:
  Runner(const Document<K>& doc, RunOptions opts) : doc_(doc), opts_(opts) {}

  RunSummary run() {
    RunSummary s;
    s.report["field"] = doc_.field().name();
    json tasks = json::array();
    for (std::size_t i = 0; i < doc_.tasks().size(); ++i) {
      const auto& task = doc_.tasks()[i];
      auto entry = run_task(task, i);
      if (task.contains("expect")) {
        ++s.expectations;
        bool ok = matches(task["expect"], entry["result"]);
        entry["expect_ok"] = ok;
        if (!ok) ++s.failed_expectations;
      }
      tasks.push_back(std::move(entry));
    }
    s.report["tasks"] = std::move(tasks);
    return s;
  }

 private:
  static bool matches(const json& expect, const json& result) {
    if (!expect.is_object()) return expect == result;
    for (auto it = expect.begin(); it != expect.end(); ++it) {
      if (!result.is_object() || !result.contains(it.key())) return false;
      if (!matches(it.value(), result[it.key()])) return false;
    }
    return true;
  }

  std::string op_of(const json& task, std::size_t i) const {
    auto path = "/tasks/" + std::to_string(i);
    return require_string(task, "op", path);
  }

  std::vector<std::string> args_of(const json& task, std::size_t i) const {
    std::vector<std::string> args;
    if (!task.contains("args")) return args;
    const auto& a = task["args"];
    if (!a.is_array()) throw ParseError("/tasks/" + std::to_string(i) + "/args: expected an array");
    for (const auto& x : a) {
      if (!x.is_string()) throw ParseError("/tasks/" + std::to_string(i) + "/args: expected names");
      args.push_back(x.get<std::string>());
    }
    return args;
  }

  std::size_t option(const json& task, const char* key, std::size_t fallback) const {
    if (task.contains(key)) return task[key].get<std::size_t>();
    if (std::string(key) == "nmax" && opts_.nmax) return *opts_.nmax;
    return fallback;
  }

  void arity(const std::vector<std::string>& args, std::size_t n, const std::string& op) const {
    if (args.size() != n)
      throw ParseError("task '" + op + "' takes " + std::to_string(n) + " argument(s), got " + std::to_string(args.size()));
  }

  /// A B-B coefficient bimodule: a name or "@regular", "@ker_ev", "@free" relative to m.
  BimodulePtr<K> coefficient(const std::string& name, const BimodulePtr<K>& m) const {
    if (name == "@regular") return regular_bimodule(m->left());
    if (name == "@ker_ev") return kernel_submodule(evaluation_map(m).counit).module;
    if (name == "@free") return evaluation_map(m).tensor.module;
    return doc_.bimodule(name);
  }

  BarResolution<K>& resolution(const std::string& name) {
    auto it = resolutions_.find(name);
    if (it == resolutions_.end())
      it = resolutions_.emplace(name, std::make_unique<BarResolution<K>>(doc_.bimodule(name))).first;
    return *it->second;
  }

  json run_task(const json& task, std::size_t i) {
    auto op = op_of(task, i);
    auto args = args_of(task, i);
    json entry;
    entry["index"] = i;
    entry["op"] = op;
    entry["args"] = args;
    auto start = std::chrono::steady_clock::now();
    try {
      entry["result"] = dispatch(op, args, task);
    } catch (const PreconditionError& e) {
      entry["result"] = {{"error", "precondition"}, {"message", e.what()}};
    } catch (const DimensionMismatch& e) {
      entry["result"] = {{"error", "dimension_mismatch"}, {"message", e.what()}};
    }
    if (opts_.timings) {
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      entry["time_ms"] = ms;
    }
    return entry;
  }

  json dispatch(const std::string& op, const std::vector<std::string>& args, const json& task) {
    if (op == "generator") {
      arity(args, 1, op);
      auto m = doc_.bimodule(args[0]);
      auto v = is_generator(m);
      auto ev = evaluation_map(m);
      json r{{"value", v.value}, {"ev_rank", v.image_rank}, {"dims", {{"M", m->dim()}, {"C", ev.tensor.module->dim()}}}};
      json w;
      bool ok = false;
      if (v.preimage_of_unit) {
        w["preimage_of_unit"] = vector_json(*v.preimage_of_unit);
        ok = ev.counit.matrix * *v.preimage_of_unit == m->left()->unit();
      } else if (v.cokernel_functional) {
        w["cokernel_functional"] = vector_json(*v.cokernel_functional);
        ok = (*v.cokernel_functional * ev.counit.matrix).is_zero() &&
             (*v.cokernel_functional * m->left()->unit())(0, 0) == m->field().one();
      }
      r["witness"] = std::move(w);
      r["recheck"] = ok;
      return r;
    }
    if (op == "separable") {
      arity(args, 1, op);
      auto m = doc_.bimodule(args[0]);
      auto v = is_separable_bimodule(m);
      return separability_json(m, v);
    }
    if (op == "smooth") {
      arity(args, 1, op);
      return smooth_json(doc_.bimodule(args[0]));
    }
    if (op == "hdim") {
      arity(args, 1, op);
      auto v = hdim_upto(resolution(args[0]), option(task, "nmax", 3));
      json r{{"hdim", v.str()}, {"nmax", v.nmax}, {"inferred", v.inferred}, {"syzygy_dims", v.syzygy_dims}};
      if (v.projectivity) {
        r["witness"] = section_json(v.projectivity->section);
        r["recheck"] = recheck_section(v.projectivity->cover.counit, *v.projectivity->section.section);
      }
      return r;
    }
    if (op == "rel_projective") {
      arity(args, 2, op);
      auto m = doc_.bimodule(args[1]);
      auto p = coefficient(args[0], m);
      auto v = is_rel_projective(p, m);
      json r{{"value", v.value()}, {"dims", {{"P", p->dim()}, {"F(P)", v.cover.tensor.module->dim()}}}};
      r["witness"] = section_json(v.section);
      r["recheck"] = v.value() ? recheck_section(v.cover.counit, *v.section.section) : true;
      return r;
    }
    if (op == "fg_projective") {
      arity(args, 1, op);
      auto m = doc_.bimodule(args[0]);
      auto l = is_fg_projective_left(m);
      auto rr = is_fg_projective_right(m);
      json r{{"left", l.value}, {"right", rr.value}};
      auto pairs_of = [](const DualBasis<K>& db) {
        json pairs = json::array();
        for (std::size_t q = 0; q < db.elements.size(); ++q)
          pairs.push_back({{"element", db.elements[q]}, {"functional", matrix_json(db.functionals[q])}});
        return pairs;
      };
      json witness = json::object();
      bool recheck = true;
      if (l.dual_basis) {
        witness["left_dual_basis"] = pairs_of(*l.dual_basis);
        recheck = recheck && verify_dual_basis(m, *l.dual_basis, [&](const Matrix<K>& b) { return m->act_left(b); });
      }
      if (rr.dual_basis) {
        witness["right_dual_basis"] = pairs_of(*rr.dual_basis);
        recheck = recheck && verify_dual_basis(m, *rr.dual_basis, [&](const Matrix<K>& a) { return m->act_right(a); });
      }
      if (!witness.empty()) {
        r["witness"] = std::move(witness);
        r["recheck"] = recheck;
      }
      return r;
    }
    if (op == "separable_extension") {
      arity(args, 1, op);
      const auto& f = doc_.ring_map(args[0]);
      auto v = is_separable_extension(f);
      json r{{"value", v.value()},
             {"dims", {{"S(x)S", v.casimir.ambient_dim}, {"centralizer", v.casimir.centralizer_dim}}},
             {"witness", casimir_json(v.casimir)}};
      r["recheck"] = v.value() ? recheck_casimir(v.multiplication.tensor.module, v.multiplication.map.matrix, f.target->unit(), *v.casimir.casimir)
                               : recheck_obstruction(v.multiplication.tensor.module, v.multiplication.map.matrix, f.target->unit(), *v.casimir.obstruction);
      return r;
    }
    if (op == "smooth_extension") {
      arity(args, 1, op);
      auto v = is_formally_smooth_extension(doc_.ring_map(args[0]));
      json r{{"value", v.value()}, {"dims", {{"kernel", v.kernel_dim}, {"cover", v.cover_dim}}}, {"witness", section_json(v.section)}};
      r["recheck"] = v.value() ? recheck_section(v.counit, *v.section.section) : true;
      return r;
    }
    if (op == "multiplication") {
      arity(args, 1, op);
      auto v = multiplication_map(doc_.ring_map(args[0]));
      return {{"source_dim", v.map.source->dim()},
              {"target_dim", v.map.target->dim()},
              {"kernel_dim", v.map.source->dim() - rank(v.map.matrix)},
              {"surjective", is_surjective(v.map)},
              {"bimodule_map", validate_map(v.map).ok}};
    }
    if (op == "m_hochschild") {
      arity(args, 2, op);
      auto& r = resolution(args[0]);
      return cohomology_json(m_hochschild(r, coefficient(args[1], r.module()), option(task, "nmax", 2)));
    }
    if (op == "rel_hochschild") {
      arity(args, 2, op);
      const auto& f = doc_.ring_map(args[0]);
      auto w = args[1] == "@regular" ? regular_bimodule(f.target) : doc_.bimodule(args[1]);
      return cohomology_json(rel_hochschild(f, w, option(task, "nmax", 2)));
    }
    if (op == "bar_resolution") {
      arity(args, 1, op);
      auto& r = resolution(args[0]);
      auto depth = option(task, "depth", 3);
      auto c = r.complex(depth);
      std::vector<std::size_t> dims;
      for (const auto& o : c.objects) dims.push_back(o->dim());
      auto h = homotopy_check(r.module(), depth);
      auto b = r.object(-1);
      auto h0 = m_hochschild(r, b, 0).dims()[0];
      return {{"dims", dims},
              {"d_squared_zero", complex_is_valid(c)},
              {"homotopy", h.ok},
              {"h0", h0},
              {"center_dim", invariants(b).dim()}};
    }
    if (op == "morita") {
      arity(args, 2, op);
      auto m = doc_.bimodule(args[0]);
      auto v = morita_check(m, coefficient(args[1], m), option(task, "nmax", 2));
      return {{"m_dims", v.m_dims}, {"rel_dims", v.rel_dims}, {"equal", v.equal}, {"phi", phi_json(v.phi)},
              {"dims", {{"S", v.s_dim}, {"W", v.w_dim}}}};
    }
    if (op == "phi") {
      arity(args, 2, op);
      auto m = doc_.bimodule(args[0]);
      return phi_json(phi_check(m, coefficient(args[1], m), option(task, "nmax", 2)));
    }
    if (op == "sugano") {
      arity(args, 1, op);
      auto v = sugano_check(doc_.bimodule(args[0]));
      return {{"precondition", v.precondition}, {"separable", v.separable}, {"generator", v.generator},
              {"extension_separable", v.extension_separable}, {"consistent", v.consistent}};
    }
    if (op == "static") {
      arity(args, 1, op);
      auto v = static_criteria(doc_.bimodule(args[0]));
      return {{"ev_over_s_injective", v.ev_over_s_injective}, {"ev_over_s_isomorphism", v.ev_over_s_isomorphism},
              {"trace_dim", v.trace_dim}, {"trace_static", v.trace_static}, {"generator", v.generator},
              {"bs_separable", v.bs_separable}, {"consistent", v.consistent}};
    }
    if (op == "smooth_product") {
      arity(args, 2, op);
      auto v = smooth_product(doc_.bimodule(args[0]), doc_.bimodule(args[1]), static_cast<int>(option(task, "mode", 1)));
      json hyp = json::object();
      for (const auto& [name, val] : v.hypotheses) hyp[name] = val;
      return {{"dim", v.product->dim()}, {"hypotheses", std::move(hyp)}, {"hypotheses_hold", v.hypotheses_hold},
              {"smooth", v.smooth}, {"consistent", v.consistent}};
    }
    if (op == "diagnose") {
      arity(args, 1, op);
      auto m = doc_.bimodule(args[0]);
      json r{{"generator", is_generator(m).value},
             {"separable", is_separable_bimodule(m).value()},
             {"smooth", is_formally_smooth_bimodule(m).value}};
      if (r["generator"].get<bool>()) {
        auto h = hdim_upto(resolution(args[0]), option(task, "nmax", 3));
        r["hdim"] = h.str();
        r["inferred"] = h.inferred;
      }
      return r;
    }
    if (op == "endomorphism_ring") {
      arity(args, 1, op);
      auto e = endomorphism_ring(doc_.bimodule(args[0]));
      json mult = json::array();
      for (std::size_t a = 0; a < e.algebra->dim(); ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < e.algebra->dim(); ++b) row.push_back(vector_json(e.algebra->product(a, b)));
        mult.push_back(std::move(row));
      }
      return {{"dim", e.algebra->dim()}, {"mult", std::move(mult)}, {"unit", vector_json(e.algebra->unit())},
              {"i", matrix_json(e.canonical.matrix)}, {"valid", validate_algebra(*e.algebra).ok && validate_ring_map(e.canonical).ok}};
    }
    if (op == "trace") {
      arity(args, 2, op);
      auto m = doc_.bimodule(args[0]);
      auto t = trace_in(m, coefficient(args[1], m));
      return {{"dim", t.dim()}, {"basis", matrix_json(t.basis)}};
    }
    if (op == "syzygy") {
      arity(args, 1, op);
      return {{"dim", syzygy(resolution(args[0]), option(task, "n", 1)).module->dim()}};
    }
    if (op == "homotopy") {
      arity(args, 1, op);
      auto h = homotopy_check(doc_.bimodule(args[0]), option(task, "depth", 2));
      return {{"ok", h.ok}, {"identities", h.identities}};
    }
    throw ParseError("unknown task '" + op + "'");
  }

  json separability_json(const BimodulePtr<K>& m, const SeparabilityVerdict<K>& v) {
    const auto& c = v.evaluation.tensor.module;
    const auto& ev = v.evaluation.counit.matrix;
    json r{{"value", v.value()}, {"dims", {{"C", c->dim()}, {"centralizer", v.casimir.centralizer_dim}}}};
    json w = casimir_json(v.casimir);
    if (v.casimir.casimir) {
      auto plain = v.evaluation.tensor.section() * *v.casimir.casimir;
      w["terms"] = matrix_json(Matrix<K>::unvec(plain, m->dim(), v.evaluation.hom.dim()));
    }
    r["witness"] = std::move(w);
    r["recheck"] = v.value() ? recheck_casimir(c, ev, m->left()->unit(), *v.casimir.casimir)
                             : recheck_obstruction(c, ev, m->left()->unit(), *v.casimir.obstruction);
    return r;
  }

  json smooth_json(const BimodulePtr<K>& m) {
    auto v = is_formally_smooth_bimodule(m);
    json r{{"value", v.value}, {"via", v.via}, {"dims", {{"kernel", v.kernel_dim}}}};
    if (v.via == "ev_injective") {
      r["recheck"] = rank(evaluation_map(m).counit.matrix) == evaluation_map(m).tensor.module->dim();
    } else if (v.via == "separable") {
      r["witness"] = casimir_json(v.separability->casimir);
      const auto& ev = v.separability->evaluation;
      r["recheck"] = recheck_casimir(ev.tensor.module, ev.counit.matrix, m->left()->unit(), *v.separability->casimir.casimir);
    } else {
      r["witness"] = section_json(v.projectivity->section);
      r["recheck"] = v.value ? recheck_section(v.projectivity->cover.counit, *v.projectivity->section.section) : true;
    }
    return r;
  }

  const Document<K>& doc_;
  RunOptions opts_;
  std::map<std::string, std::unique_ptr<BarResolution<K>>> resolutions_;
};

/// One line per task: index, op, arguments and a short verdict.
inline std::string render_text(const json& report) {
  std::ostringstream os;
  os << "field " << report["field"].get<std::string>() << "\n";
  for (const auto& t : report["tasks"]) {
    std::string args;
    for (const auto& a : t["args"]) args += (args.empty() ? "" : " ") + a.get<std::string>();
    const auto& r = t["result"];
    std::string verdict;
    auto yn = [](const json& b) { return b.get<bool>() ? std::string("yes") : std::string("no"); };
    if (r.contains("error")) {
      verdict = "error: " + r["error"].get<std::string>();
    } else if (t["op"] == "diagnose") {
      verdict = "generator " + yn(r["generator"]) + ", separable " + yn(r["separable"]) + ", smooth " + yn(r["smooth"]);
      if (r.contains("hdim")) verdict += ", hdim " + r["hdim"].get<std::string>();
    } else if (r.contains("hdim")) {
      verdict = "hdim " + r["hdim"].get<std::string>();
    } else if (r.contains("value")) {
      verdict = yn(r["value"]);
      if (r.contains("via")) verdict += " (" + r["via"].get<std::string>() + ")";
    } else if (r.contains("m_dims")) {
      verdict = r["m_dims"].dump() + " vs " + r["rel_dims"].dump() + (r["equal"].get<bool>() ? " equal" : " differ");
    } else if (r.contains("consistent")) {
      verdict = r["consistent"].get<bool>() ? "consistent" : "INCONSISTENT";
    } else if (r.contains("dims")) {
      verdict = r["dims"].dump();
    } else if (r.contains("ok")) {
      verdict = yn(r["ok"]);
    } else if (r.contains("dim")) {
      verdict = "dim " + std::to_string(r["dim"].get<std::size_t>());
    } else if (r.contains("surjective")) {
      verdict = std::to_string(r["source_dim"].get<std::size_t>()) + " -> " + std::to_string(r["target_dim"].get<std::size_t>()) +
                ", kernel " + std::to_string(r["kernel_dim"].get<std::size_t>());
    } else if (r.contains("left")) {
      verdict = "left " + yn(r["left"]) + ", right " + yn(r["right"]);
    }
    if (t.contains("expect_ok")) verdict += t["expect_ok"].get<bool>() ? "  [expected]" : "  [UNEXPECTED]";
    os << "[" << t["index"].get<std::size_t>() << "] " << t["op"].get<std::string>() << " " << args << ": " << verdict << "\n";
  }
  return os.str();
}

}  // namespace bimod::io
