// bimodcheck: load a document of algebras, bimodules and ring maps, run its
// tasks and print a report.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bimod/io/document.hpp"
#include "bimod/io/report.hpp"

namespace {

enum Exit { ok = 0, assertion = 1, parse = 2, validation = 3, resource = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bimod::ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CheckArgs {
  std::string file;
  std::string format = "json";
  bool assert_expectations = false;
  std::optional<std::size_t> nmax;
  std::optional<std::size_t> dim_cap;
  bool timings = false;
};

template <class K>
int check(const K& field, const bimod::io::json& source, const CheckArgs& args) {
  bimod::io::Document<K> doc(field, source);
  bimod::io::Runner<K> runner(doc, {args.nmax, args.timings});
  auto summary = runner.run();
  if (args.format == "text")
    std::cout << bimod::io::render_text(summary.report);
  else
    std::cout << summary.report.dump(2) << "\n";
  if (args.assert_expectations && summary.failed_expectations > 0) {
    std::cerr << "bimodcheck: " << summary.failed_expectations << " of " << summary.expectations
              << " expectation(s) failed\n";
    return assertion;
  }
  return ok;
}

template <class K>
int normalize(const K& field, const bimod::io::json& source) {
  bimod::io::Document<K> doc(field, source);
  std::cout << doc.normalized().dump(2) << "\n";
  return ok;
}

template <class F>
int with_field(const bimod::io::json& source, F&& f) {
  auto spec = bimod::io::parse_field(source);
  if (spec.rational) return f(bimod::Rationals{});
  return f(bimod::PrimeField(spec.modulus));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagnostics for finite-dimensional bimodules"};
  app.require_subcommand(1);

  CheckArgs args;
  auto* check_cmd = app.add_subcommand("check", "Run the tasks of a document");
  check_cmd->add_option("file", args.file, "Input document (JSON)")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  check_cmd->add_flag("--assert", args.assert_expectations, "Exit with status 1 if any expectation fails");
  check_cmd->add_option("--nmax", args.nmax, "Default top degree for cohomology tasks");
  check_cmd->add_option("--dim-cap", args.dim_cap, "Largest intermediate dimension allowed")->envname("BIMODCHECK_DIM_CAP");
  check_cmd->add_flag("--timings", args.timings, "Add per-task wall time to the report");

  std::string norm_file;
  auto* norm_cmd = app.add_subcommand("normalize", "Print the canonical form of a document");
  norm_cmd->add_option("file", norm_file, "Input document (JSON)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check_cmd) {
      if (args.dim_cap) bimod::dimension_cap() = *args.dim_cap;
      auto source = bimod::io::parse_json(read_file(args.file));
      return with_field(source, [&](const auto& k) { return check(k, source, args); });
    }
    auto source = bimod::io::parse_json(read_file(norm_file));
    return with_field(source, [&](const auto& k) { return normalize(k, source); });
  } catch (const bimod::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return parse;
  } catch (const bimod::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return validation;
  } catch (const bimod::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return resource;
  } catch (const bimod::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation;
  }
}
