#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "obkit.h"

// Thin driver over the C API: flags are assembled into a JSON request,
// one operation runs, the report lands on stdout (or --out) as JSON or
// TSV, and the process exits with the library status.

namespace {

using nlohmann::json;

struct CliError {
  std::string message;
};

// A flag value is inline JSON when it opens an object or array, a file
// when one exists under that name, an integer when it reads as one, and
// a plain string otherwise (rationals, words).
json value_of(const std::string& raw) {
  if (!raw.empty() && (raw[0] == '{' || raw[0] == '[')) {
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) throw CliError{"inline JSON does not parse: " + raw};
    return j;
  }
  std::ifstream in(raw, std::ios::binary);
  if (in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    json j = json::parse(buf.str(), nullptr, false);
    if (j.is_discarded())
      throw CliError{"file " + raw + " does not hold valid JSON"};
    return j;
  }
  if (raw.size() > 5 && raw.compare(raw.size() - 5, 5, ".json") == 0)
    throw CliError{"cannot read file " + raw};
  if (!raw.empty()) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end != nullptr && *end == '\0' && errno == 0) return json(v);
  }
  return json(raw);
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  if (s.size() > 160) s = s.substr(0, 157) + "...";
  return s;
}

std::string render_tsv(const json& report) {
  std::ostringstream o;
  if (report.is_object() && report.contains("checks")) {
    for (const auto& row : report["checks"])
      o << row.value("name", "") << '\t' << row.value("status", "") << '\t'
        << sanitize(row.value("witness", "")) << '\t' << row.value("micros", 0)
        << '\n';
  } else {
    std::string kind = "internal", message = "unrecognized response";
    if (report.is_object() && report.contains("error")) {
      kind = report["error"].value("kind", kind);
      message = report["error"].value("message", message);
    }
    o << "error\t" << kind << '\t' << sanitize(message) << "\t0\n";
  }
  return o.str();
}

struct FlagSpec {
  const char* flag;
  bool required;
  const char* help;
};

struct OpSpec {
  const char* group;
  const char* verb;
  const char* op;
  const char* help;
  std::vector<FlagSpec> flags;
};

const std::vector<OpSpec>& op_specs() {
  static const std::vector<OpSpec> specs = {
      {"metric", "validate", "metric.validate",
       "check the metric axioms of a distance matrix",
       {{"space", true, "space file or inline JSON"}}},
      {"metric", "d1", "metric.d1",
       "optimal coupling distance between two matrices",
       {{"a", true, "first matrix"}, {"b", true, "second matrix"}}},
      {"metric", "net", "metric.net", "round a matrix onto the epsilon grid",
       {{"space", true, "space"}, {"eps", true, "grid width, e.g. 1/4"}}},
      {"metric", "glue", "metric.glue",
       "glue two matrices along the optimal shift",
       {{"a", true, "first matrix"}, {"b", true, "second matrix"}}},
      {"metric", "geodesic", "metric.geodesic",
       "distances in the one-segment geodesic extension",
       {{"space", true, "space"},
        {"p", true, "first point (index or {x,y,t})"},
        {"q", true, "second point"},
        {"r", false, "optional third point for the triangle row"}}},
      {"urysohn", "katetov", "urysohn.katetov",
       "enumerate one-point extension profiles on a denominator grid",
       {{"space", true, "space"},
        {"denom", false, "grid denominator (default 2)"}}},
      {"urysohn", "amalgam", "urysohn.amalgam",
       "adjoin copies of two tuples over a common anchor tuple",
       {{"space", true, "space"},
        {"xbar", true, "tuple to copy, e.g. [0,1]"},
        {"zbar", true, "second tuple"},
        {"ybar", true, "anchor tuple at uniform distance 1"}}},
      {"urysohn", "factor4", "urysohn.factor4",
       "decompose a partial isometry into four stabilizer factors",
       {{"space", true, "space"},
        {"xbar", true, "anchor tuple"},
        {"map", true, "partial isometry {map: [[a,b],...]}"}}},
      {"urysohn", "extend", "urysohn.extend",
       "complete a partial isometry inside a finite extension",
       {{"space", true, "space"},
        {"map", true, "partial isometry"},
        {"denom", false, "search grid denominator (default 4)"},
        {"budget", false, "extension budget (default 40)"}}},
      {"urysohn", "width", "urysohn.width",
       "factor every isometry through anchor stabilizers",
       {{"action", true, "space with element list"},
        {"xbar", true, "anchor tuple"},
        {"eps", true, "stabilizer radius"}}},
      {"tree", "classify", "tree.classify",
       "classify an automorphism or a free-group word",
       {{"tree", false, "tree file (permutation route)"},
        {"auto", true, "permutation {perm: [...]} or word like abA"}}},
      {"tree", "cm1", "tree.cm1",
       "translation length addition across disjoint axes",
       {{"tree", false, "tree file (permutation route)"},
        {"g", true, "word or permutation"},
        {"h", true, "word or permutation"}}},
      {"tree", "cm2", "tree.cm2", "max identity for crossing axes",
       {{"tree", false, "tree file (permutation route)"},
        {"g", true, "word or permutation"},
        {"h", true, "word or permutation"}}},
      {"tree", "serre", "tree.serre",
       "common fixed vertex of two elliptic automorphisms",
       {{"tree", true, "tree"},
        {"g", true, "permutation"},
        {"h", true, "permutation"}}},
      {"tree", "macpherson", "tree.macpherson",
       "fixed vertex of k0k1k0k2 from elliptic products",
       {{"tree", true, "tree"},
        {"k0", true, "permutation"},
        {"k1", true, "permutation"},
        {"k2", true, "permutation"}}},
      {"unitary", "gs", "unitary.gs",
       "exact Gram-Schmidt orthonormalization",
       {{"vectors", true, "vector list file"},
        {"prefix", false, "orthonormal prefix to extend"}}},
      {"unitary", "extend", "unitary.extend",
       "extend prescribed vector images to an orthogonal operator",
       {{"pairs", true, "list of (x, y) vector pairs"}}},
      {"unitary", "paste", "unitary.paste",
       "paste finitary blocks along consecutive ranges",
       {{"blocks", true, "list of operators"}}},
      {"unitary", "shiftwin", "unitary.shiftwin",
       "find the shift exponent matching a tuple on a window",
       {{"schedule", true, "block schedule {tuples: [...]}"},
        {"targets", true, "target tuple around 0"},
        {"k", false, "window radius (default 1)"}}},
      {"unitary", "bergman", "unitary.bergman",
       "factor an operator through two window stabilizers",
       {{"op", true, "operator"},
        {"k", false, "window size (default 1)"}}},
      {"group", "chain", "group.chain",
       "level-weighted word metric from a subset chain",
       {{"group", true, "multiplication table"},
        {"levels", true, "subset chain {sets: [...]}"},
        {"f", true, "first element index"},
        {"h", true, "second element index"}}},
      {"group", "birkhoff", "group.birkhoff",
       "metric pair from a cube filtration",
       {{"group", true, "multiplication table"},
        {"filtration", true, "filtration {first, sets}"},
        {"g1", true, "first element index"},
        {"g2", true, "second element index"}}},
      {"group", "width", "group.width",
       "eccentricity of the identity for a generating set",
       {{"group", true, "multiplication table"},
        {"set", true, "symmetric generating set"}}},
      {"group", "square", "group.square",
       "square a majority subset onto the whole group",
       {{"group", true, "multiplication table"},
        {"set", true, "symmetric subset containing the identity"}}},
      {"group", "induce", "group.induce",
       "induce an isometric action from a finite-index subgroup",
       {{"group", true, "multiplication table"},
        {"subgroup", true, "subgroup element list"},
        {"transversal", false, "coset representatives (default lex-least)"},
        {"space", true, "base space"},
        {"action", true, "per subgroup element a base permutation"}}},
      {"circular", "between", "circular.between",
       "strict cyclic betweenness of three circle points",
       {{"x", true, "circle point, e.g. 1/4"},
        {"y", true, "circle point"},
        {"z", true, "circle point"}}},
      {"circular", "config", "circular.config",
       "cyclic order of a point tuple",
       {{"points", true, "point list"}}},
      {"circular", "produkt", "circular.produkt",
       "factor a cyclic-order map through two point stabilizers",
       {{"moved", true, "tuple the map moves"},
        {"fixed", true, "tuple the first factor fixes"},
        {"image", true, "target images of the moved tuple"}}},
  };
  return specs;
}

int run(const std::string& op, const json& request, const std::string& format,
        const std::string& out_path) {
  std::string text = request.dump();
  obkit_result* res = nullptr;
  obkit_run(op.c_str(), text.c_str(), &res);
  std::string body = obkit_result_json(res);
  int status = (int)obkit_result_status(res);
  obkit_result_free(res);

  std::string rendered;
  if (format == "tsv") {
    json rep = json::parse(body, nullptr, false);
    rendered = render_tsv(rep);
  } else {
    rendered = body + "\n";
  }
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << rendered;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification toolkit: metric spaces, isometry groups, "
               "trees, finitary unitaries, finite groups, circle maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(obkit_version()));

  std::string format = "json";
  std::string out_path;
  bool timing = false;
  app.add_option("--format", format, "report format: json or tsv")
      ->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--out", out_path, "write the report to a file");
  app.add_flag("--timing", timing,
               "measure per-check micros in suite reports (reports are "
               "byte-stable only without it)");

  // Per-verb option storage; deque keeps the addresses stable for CLI11.
  struct Bound {
    CLI::App* sub = nullptr;
    const OpSpec* spec = nullptr;
    std::vector<std::string> values;
  };
  std::vector<Bound> bound;
  bound.reserve(op_specs().size());

  std::map<std::string, CLI::App*> groups;
  for (const auto& spec : op_specs()) {
    auto it = groups.find(spec.group);
    if (it == groups.end()) {
      CLI::App* g = app.add_subcommand(spec.group, "");
      g->require_subcommand(1);
      g->fallthrough();
      it = groups.emplace(spec.group, g).first;
    }
    bound.push_back({});
    Bound& b = bound.back();
    b.spec = &spec;
    b.sub = it->second->add_subcommand(spec.verb, spec.help);
    // Long-only help so verb flags like --h stay available.
    b.sub->set_help_flag("--help", "print help");
    b.sub->fallthrough();
    b.values.resize(spec.flags.size());
    for (std::size_t i = 0; i < spec.flags.size(); ++i) {
      auto* opt = b.sub->add_option("--" + std::string(spec.flags[i].flag),
                                    b.values[i], spec.flags[i].help);
      if (spec.flags[i].required) opt->required();
    }
  }

  std::string suite_module;
  long seed = 0;
  long samples = 50;
  CLI::App* suite = app.add_subcommand(
      "suite", "randomized property suite for one module or all");
  suite->fallthrough();
  suite
      ->add_option("module", suite_module,
                   "all, metric, urysohn, tree, unitary, group, or circular")
      ->required()
      ->check(CLI::IsMember({"all", "metric", "urysohn", "tree", "unitary",
                             "group", "circular"}));
  suite->add_option("--seed", seed, "random seed (default 0)")
      ->check(CLI::NonNegativeNumber);
  suite->add_option("--samples", samples, "sample budget per check (default 50)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (suite->parsed()) {
      json request = json::object();
      request["seed"] = seed;
      request["samples"] = samples;
      if (timing) request["timing"] = true;
      return run("suite." + suite_module, request, format, out_path);
    }
    for (const Bound& b : bound) {
      if (!b.sub->parsed()) continue;
      json request = json::object();
      for (std::size_t i = 0; i < b.spec->flags.size(); ++i)
        if (b.sub->count("--" + std::string(b.spec->flags[i].flag)) > 0)
          request[b.spec->flags[i].flag] = value_of(b.values[i]);
      if (timing) request["timing"] = true;
      return run(b.spec->op, request, format, out_path);
    }
  } catch (const CliError& e) {
    json err = {{"error", {{"kind", "parse"}, {"message", e.message}}}};
    std::cout << err.dump(2) << "\n";
    return 2;
  }
  std::cerr << "no operation selected\n";
  return 2;
}
