#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sqtsp/certify.hpp"

using namespace sqtsp;
using nlohmann::ordered_json;

namespace {

struct Source {
  std::string input;
  int n = 0;
  std::uint64_t seed = 1;
  double sparsity = 0.0;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--input", src.input, "edge-list file, '-' for stdin");
  cmd->add_option("--n", src.n, "vertices of a generated instance");
  cmd->add_option("--seed", src.seed, "generator seed");
  cmd->add_option("--sparsity", src.sparsity, "edge deletion rate of the generator")->check(CLI::Range(0.0, 1.0));
}

Graph load(const Source& src) {
  if (!src.input.empty()) {
    if (src.n != 0) throw UsageError("--input and --n are exclusive");
    if (src.input == "-") return parse_edge_list(std::cin).graph;
    std::ifstream in(src.input);
    if (!in) throw UsageError("cannot read " + src.input);
    try {
      return parse_edge_list(in).graph;
    } catch (const InputError& ex) {
      throw UsageError(src.input + ": " + ex.what());
    }
  }
  if (src.n <= 0) throw UsageError("need --input or --n");
  GeneratorOptions opts;
  opts.sparsity = src.sparsity;
  return generate_random_subquartic(src.n, src.seed, opts);
}

Rational parse_c2(const std::string& s) {
  try {
    Rational c2 = parse_rational(s);
    if (c2 < 0) throw InputError("negative");
    return c2;
  } catch (const std::exception&) {
    throw UsageError("bad --c2 value '" + s + "'");
  }
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + out_path);
  out << text;
}

struct Prepared {
  Graph graph;
  LpSolution sol;
};

/// Solve, restrict to the support, normalize, split into 2VC blocks.
void prepare(const Graph& g, std::vector<Prepared>& out) {
  LpSolution sol = solve_lp(g);
  RestrictResult rr = restrict_to_support(g, sol);
  LpSolution normed = normalize_below_one(rr.graph, rr.solution);
  if (is_two_vertex_connected(rr.graph)) {
    out.push_back({rr.graph, std::move(normed)});
    return;
  }
  for (const auto& block : biconnected_components(rr.graph).blocks) prepare(induced_by_edges(rr.graph, block).graph, out);
}

ordered_json block_json(const Prepared& p) {
  ordered_json j;
  j["edges"] = ordered_json::array();
  for (const auto& e : p.graph.edges()) j["edges"].push_back({e.u, e.v});
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certification laboratory for graph-TSP on subquartic graphs"};
  app.require_subcommand(1, 1);
  std::string out_path;
  Source src;
  std::string method_s = "best", c2_s = "0", root_term_s = "2", format = "json";
  int count = 0, jobs = 1;

  auto* gen = app.add_subcommand("generate", "write a random subquartic 2VC edge list");
  gen->add_option("--n", src.n, "vertices")->required();
  gen->add_option("--seed", src.seed, "generator seed");
  gen->add_option("--sparsity", src.sparsity, "edge deletion rate")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", out_path);

  auto* solve = app.add_subcommand("solve", "optimal LP solution as JSON");
  add_source(solve, src);
  solve->add_option("--out", out_path);

  auto* tree = app.add_subcommand("tree", "greedy DFS tree and classification per block");
  add_source(tree, src);
  tree->add_option("--out", out_path);

  auto* circ = app.add_subcommand("circulate", "one circulation per block");
  add_source(circ, src);
  circ->add_option("--method", method_s)->check(CLI::IsMember({"x", "f", "best", "oracle", "half"}));
  circ->add_option("--c2", c2_s);
  circ->add_option("--out", out_path);

  auto* cert = app.add_subcommand("certify", "full certificate");
  add_source(cert, src);
  cert->add_option("--c2", c2_s);
  cert->add_option("--root-term", root_term_s)->check(CLI::IsMember({"0", "2"}));
  cert->add_option("--out", out_path);

  auto* sw = app.add_subcommand("sweep", "certify a seeded batch of generated instances");
  sw->add_option("--n", src.n)->required();
  sw->add_option("--count", count)->required()->check(CLI::NonNegativeNumber);
  sw->add_option("--seed", src.seed);
  sw->add_option("--sparsity", src.sparsity)->check(CLI::Range(0.0, 1.0));
  sw->add_option("--c2", c2_s);
  sw->add_option("--root-term", root_term_s)->check(CLI::IsMember({"0", "2"}));
  sw->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  sw->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  sw->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      GeneratorOptions opts;
      opts.sparsity = src.sparsity;
      emit(out_path, to_edge_list(generate_random_subquartic(src.n, src.seed, opts)));
      return 0;
    }
    if (solve->parsed()) {
      Graph g = load(src);
      emit(out_path, lp_solution_to_json(g, solve_lp(g)).dump(2) + "\n");
      return 0;
    }
    if (tree->parsed() || circ->parsed()) {
      Graph g = load(src);
      Rational c2 = parse_c2(c2_s);
      Method m = parse_method(method_s);
      std::vector<Prepared> blocks;
      prepare(g, blocks);
      ordered_json j = ordered_json::array();
      for (const auto& p : blocks) {
        ordered_json bj = block_json(p);
        DfsTree t = build_greedy_dfs(p.graph, p.sol, choose_root(p.graph, p.sol));
        VertexClassification cls = classify(p.graph, p.sol, t);
        if (tree->parsed()) {
          bj["tree"] = tree_to_json(t, &cls);
        } else {
          Circulation c;
          switch (m) {
            case Method::X: c = x_circulation(p.graph, p.sol, t, cls); break;
            case Method::F: c = f_circulation(p.graph, p.sol, t, cls, c2); break;
            case Method::Best: c = best_circulation(p.graph, p.sol, t, cls); break;
            case Method::Oracle: c = oracle_min_circulation(t, cls); break;
            case Method::Half: c = half_circulation(t, cls); break;
          }
          bj["circulation"] = circulation_to_json(t, c);
        }
        j.push_back(std::move(bj));
      }
      emit(out_path, ordered_json{{"blocks", std::move(j)}}.dump(2) + "\n");
      return 0;
    }
    CertifyOptions copts;
    copts.c2 = parse_c2(c2_s);
    copts.root_term = parse_rational(root_term_s);
    if (cert->parsed()) {
      Certificate c = certify(load(src), copts);
      emit(out_path, certificate_to_json(c).dump(2) + "\n");
      return c.all_checks_pass() ? 0 : 1;
    }
    SweepOptions sopts;
    sopts.count = count;
    sopts.n = src.n;
    sopts.seed = src.seed;
    sopts.sparsity = src.sparsity;
    sopts.jobs = jobs;
    sopts.certify = copts;
    SweepSummary s = sweep(sopts);
    emit(out_path, format == "csv" ? sweep_to_csv(s) : sweep_to_json(s).dump(2) + "\n");
    return s.failures == 0 ? 0 : 1;
  } catch (const UsageError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const InputError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const InvariantViolation& ex) {
    std::cerr << "invariant " << ex.check() << " failed: " << ex.witness() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
