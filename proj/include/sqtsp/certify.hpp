#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sqtsp/check.hpp"
#include "sqtsp/circulation.hpp"
#include "sqtsp/dfs_tree.hpp"
#include "sqtsp/errors.hpp"
#include "sqtsp/graph.hpp"
#include "sqtsp/lp_heldkarp.hpp"
#include "sqtsp/rational.hpp"

namespace sqtsp {

struct CertifyOptions {
  /// Added once per 2-vertex-connected block to the tour bound only.
  Rational root_term = 2;
  /// Rounding parameter of the additional parameterized f-circulation.
  Rational c2 = 0;
  /// Exact graph-TSP by enumeration when |E| <= 16.
  bool brute_force = true;
  /// Compare against the fully enumerated LP when a block has n <= 10.
  bool enumeration_audit = true;
  /// Also solve without the x <= 1 box and normalize that solution.
  bool unboxed_normalization_audit = false;
};

/// Per 2-vertex-connected block of the LP support.
struct BlockReport {
  int n = 0, m = 0;
  Rational value, eps;
  int lp_rounds = 0;
  int restrict_iterations = 0;
  int root = 0;
  int expensive = 0;
  int lp_unsatisfied = 0;
  Rational charged_x, charged_f, charged_best, charged_c2, cost_oracle;
  Rational total_x, total_f, total_best;
  Rational payments_x, payments_f;
  int repairs = 0;
  std::string best_method;
  std::optional<Rational> max_cx, max_cf;
  Rational balance;
  bool complete = false;  // every stage ran

  friend bool operator==(const BlockReport&, const BlockReport&) = default;
};

struct Certificate {
  std::string id;
  int n = 0, m = 0;
  Rational value;  // OPT_LP of the input graph
  Rational eps;
  int blocks = 0;
  std::vector<BlockReport> block_reports;
  std::vector<Check> lemma_checks;
  // Charged costs for x, f, best; the oracle's exact minimum.
  Rational cost_x, cost_f, cost_best, cost_oracle;
  Rational payments_x, payments_f;
  int repairs = 0;
  Rational root_term;
  Rational tour_bound;          // with root_term per block
  Rational tour_bound_no_root;  // root_term = 0
  Rational ratio;               // tour_bound / value
  std::optional<int> opt_tsp;

  bool all_checks_pass() const {
    return std::all_of(lemma_checks.begin(), lemma_checks.end(), [](const Check& c) { return c.passed; });
  }

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// (4n/3 + (2/3) c) / ((1 + eps) n) <= 46/33.
inline bool ratio_check(const Rational& n, const Rational& cost, const Rational& eps) {
  if (n <= 0) return false;
  Rational bound = (Rational(4, 3) * n + Rational(2, 3) * cost) / ((1 + eps) * n);
  return bound <= Rational(46, 33);
}

/// Tour bound without root terms over the LP value, against 46/33.
inline bool ratio_check(const Certificate& cert) {
  if (cert.value <= 0) return false;
  return cert.tour_bound_no_root / cert.value <= Rational(46, 33);
}

namespace detail {

inline std::string vstr(const std::vector<Rational>& xs, std::size_t limit = 8) {
  std::string s;
  for (std::size_t i = 0; i < xs.size() && i < limit; ++i) s += (i ? "," : "") + to_string(xs[i]);
  return s;
}

/// LP-solution audits on graph g.
inline void audit_lp(const Graph& g, const LpSolution& sol, CheckList& out) {
  const int n = g.num_vertices();
  auto cut = global_min_cut(g, sol.x);
  out.record("lp.cut_feasible", cut.value >= 2, "min cut " + to_string(cut.value));
  bool boxed = std::all_of(sol.x.begin(), sol.x.end(), [](const Rational& v) { return v >= 0 && v <= 1; });
  out.record("lp.box", boxed, "x=" + vstr(sol.x));
  int support = 0;
  for (const auto& v : sol.x) support += v != 0;
  out.record("lp.support_at_most_2n_minus_1", support <= 2 * n - 1,
             "support " + std::to_string(support) + " > " + std::to_string(2 * n - 1));
  out.record("lp.eps_range", sol.eps >= 0 && sol.eps <= 1, "eps=" + to_string(sol.eps));
  Rational sum(0);
  bool nonneg = true;
  for (const auto& e : sol.excess) {
    sum += e;
    nonneg = nonneg && e >= 0;
  }
  out.record("lp.excess_sum", sum == 2 * sol.eps * n, "sum " + to_string(sum) + " vs 2*eps*n " + to_string(2 * sol.eps * n));
  out.record("lp.excess_nonnegative", nonneg, "excess=" + vstr(sol.excess));
}

inline void record_failure(CheckList& out, const std::string& stage, const std::exception& ex) {
  if (auto* iv = dynamic_cast<const InvariantViolation*>(&ex)) out.record(iv->check(), false, iv->witness());
  else out.record("pipeline." + stage, false, ex.what());
}

/// Tree, classification and circulations on one 2VC block with its LP solution.
inline void certify_block(const Graph& g, const LpSolution& sol, const CertifyOptions& opts, CheckList& out, BlockReport& rep) {
  const int n = g.num_vertices();
  std::string stage = "tree";
  try {
    out.record("input.subquartic_support", is_subquartic(g), "max degree " + std::to_string(g.max_degree()));
    if (!is_subquartic(g)) return;
    rep.root = choose_root(g, sol);
    DfsTree t = build_greedy_dfs(g, sol, rep.root);
    stage = "classify";
    VertexClassification cls = compute_classification(g, sol, t);
    out.merge(audit_tree(g, sol, t, cls));
    rep.expensive = static_cast<int>(cls.expensive_list.size());
    for (int v = 0; v < n; ++v) rep.lp_unsatisfied += cls.lp_unsatisfied(v);
    out.merge(audit_vertex_bounds(sol, cls));
    for (const auto& ev : cls.expensive_list) {
      Rational cx = c_x(ev, sol.excess[ev.vertex]), cf = c_f(ev, sol.excess[ev.vertex], 0);
      if (!rep.max_cx || *rep.max_cx < cx) rep.max_cx = cx;
      if (!rep.max_cf || *rep.max_cf < cf) rep.max_cf = cf;
    }

    // Precondition of the f-circulation: f(x) satisfies every LP-satisfied vertex.
    {
      auto f = f_values(sol, t, 0);
      bool ok = true;
      std::string w;
      for (int v = 0; v < n && ok; ++v)
        if (cls.internal[v] && cls.lp_satisfied[v] && !is_satisfied_by(cls.covers, t, f, v)) {
          ok = false;
          w = "v=" + std::to_string(v);
        }
      out.record("lemma17.lp_satisfied_by_f", ok, w);
    }

    stage = "x_circulation";
    Circulation cx = x_circulation(g, sol, t, cls);
    stage = "f_circulation";
    Circulation cf = f_circulation(g, sol, t, cls, 0);
    Circulation best = best_circulation(cx, cf);
    stage = "oracle";
    Circulation oracle = oracle_min_circulation(t, cls);

    out.record("feasibility.x", cx.feasible);
    out.record("feasibility.f", cf.feasible);
    out.record("feasibility.best", best.feasible);
    out.record("feasibility.oracle", oracle.feasible);

    const Rational nonexp = non_expensive_internal_excess(sol, cls);
    if (cx.repairs == 0)
      out.record("lemma15.x_payments", cx.payment_total <= nonexp / 2,
                 "paid " + to_string(cx.payment_total) + " > " + to_string(nonexp / 2));
    else
      out.record("lemma15.x_payments", true);
    if (cf.repairs == 0)
      out.record("lemma18.f_payments", cf.payment_total <= nonexp, "paid " + to_string(cf.payment_total) + " > " + to_string(nonexp));
    else
      out.record("lemma18.f_payments", true);

    out.record("theorem2.x_cost_within_charge", cx.total_cost <= cx.charged_cost,
               to_string(cx.total_cost) + " > " + to_string(cx.charged_cost));
    out.record("theorem2.f_cost_within_charge", cf.total_cost <= cf.charged_cost,
               to_string(cf.total_cost) + " > " + to_string(cf.charged_cost));

    const Rational nn(n);
    const Rational eps_term = 2 * sol.eps * nn;
    out.record("theorem3.x_bound", cx.charged_cost <= nn / 6 + eps_term,
               "charged " + to_string(cx.charged_cost) + " > n/6+2eps n = " + to_string(nn / 6 + eps_term));
    out.record("theorem4.f_bound", cf.charged_cost <= nn / 8 + eps_term,
               "charged " + to_string(cf.charged_cost) + " > n/8+2eps n = " + to_string(nn / 8 + eps_term));
    out.record("theorem5.best_bound", best.charged_cost <= nn / 11 + eps_term,
               "charged " + to_string(best.charged_cost) + " > n/11+2eps n = " + to_string(nn / 11 + eps_term));
    rep.balance = balance_value(sol, cls);
    out.record("balance.convex_combination", rep.balance <= Rational(2, 11), "value " + to_string(rep.balance));

    bool dom = oracle.total_cost <= cx.total_cost && oracle.total_cost <= cf.total_cost && oracle.total_cost <= best.total_cost;
    out.record("oracle.dominance", dom,
               "oracle " + to_string(oracle.total_cost) + " x " + to_string(cx.total_cost) + " f " + to_string(cf.total_cost));

    // With |E| = n the support is a Hamiltonian cycle and b = 1/2 cannot work.
    if (sol.eps == 0 && g.num_edges() > n) {
      Circulation half = half_circulation(t, cls);
      out.record("lemma6.half_feasible", half.feasible);
      out.record("lemma7.half_zero_cost", half.total_cost == 0, "cost " + to_string(half.total_cost));
    }

    if (opts.c2 != 0) {
      stage = "f_circulation_c2";
      Circulation fc2 = f_circulation(g, sol, t, cls, opts.c2);
      out.record("feasibility.f_c2", fc2.feasible);
      out.record("theorem2.f_c2_cost_within_charge", fc2.total_cost <= fc2.charged_cost);
      rep.charged_c2 = fc2.charged_cost;
      rep.repairs += fc2.repairs;
    }

    rep.charged_x = cx.charged_cost;
    rep.charged_f = cf.charged_cost;
    rep.charged_best = best.charged_cost;
    rep.total_x = cx.total_cost;
    rep.total_f = cf.total_cost;
    rep.total_best = best.total_cost;
    rep.cost_oracle = oracle.total_cost;
    rep.payments_x = cx.payment_total + cx.repair_total;
    rep.payments_f = cf.payment_total + cf.repair_total;
    rep.repairs += cx.repairs + cf.repairs;
    rep.best_method = method_name(*best.chosen);
    rep.complete = true;
  } catch (const std::exception& ex) {
    record_failure(out, stage, ex);
  }
}

/// Solve, restrict, normalize; split into blocks when the support has a cut
/// vertex and recurse on each block.
inline void certify_graph(const Graph& g, const CertifyOptions& opts, CheckList& out, std::vector<BlockReport>& reports,
                          Rational& value, int depth) {
  std::string stage = "solve";
  try {
    LpSolution sol = solve_lp(g);
    value = sol.value;
    audit_lp(g, sol, out);
    stage = "restrict";
    RestrictResult rr = restrict_to_support(g, sol);
    out.record("lp.restrict_value", rr.solution.value == sol.value);
    stage = "normalize";
    NormalizeStats ns;
    LpSolution normed = normalize_below_one(rr.graph, rr.solution, &ns);
    bool norm_ok = normed.value == rr.solution.value &&
                   std::all_of(normed.x.begin(), normed.x.end(), [](const Rational& v) { return v <= 1; }) &&
                   global_min_cut(rr.graph, normed.x).value >= 2;
    out.record("lemma2.normalize", norm_ok, "value " + to_string(normed.value));
    LpSolution work = std::move(normed);
    const Graph& support = rr.graph;
    audit_lp(support, work, out);

    if (opts.unboxed_normalization_audit) {
      stage = "unboxed";
      SolveOptions unboxed;
      unboxed.box = false;
      LpSolution raw = solve_lp(g, unboxed);
      LpSolution fixed = normalize_below_one(g, raw);
      bool ok = raw.value == sol.value && fixed.value == raw.value &&
                std::all_of(fixed.x.begin(), fixed.x.end(), [](const Rational& v) { return v <= 1; }) &&
                global_min_cut(g, fixed.x).value >= 2;
      out.record("lemma2.unboxed_normalize", ok, "unboxed value " + to_string(raw.value) + " boxed " + to_string(sol.value));
    }

    if (!is_two_vertex_connected(support)) {
      stage = "blocks";
      auto dec = biconnected_components(support);
      Rational sum(0);
      for (const auto& block : dec.blocks) {
        Subgraph sub = induced_by_edges(support, block);
        Rational block_value;
        certify_graph(sub.graph, opts, out, reports, block_value, depth + 1);
        sum += block_value;
      }
      out.record("blocks.value_additive", sum == sol.value, "sum " + to_string(sum) + " vs " + to_string(sol.value));
      return;
    }

    if (opts.enumeration_audit && support.num_vertices() <= 10) {
      stage = "enumeration";
      LpSolution full = solve_lp_by_enumeration(support, false);
      out.record("lp.enumeration_optimal", full.value == work.value,
                 "enumerated " + to_string(full.value) + " vs cutting planes " + to_string(work.value));
    }

    BlockReport rep;
    rep.n = support.num_vertices();
    rep.m = support.num_edges();
    rep.value = work.value;
    rep.eps = work.eps;
    rep.lp_rounds = sol.rounds;
    rep.restrict_iterations = rr.iterations;
    certify_block(support, work, opts, out, rep);
    reports.push_back(std::move(rep));
  } catch (const std::exception& ex) {
    record_failure(out, stage, ex);
  }
}

}  // namespace detail

/// Full pipeline on g; failed checks are recorded, never thrown.
inline Certificate certify(const Graph& g, const CertifyOptions& opts = {}) {
  if (g.num_vertices() < 3) throw InputError("certify needs n >= 3");
  if (!is_connected(g)) throw InputError("certify needs a connected graph");
  Certificate cert;
  cert.id = instance_hash(g);
  cert.n = g.num_vertices();
  cert.m = g.num_edges();
  cert.root_term = opts.root_term;
  CheckList checks;
  detail::certify_graph(g, opts, checks, cert.block_reports, cert.value, 0);
  cert.blocks = static_cast<int>(cert.block_reports.size());
  cert.eps = cert.value / cert.n - 1;

  bool complete = cert.blocks > 0;
  for (const auto& b : cert.block_reports) {
    complete = complete && b.complete;
    cert.cost_x += b.charged_x;
    cert.cost_f += b.charged_f;
    cert.cost_best += b.charged_best;
    cert.cost_oracle += b.cost_oracle;
    cert.payments_x += b.payments_x;
    cert.payments_f += b.payments_f;
    cert.repairs += b.repairs;
    Rational base = Rational(4, 3) * b.n + Rational(2, 3) * b.charged_best;
    cert.tour_bound_no_root += base;
    cert.tour_bound += base + Rational(2, 3) * opts.root_term;
  }
  checks.record("pipeline.complete", complete);
  if (complete && cert.value > 0) {
    cert.ratio = cert.tour_bound / cert.value;
    checks.record("theorem6.ratio", ratio_check(cert),
                  "ratio " + to_string(cert.tour_bound_no_root / cert.value) + " > 46/33");
    Rational allowance = Rational(46, 33) + Rational(2, 3) * opts.root_term * cert.blocks / cert.value;
    checks.record("certificate.ratio_with_root_allowance", cert.ratio <= allowance, "ratio " + to_string(cert.ratio));
  }
  if (opts.brute_force && g.num_edges() <= kBruteForceMaxEdges) {
    cert.opt_tsp = brute_force_graph_tsp(g).opt_len;
    if (complete)
      checks.record("tour.bound_dominates_opt", cert.tour_bound >= *cert.opt_tsp,
                    "bound " + to_string(cert.tour_bound) + " < opt " + std::to_string(*cert.opt_tsp));
    checks.record("tour.opt_at_least_lp", Rational(*cert.opt_tsp) >= cert.value);
  }
  cert.lemma_checks = std::move(checks).release();
  return cert;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json certificate_to_json(const Certificate& c) {
  using J = nlohmann::ordered_json;
  auto opt_rat = [](const std::optional<Rational>& r) { return r ? J(to_string(*r)) : J(nullptr); };
  J j;
  j["id"] = c.id;
  j["n"] = c.n;
  j["m"] = c.m;
  j["value"] = to_string(c.value);
  j["eps"] = to_string(c.eps);
  j["blocks"] = c.blocks;
  j["costs"] = {{"x", to_string(c.cost_x)}, {"f", to_string(c.cost_f)}, {"best", to_string(c.cost_best)},
                {"oracle", to_string(c.cost_oracle)}};
  j["payments"] = {{"x", to_string(c.payments_x)}, {"f", to_string(c.payments_f)}};
  j["repairs"] = c.repairs;
  j["root_term"] = to_string(c.root_term);
  j["tour_bound"] = to_string(c.tour_bound);
  j["tour_bound_no_root"] = to_string(c.tour_bound_no_root);
  j["ratio"] = to_string(c.ratio);
  j["opt_tsp"] = c.opt_tsp ? J(*c.opt_tsp) : J(nullptr);
  J blocks = J::array();
  for (const auto& b : c.block_reports) {
    J bj;
    bj["n"] = b.n;
    bj["m"] = b.m;
    bj["value"] = to_string(b.value);
    bj["eps"] = to_string(b.eps);
    bj["lp_rounds"] = b.lp_rounds;
    bj["restrict_iterations"] = b.restrict_iterations;
    bj["root"] = b.root;
    bj["expensive"] = b.expensive;
    bj["lp_unsatisfied"] = b.lp_unsatisfied;
    bj["charged_x"] = to_string(b.charged_x);
    bj["charged_f"] = to_string(b.charged_f);
    bj["charged_best"] = to_string(b.charged_best);
    bj["charged_c2"] = to_string(b.charged_c2);
    bj["cost_oracle"] = to_string(b.cost_oracle);
    bj["total_x"] = to_string(b.total_x);
    bj["total_f"] = to_string(b.total_f);
    bj["total_best"] = to_string(b.total_best);
    bj["payments_x"] = to_string(b.payments_x);
    bj["payments_f"] = to_string(b.payments_f);
    bj["repairs"] = b.repairs;
    bj["best_method"] = b.best_method;
    bj["max_cx"] = opt_rat(b.max_cx);
    bj["max_cf"] = opt_rat(b.max_cf);
    bj["balance"] = to_string(b.balance);
    bj["complete"] = b.complete;
    blocks.push_back(std::move(bj));
  }
  j["block_reports"] = std::move(blocks);
  J checks = J::array();
  for (const auto& ch : c.lemma_checks) checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"witness", ch.witness}});
  j["lemma_checks"] = std::move(checks);
  j["all_checks_pass"] = c.all_checks_pass();
  return j;
}

inline Certificate certificate_from_json(const nlohmann::ordered_json& j) {
  auto rat = [](const nlohmann::ordered_json& v) { return parse_rational(v.get<std::string>()); };
  auto opt_rat = [&](const nlohmann::ordered_json& v) -> std::optional<Rational> {
    if (v.is_null()) return std::nullopt;
    return rat(v);
  };
  try {
    Certificate c;
    c.id = j.at("id").get<std::string>();
    c.n = j.at("n").get<int>();
    c.m = j.at("m").get<int>();
    c.value = rat(j.at("value"));
    c.eps = rat(j.at("eps"));
    c.blocks = j.at("blocks").get<int>();
    c.cost_x = rat(j.at("costs").at("x"));
    c.cost_f = rat(j.at("costs").at("f"));
    c.cost_best = rat(j.at("costs").at("best"));
    c.cost_oracle = rat(j.at("costs").at("oracle"));
    c.payments_x = rat(j.at("payments").at("x"));
    c.payments_f = rat(j.at("payments").at("f"));
    c.repairs = j.at("repairs").get<int>();
    c.root_term = rat(j.at("root_term"));
    c.tour_bound = rat(j.at("tour_bound"));
    c.tour_bound_no_root = rat(j.at("tour_bound_no_root"));
    c.ratio = rat(j.at("ratio"));
    if (!j.at("opt_tsp").is_null()) c.opt_tsp = j.at("opt_tsp").get<int>();
    for (const auto& bj : j.at("block_reports")) {
      BlockReport b;
      b.n = bj.at("n").get<int>();
      b.m = bj.at("m").get<int>();
      b.value = rat(bj.at("value"));
      b.eps = rat(bj.at("eps"));
      b.lp_rounds = bj.at("lp_rounds").get<int>();
      b.restrict_iterations = bj.at("restrict_iterations").get<int>();
      b.root = bj.at("root").get<int>();
      b.expensive = bj.at("expensive").get<int>();
      b.lp_unsatisfied = bj.at("lp_unsatisfied").get<int>();
      b.charged_x = rat(bj.at("charged_x"));
      b.charged_f = rat(bj.at("charged_f"));
      b.charged_best = rat(bj.at("charged_best"));
      b.charged_c2 = rat(bj.at("charged_c2"));
      b.cost_oracle = rat(bj.at("cost_oracle"));
      b.total_x = rat(bj.at("total_x"));
      b.total_f = rat(bj.at("total_f"));
      b.total_best = rat(bj.at("total_best"));
      b.payments_x = rat(bj.at("payments_x"));
      b.payments_f = rat(bj.at("payments_f"));
      b.repairs = bj.at("repairs").get<int>();
      b.best_method = bj.at("best_method").get<std::string>();
      b.max_cx = opt_rat(bj.at("max_cx"));
      b.max_cf = opt_rat(bj.at("max_cf"));
      b.balance = rat(bj.at("balance"));
      b.complete = bj.at("complete").get<bool>();
      c.block_reports.push_back(std::move(b));
    }
    for (const auto& cj : j.at("lemma_checks"))
      c.lemma_checks.push_back({cj.at("name").get<std::string>(), cj.at("passed").get<bool>(), cj.at("witness").get<std::string>()});
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("certificate JSON: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepOptions {
  int count = 0;
  int n = 20;
  std::uint64_t seed = 1;
  double sparsity = 0.0;
  int jobs = 1;
  CertifyOptions certify;
};

struct SweepRow {
  int instance = 0;
  std::uint64_t seed = 0;
  std::optional<Certificate> cert;
  std::string error;  // generator or precondition failure

  bool passed() const { return cert && cert->all_checks_pass(); }
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  int failures = 0;
  int repairs = 0;
  std::optional<Rational> max_ratio, max_cx, max_cf;
};

/// Seed of instance i in a sweep with the given master seed.
inline std::vector<std::uint64_t> sweep_seeds(std::uint64_t seed, int count) {
  std::mt19937_64 master(seed);
  std::vector<std::uint64_t> out(std::max(count, 0));
  for (auto& s : out) s = master();
  return out;
}

inline SweepRow sweep_instance(int i, std::uint64_t seed, const SweepOptions& opts) {
  SweepRow row;
  row.instance = i;
  row.seed = seed;
  try {
    GeneratorOptions gen;
    gen.sparsity = opts.sparsity;
    Graph g = generate_random_subquartic(opts.n, seed, gen);
    row.cert = certify(g, opts.certify);
  } catch (const std::exception& ex) {
    row.error = ex.what();
  }
  return row;
}

inline SweepSummary sweep(const SweepOptions& opts) {
  if (opts.count < 0) throw InputError("sweep: negative count");
  const auto seeds = sweep_seeds(opts.seed, opts.count);
  SweepSummary s;
  s.rows.resize(opts.count);
  const int jobs = std::max(1, std::min(opts.jobs, opts.count));
  if (jobs <= 1) {
    for (int i = 0; i < opts.count; ++i) s.rows[i] = sweep_instance(i, seeds[i], opts);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (int i = next++; i < opts.count; i = next++) s.rows[i] = sweep_instance(i, seeds[i], opts);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& row : s.rows) {
    if (!row.passed()) ++s.failures;
    if (!row.cert) continue;
    s.repairs += row.cert->repairs;
    if (!s.max_ratio || *s.max_ratio < row.cert->ratio) s.max_ratio = row.cert->ratio;
    for (const auto& b : row.cert->block_reports) {
      if (b.max_cx && (!s.max_cx || *s.max_cx < *b.max_cx)) s.max_cx = b.max_cx;
      if (b.max_cf && (!s.max_cf || *s.max_cf < *b.max_cf)) s.max_cf = b.max_cf;
    }
  }
  return s;
}

inline const char* kSweepCsvHeader =
    "instance,seed,n,m,eps,cost_x,cost_f,cost_best,cost_oracle,repairs,tour_bound,ratio,all_checks_pass";

inline std::string sweep_csv_row(const SweepRow& r) {
  std::ostringstream out;
  out << r.instance << ',' << r.seed << ',';
  if (!r.cert) {
    out << ",,,,,,,,,,false";
    return out.str();
  }
  const auto& c = *r.cert;
  out << c.n << ',' << c.m << ',' << to_string(c.eps) << ',' << to_string(c.cost_x) << ',' << to_string(c.cost_f) << ','
      << to_string(c.cost_best) << ',' << to_string(c.cost_oracle) << ',' << c.repairs << ',' << to_string(c.tour_bound) << ','
      << to_string(c.ratio) << ',' << (c.all_checks_pass() ? "true" : "false");
  return out.str();
}

inline std::string sweep_to_csv(const SweepSummary& s) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& r : s.rows) out += sweep_csv_row(r) + "\n";
  return out;
}

inline nlohmann::ordered_json sweep_to_json(const SweepSummary& s) {
  using J = nlohmann::ordered_json;
  auto opt_rat = [](const std::optional<Rational>& r) { return r ? J(to_string(*r)) : J(nullptr); };
  J rows = J::array();
  for (const auto& r : s.rows) {
    J row;
    row["instance"] = r.instance;
    row["seed"] = r.seed;
    if (r.cert) row["certificate"] = certificate_to_json(*r.cert);
    else row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  J j;
  j["rows"] = std::move(rows);
  j["summary"] = {{"count", s.rows.size()}, {"failures", s.failures}, {"repairs", s.repairs},
                  {"max_ratio", opt_rat(s.max_ratio)}, {"max_cx", opt_rat(s.max_cx)}, {"max_cf", opt_rat(s.max_cf)}};
  return j;
}

}  // namespace sqtsp
