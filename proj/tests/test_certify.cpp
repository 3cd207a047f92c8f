#include <gtest/gtest.h>

#include <fstream>

#include "sqtsp/certify.hpp"

using namespace sqtsp;

namespace {

Graph load(const std::string& name) {
  std::ifstream in(std::string(SQTSP_TEST_DATA) + "/" + name);
  return parse_edge_list(in).graph;
}

std::string failures(const Certificate& c) {
  std::string s;
  for (const auto& ch : c.lemma_checks)
    if (!ch.passed) s += ch.name + " [" + ch.witness + "] ";
  return s;
}

}  // namespace

TEST(Certify, CycleSix) {
  CertifyOptions o;
  o.root_term = 0;
  Certificate c = certify(cycle_graph(6), o);
  EXPECT_TRUE(c.all_checks_pass()) << failures(c);
  EXPECT_EQ(c.value, 6);
  EXPECT_EQ(c.eps, 0);
  EXPECT_EQ(c.blocks, 1);
  EXPECT_EQ(c.cost_best, 0);
  EXPECT_EQ(c.tour_bound, 8);
  EXPECT_EQ(c.ratio, Rational(4, 3));
  EXPECT_EQ(c.opt_tsp, 6);
}

TEST(Certify, RootTermOnlyMovesTheTourBound) {
  Certificate a = certify(cycle_graph(9), {.root_term = 0});
  Certificate b = certify(cycle_graph(9), {.root_term = 2});
  EXPECT_EQ(b.tour_bound - a.tour_bound, Rational(4, 3));
  EXPECT_EQ(a.tour_bound_no_root, b.tour_bound_no_root);
  EXPECT_EQ(a.cost_best, b.cost_best);
}

TEST(Certify, CutVertexSplitsIntoBlocks) {
  Certificate c = certify(load("bowtie.txt"));
  EXPECT_TRUE(c.all_checks_pass()) << failures(c);
  EXPECT_EQ(c.blocks, 2);
  EXPECT_EQ(c.value, 6);
  ASSERT_EQ(c.block_reports.size(), 2u);
  EXPECT_EQ(c.block_reports[0].n + c.block_reports[1].n, 6);
  EXPECT_EQ(c.opt_tsp, 6);
  EXPECT_GE(c.tour_bound, 6);
}

TEST(Certify, FractionalInstance) {
  Certificate c = certify(load("frac12.txt"));
  EXPECT_TRUE(c.all_checks_pass()) << failures(c);
  EXPECT_EQ(c.value, Rational(25, 2));
  EXPECT_EQ(c.eps, Rational(1, 24));
  EXPECT_FALSE(c.opt_tsp.has_value());
  EXPECT_LE(c.tour_bound_no_root / c.value, Rational(46, 33));
}

TEST(Certify, SmallInstancesAgainstBruteForce) {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 12 && seed < 400; ++seed) {
    Graph g = generate_random_subquartic(8, seed, {0.8});
    if (g.num_edges() > kBruteForceMaxEdges) continue;
    Certificate c = certify(g);
    ASSERT_TRUE(c.opt_tsp.has_value());
    EXPECT_TRUE(c.all_checks_pass()) << failures(c);
    EXPECT_LE(*c.opt_tsp, c.tour_bound);
    EXPECT_GE(Rational(*c.opt_tsp), c.value);
    ++checked;
  }
  EXPECT_EQ(checked, 12);
}

TEST(Certify, FrozenUnsatisfiedInstance) {
  Certificate c = certify(load("unsat11.txt"));
  EXPECT_TRUE(c.all_checks_pass()) << failures(c);
  EXPECT_EQ(c.value, 12);
  EXPECT_EQ(c.opt_tsp, 12);  // tests/oracles/lp_and_tsp.py
  ASSERT_EQ(c.blocks, 1);
  EXPECT_EQ(c.block_reports[0].lp_unsatisfied, 1);
  EXPECT_GT(c.payments_x, 0);
}

TEST(Certify, Preconditions) {
  EXPECT_THROW(certify(Graph(4, {{0, 1}, {2, 3}})), InputError);
  EXPECT_THROW(certify(path_graph(2)), InputError);
}

TEST(Certify, FailuresAreRecordedNotThrown) {
  // A bridge makes the LP infeasible; the pipeline reports it.
  Certificate c = certify(path_graph(4));
  EXPECT_FALSE(c.all_checks_pass());
  bool named = false;
  for (const auto& ch : c.lemma_checks) named = named || (!ch.passed && ch.name.rfind("pipeline.", 0) == 0);
  EXPECT_TRUE(named);
}

TEST(Certify, UnboxedNormalizationAudit) {
  CertifyOptions o;
  o.unboxed_normalization_audit = true;
  Certificate c = certify(load("frac12.txt"), o);
  EXPECT_TRUE(c.all_checks_pass()) << failures(c);
  bool seen = false;
  for (const auto& ch : c.lemma_checks) seen = seen || ch.name == "lemma2.unboxed_normalize";
  EXPECT_TRUE(seen);
}

TEST(RatioCheck, Boundary) {
  EXPECT_TRUE(ratio_check(Rational(11), Rational(1), Rational(0)));
  EXPECT_FALSE(ratio_check(Rational(11), Rational(1) + Rational(1, 1000), Rational(0)));
  EXPECT_TRUE(ratio_check(Rational(33), Rational(0), Rational(0)));
  EXPECT_FALSE(ratio_check(Rational(0), Rational(0), Rational(0)));
}

TEST(CertificateJson, RoundTrip) {
  for (const char* name : {"frac12.txt", "bowtie.txt", "c6.txt"}) {
    Certificate c = certify(load(name));
    auto text = certificate_to_json(c).dump();
    Certificate back = certificate_from_json(nlohmann::ordered_json::parse(text));
    EXPECT_EQ(back, c) << name;
    EXPECT_EQ(certificate_to_json(back).dump(), text);
  }
  EXPECT_THROW(certificate_from_json(nlohmann::ordered_json::parse("{\"id\":1}")), InputError);
}

TEST(Sweep, CsvShapeAndDeterminism) {
  SweepOptions o;
  o.count = 6;
  o.n = 12;
  o.seed = 9;
  o.sparsity = 0.3;
  std::string a = sweep_to_csv(sweep(o));
  std::string b = sweep_to_csv(sweep(o));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 7);
  o.jobs = 3;
  EXPECT_EQ(sweep_to_csv(sweep(o)), a);
  o.seed = 10;
  EXPECT_NE(sweep_to_csv(sweep(o)), a);
}

TEST(Sweep, GeneratorFailureIsARow) {
  SweepOptions o;
  o.count = 2;
  o.n = 3;  // below the generator minimum
  SweepSummary s = sweep(o);
  EXPECT_EQ(s.failures, 2);
  EXPECT_FALSE(s.rows[0].error.empty());
  EXPECT_NE(sweep_csv_row(s.rows[0]).find(",false"), std::string::npos);
}

TEST(RatioCheck, EqualityAtThirtyThree) { EXPECT_TRUE(ratio_check(Rational(33), Rational(3), Rational(0))); }

TEST(Certify, GeneratedFiftyVertexInstance) {
  CertifyOptions o;
  o.root_term = 0;
  Certificate c = certify(generate_random_subquartic(50, 3), o);
  EXPECT_TRUE(c.all_checks_pass()) << failures(c);
  EXPECT_LE(c.ratio, Rational(46, 33));
}

TEST(Sweep, EmptyAndSingleInstance) {
  SweepOptions o;
  o.count = 0;
  o.n = 6;
  SweepSummary empty = sweep(o);
  EXPECT_TRUE(empty.rows.empty());
  EXPECT_EQ(sweep_to_csv(empty), std::string(kSweepCsvHeader) + "\n");
  o.count = 1;
  o.seed = 2;
  SweepSummary one = sweep(o);
  ASSERT_EQ(one.rows.size(), 1u);
  ASSERT_TRUE(one.rows[0].cert.has_value());
  Certificate direct = certify(generate_random_subquartic(6, sweep_seeds(2, 1)[0]), o.certify);
  EXPECT_EQ(*one.rows[0].cert, direct);
}
