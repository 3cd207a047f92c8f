#include <gtest/gtest.h>

#include <random>

#include "sqtsp/mincut.hpp"
#include "sqtsp/rational.hpp"

using namespace sqtsp;

namespace {

// Exhaustive minimum over all proper subsets containing vertex 0.
template <class W>
W brute_min_cut(int n, const std::vector<WeightedEdge<W>>& edges) {
  W best = -1;
  for (unsigned mask = 1; mask + 1 < (1u << n); mask += 2) {
    W c = 0;
    for (const auto& e : edges)
      if (((mask >> e.u) & 1) != ((mask >> e.v) & 1)) c += e.weight;
    if (best < 0 || c < best) best = c;
  }
  return best;
}

}  // namespace

TEST(StoerWagner, TwoTrianglesJoinedByLightEdge) {
  std::vector<WeightedEdge<long>> e{{0, 1, 3}, {1, 2, 3}, {0, 2, 3}, {3, 4, 3}, {4, 5, 3}, {3, 5, 3}, {2, 3, 1}};
  auto r = stoer_wagner_min_cut<long>(6, e);
  EXPECT_EQ(r.value, 1);
  std::vector<int> left{0, 1, 2}, right{3, 4, 5};
  EXPECT_TRUE(r.side == left || r.side == right);
}

TEST(StoerWagner, MatchesBruteForceOnRandomRationals) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    std::vector<WeightedEdge<Rational>> e;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3) e.push_back({u, v, rat(static_cast<long>(rng() % 7), static_cast<long>(1 + rng() % 4))});
    auto r = stoer_wagner_min_cut<Rational>(n, e);
    EXPECT_EQ(r.value, brute_min_cut<Rational>(n, e));
    std::vector<char> in(n, 0);
    for (int v : r.side) in[v] = 1;
    ASSERT_FALSE(r.side.empty());
    ASSERT_LT(r.side.size(), static_cast<std::size_t>(n));
    Rational side_value(0);
    for (const auto& x : e)
      if (in[x.u] != in[x.v]) side_value += x.weight;
    EXPECT_EQ(side_value, r.value);
  }
}

TEST(MinStCut, SeparatesTerminals) {
  std::vector<WeightedEdge<long>> e{{0, 1, 2}, {1, 3, 1}, {0, 2, 1}, {2, 3, 2}, {1, 2, 5}};
  auto r = min_st_cut<long>(4, e, 0, 3);
  EXPECT_EQ(r.value, 3);
  EXPECT_EQ(r.side, std::vector<int>{0});  // both arcs out of 0 saturate
  EXPECT_THROW(min_st_cut<long>(4, e, 1, 1), InputError);
}
