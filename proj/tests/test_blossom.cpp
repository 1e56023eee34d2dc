#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "hhqec/blossom.hpp"

using namespace hhqec;

namespace {

struct Best {
    int cardinality = -1;
    std::int64_t weight = 0;
};

// Exhaustive search over matchings: vertex v is either left single or paired with a later free vertex.
void search(int v, int n, const std::vector<std::vector<std::int64_t>>& w, std::vector<char>& used, int card,
            std::int64_t weight, bool max_card, Best& best) {
    while (v < n && used[v]) ++v;
    if (v == n) {
        bool better = max_card ? (card > best.cardinality || (card == best.cardinality && weight > best.weight))
                               : weight > best.weight || best.cardinality < 0;
        if (better) best = {card, weight};
        return;
    }
    used[v] = 1;
    search(v + 1, n, w, used, card, weight, max_card, best);
    for (int u = v + 1; u < n; ++u) {
        if (used[u] || w[v][u] == std::numeric_limits<std::int64_t>::min()) continue;
        used[u] = 1;
        search(v + 1, n, w, used, card + 1, weight + w[v][u], max_card, best);
        used[u] = 0;
    }
    used[v] = 0;
}

std::int64_t matching_weight(const std::vector<int>& mate, const std::vector<std::vector<std::int64_t>>& w) {
    std::int64_t total = 0;
    for (int v = 0; v < int(mate.size()); ++v) {
        if (mate[v] > v) total += w[v][mate[v]];
    }
    return total;
}

}  // namespace

TEST(Blossom, SmallKnownCases) {
    EXPECT_EQ(max_weight_matching(0, {}, false), std::vector<int>{});
    EXPECT_EQ(max_weight_matching(2, {{0, 1, 1}}, false), (std::vector<int>{1, 0}));
    // path 0-1-2-3 with a heavy middle edge
    EXPECT_EQ(max_weight_matching(4, {{0, 1, 5}, {1, 2, 11}, {2, 3, 5}}, false), (std::vector<int>{-1, 2, 1, -1}));
    EXPECT_EQ(max_weight_matching(4, {{0, 1, 5}, {1, 2, 11}, {2, 3, 5}}, true), (std::vector<int>{1, 0, 3, 2}));
}

TEST(Blossom, OddCycleNeedsBlossom) {
    // triangle 0-1-2 plus pendant 3 on vertex 0
    auto mate = max_weight_matching(4, {{0, 1, 8}, {1, 2, 9}, {0, 2, 10}, {0, 3, 7}}, false);
    EXPECT_EQ(mate, (std::vector<int>{3, 2, 1, 0}));
}

TEST(Blossom, NestedBlossomsAndExpansion) {
    // Cases exercising S-blossom relabel and T-blossom expansion.
    auto m1 = max_weight_matching(
        9, {{0, 1, 45}, {0, 4, 45}, {1, 2, 50}, {2, 3, 45}, {3, 4, 50}, {0, 5, 30}, {2, 8, 35}, {3, 7, 35}, {4, 6, 26}, {8, 7, 5}},
        false);
    EXPECT_EQ(m1, (std::vector<int>{5, 2, 1, 7, 6, 0, 4, 3, -1}));
    auto m2 = max_weight_matching(
        10, {{0, 1, 45}, {0, 6, 45}, {1, 2, 50}, {2, 3, 45}, {3, 4, 95}, {3, 5, 94}, {4, 5, 94}, {5, 6, 50}, {0, 7, 30}, {2, 9, 35}, {4, 8, 36}, {6, 9, 26}},
        false);
    std::int64_t total = 0;
    const std::vector<WeightedEdge> e2{{0, 1, 45}, {0, 6, 45}, {1, 2, 50}, {2, 3, 45}, {3, 4, 95}, {3, 5, 94},
                                       {4, 5, 94}, {5, 6, 50}, {0, 7, 30}, {2, 9, 35}, {4, 8, 36}, {6, 9, 26}};
    for (const auto& e : e2) total += m2[e.u] == e.v ? e.weight : 0;
    EXPECT_EQ(total, 236);
}

TEST(Blossom, RandomGraphsAgainstExhaustiveSearch) {
    std::mt19937_64 rng(12345);
    const auto none = std::numeric_limits<std::int64_t>::min();
    for (int trial = 0; trial < 600; ++trial) {
        const int n = 2 + int(rng() % 9);
        const double density = 0.3 + 0.7 * double(rng() % 100) / 100.0;
        std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, none));
        std::vector<WeightedEdge> edges;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                if (double(rng() % 1000) / 1000.0 > density) continue;
                const std::int64_t wt = 1 + std::int64_t(rng() % 20);
                w[u][v] = w[v][u] = wt;
                edges.push_back({u, v, wt});
            }
        }
        for (bool max_card : {false, true}) {
            auto mate = max_weight_matching(n, edges, max_card);
            for (int v = 0; v < n; ++v) {
                if (mate[v] >= 0) {
                    ASSERT_EQ(mate[mate[v]], v);
                    ASSERT_NE(w[v][mate[v]], none);
                }
            }
            Best best;
            std::vector<char> used(n, 0);
            search(0, n, w, used, 0, 0, max_card, best);
            ASSERT_EQ(matching_weight(mate, w), best.weight) << "trial " << trial << " max_card " << max_card;
            if (max_card) {
                int card = 0;
                for (int v = 0; v < n; ++v) card += mate[v] > v;
                ASSERT_EQ(card, best.cardinality);
            }
        }
    }
}

TEST(Blossom, MinWeightPerfectOnCompleteGraphs) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 * (1 + int(rng() % 5));
        std::vector<std::vector<std::int64_t>> neg(n, std::vector<std::int64_t>(n));
        std::vector<WeightedEdge> edges;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                const std::int64_t wt = std::int64_t(rng() % 1000);
                neg[u][v] = neg[v][u] = -wt;
                edges.push_back({u, v, wt});
            }
        }
        auto mate = min_weight_perfect_matching(n, edges);
        Best best;
        std::vector<char> used(n, 0);
        search(0, n, neg, used, 0, 0, true, best);
        ASSERT_EQ(-matching_weight(mate, neg), -best.weight);
    }
}

TEST(Blossom, PerfectMatchingInfeasible) {
    EXPECT_THROW(min_weight_perfect_matching(3, {{0, 1, 1}, {1, 2, 1}}), std::runtime_error);
    EXPECT_THROW(min_weight_perfect_matching(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}), std::runtime_error);
}
