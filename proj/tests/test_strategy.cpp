/*
Copyright 2026 The rbpebble Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


#include <gtest/gtest.h>

#include "test_support.hpp"

namespace rbpebble {
namespace {

using testing::diamond;
using testing::path_graph;

CostModel costs(std::int64_t cb, std::int64_t cr, std::size_t cache = 0, unsigned n = 8) {
    CostModel cm;
    cm.c_b = cb;
    cm.c_r = cr;
    cm.cache_words = cache;
    cm.width_bits = n;
    return cm;
}

TEST(GreedyBlack, LegalAndSuccessful) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Dag g = generate(Family::RandomDelta, 2 + s % 9, 1 + s % 3, s);
        for (bool keep : {false, true}) {
            const BlackPebbling p = greedy_black_pebbling(g, keep);
            EXPECT_TRUE(is_legal_black(g, p)) << s;
            EXPECT_TRUE(is_successful_black(g, p)) << s;
            EXPECT_EQ(p.rounds(), g.node_count());
        }
    }
}

TEST(GreedyBlack, Path) {
    const BlackPebbling p = greedy_black_pebbling(path_graph(3));
    // a pebble leaves in the round its last successor is placed
    EXPECT_EQ(p.configs, (std::vector<NodeSet>{{}, {0}, {1}, {2}}));
    // keep_all: 1 + 2 + ... + n pebbles in total
    EXPECT_EQ(cumulative_black_cost(greedy_black_pebbling(path_graph(5), true)), 15u);
}

TEST(GreedyKeepHot, LegalWithinTheCache) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const Dag g = generate(Family::RandomDelta, 3 + s % 10, 2 + s % 2, s);
        for (std::size_t m = testing::max_indegree(g); m <= testing::max_indegree(g) + 2; ++m) {
            const RedBluePebbling rb = greedy_keep_hot(g, m);
            EXPECT_EQ(rb.red_budget, m);
            EXPECT_LE(peak_red(rb), m);
            EXPECT_TRUE(is_legal_redblue(g, rb)) << "seed " << s << " m " << m;
            EXPECT_TRUE(is_successful_redblue(g, rb)) << "seed " << s << " m " << m;
        }
    }
}

TEST(GreedyKeepHot, RoomyCacheNeverTouchesMemory) {
    const Dag g = generate(Family::RandomDelta, 8, 2, 3);
    const RedBluePebbling rb = greedy_keep_hot(g, 8);
    EXPECT_EQ(cost_redblue(g, rb, costs(1, 0)), Cost(0));
    EXPECT_EQ(cost_redblue(g, rb, costs(0, 1)), Cost(8));
}

TEST(GreedyKeepHot, DiamondEvictsTheDeadLabel) {
    // 0; 0,1; 1,2 (0 is dead once 2 is placed); 3
    const RedBluePebbling rb = greedy_keep_hot(diamond(), 2);
    ASSERT_TRUE(is_legal_redblue(diamond(), rb));
    EXPECT_EQ(rb.rounds(), 4u);
    EXPECT_EQ(cost_redblue(diamond(), rb, costs(1, 0)), Cost(0));
    EXPECT_EQ(cost_redblue(diamond(), rb, costs(0, 1)), Cost(4));
}

TEST(GreedyKeepHot, CacheBelowIndegree) {
    try {
        greedy_keep_hot(diamond(), 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::BudgetExceedsCache);
    }
}

TEST(GreedyKeepHot, WritesLabelsThatAreNeededLater) {
    // 0 feeds 4 at the end, but 1 and 2 must share the two words with it
    const Dag g = build_dag(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {0, 4}, {3, 4}});
    const RedBluePebbling rb = greedy_keep_hot(g, 2);
    ASSERT_TRUE(is_legal_redblue(g, rb));
    ASSERT_TRUE(is_successful_redblue(g, rb));
    EXPECT_GT(cost_redblue(g, rb, costs(1, 0)), Cost(0));
    EXPECT_GE(cost_redblue(g, rb, costs(3, 1)), rbcost_oracle(g, 2, costs(3, 1)));
}

TEST(AllRedIfFits, UsesTheCacheOrRefuses) {
    const Dag g = path_graph(6);
    const RedBluePebbling rb = all_red_if_fits(g, 64, costs(1, 1, 64));
    EXPECT_EQ(rb.red_budget, 64u);
    EXPECT_TRUE(is_legal_redblue(g, rb));
    EXPECT_TRUE(is_successful_redblue(g, rb));
    try {
        all_red_if_fits(testing::complete_dag(5), 2, costs(1, 1, 2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::BudgetExceedsCache);
    }
}

TEST(Strategy, Parse) {
    EXPECT_EQ(parse_strategy("greedy_keep_hot"), Strategy::GreedyKeepHot);
    EXPECT_EQ(parse_strategy("all_red_if_fits"), Strategy::AllRedIfFits);
    EXPECT_FALSE(parse_strategy("lru").has_value());
    EXPECT_FALSE(parse_strategy("").has_value());
}

TEST(Theorem1, PathOfThree) {
    const Theorem1Report r = check_theorem1(path_graph(3), 8, 1, 1, 1, costs(4, 1));
    EXPECT_EQ(r.rbcost, Cost(3));
    EXPECT_EQ(r.rhs, Cost(3, 40) - Cost(2));
    ASSERT_TRUE(r.lhs.has_value());
    EXPECT_GE(*r.lhs, r.rhs);
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_TRUE(r.sandwich_holds);
}

TEST(Theorem1, FreeMovesGiveAZeroBound) {
    const Theorem1Report r = check_theorem1(diamond(), 8, 2, 2, 2, costs(0, 0));
    EXPECT_EQ(r.rhs, Cost(0));
    EXPECT_EQ(r.rbcost, Cost(0));
    EXPECT_EQ(r.verdict, Verdict::Holds);
}

TEST(Theorem1, VacuousWhenNoStrategyFits) {
    // cache of one word cannot hold both predecessors of 3
    const Theorem1Report r = check_theorem1(diamond(), 8, 2, 1, 2, costs(1, 1));
    EXPECT_FALSE(r.lhs.has_value());
    EXPECT_EQ(r.verdict, Verdict::Vacuous);
    EXPECT_STREQ(verdict_name(r.verdict), "vacuous");
}

}  // namespace
}  // namespace rbpebble
