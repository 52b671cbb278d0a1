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

using testing::path_graph;
using testing::random_black_pebbling;
using testing::reference_boundaries;
using testing::reference_critical;

BlackPebbling path3() { return BlackPebbling{{{}, {0}, {0, 1}, {1, 2}}}; }

CostModel costs(std::int64_t cb, std::int64_t cr) {
    CostModel cm;
    cm.c_b = cb;
    cm.c_r = cr;
    return cm;
}

// Chain 0..5 pebbled one per round and kept, then two 3-way joins and a final join.
Dag fan_in() {
    return Dag::build(9,
                      {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 6}, {1, 6}, {2, 6}, {3, 7}, {4, 7}, {5, 7},
                       {6, 8}, {7, 8}},
                      3);
}

BlackPebbling fan_in_pebbling() {
    BlackPebbling p{{{}}};
    for (NodeId v = 0; v < 6; ++v) {
        NodeSet next = p.configs.back();
        next.insert(v);
        p.configs.push_back(next);
    }
    p.configs.push_back(NodeSet{0, 1, 2, 3, 4, 5, 6});
    p.configs.push_back(NodeSet{6, 7});
    p.configs.push_back(NodeSet{8});
    return p;
}

TEST(Critical, PathExamples) {
    const Dag g = path_graph(3);
    EXPECT_EQ(critical_set(g, path3(), 1, 3), NodeSet{});
    EXPECT_EQ(critical_set(g, path3(), 2, 3), NodeSet{0});
    const BlackPebbling idle{{{}, {0}, {0}}};
    EXPECT_EQ(critical_set(g, idle, 2, 2), NodeSet{});
}

TEST(Critical, RoundErrors) {
    const Dag g = path_graph(3);
    for (auto [a, b] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {3, 2}, {1, 4}}) {
        try {
            critical_set(g, path3(), a, b);
            FAIL();
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), Errc::RoundOutOfRange);
        }
    }
}

TEST(Critical, TableAndDirectMatchReference) {
    Rng rng(21);
    for (std::uint64_t s = 0; s < 60; ++s) {
        const Dag g = generate(Family::RandomDelta, 2 + s % 7, 1 + s % 3, s);
        const BlackPebbling p = random_black_pebbling(g, 1 + s % 3, rng);
        const CriticalTable table(g, p);
        for (std::size_t a = 1; a <= p.rounds(); ++a)
            for (std::size_t b = a; b <= p.rounds(); ++b) {
                const NodeSet want = reference_critical(g, p, a, b);
                ASSERT_EQ(critical_set(g, p, a, b), want);
                ASSERT_EQ(table.at(a, b), want);
            }
    }
}

TEST(Partition, PathIsOneInterval) {
    const IntervalPartition part = partition_intervals(path_graph(3), path3(), 1, 1);
    EXPECT_EQ(part.boundaries, (std::vector<std::size_t>{0, 3}));
    EXPECT_EQ(part.threshold, 9u);
}

TEST(Partition, FanInSplitsAndMatchesReference) {
    const Dag g = fan_in();
    const BlackPebbling p = fan_in_pebbling();
    ASSERT_TRUE(is_legal_black(g, p));
    for (std::size_t th : {0, 1, 2, 3, 5}) {
        const IntervalPartition part = partition_intervals_with_threshold(g, p, th);
        EXPECT_EQ(part.boundaries, reference_boundaries(g, p, th)) << "threshold " << th;
        if (th <= 2) {
            EXPECT_GE(part.interval_count(), 2u);
        }
    }
}

TEST(Partition, RandomMatchesReference) {
    Rng rng(5);
    for (std::uint64_t s = 0; s < 80; ++s) {
        const Dag g = generate(Family::RandomDelta, 3 + s % 8, 1 + s % 3, s);
        const BlackPebbling p = random_black_pebbling(g, 1 + s % 3, rng);
        for (std::size_t th : {0, 1, 2}) {
            const IntervalPartition part = partition_intervals_with_threshold(g, p, th);
            ASSERT_EQ(part.boundaries, reference_boundaries(g, p, th));
            for (std::size_t iv = 0; iv < part.interval_count(); ++iv)
                EXPECT_EQ(part.critical[iv], reference_critical(g, p, part.boundaries[iv] + 1, part.boundaries[iv + 1]));
        }
    }
}

TEST(Partition, IntervalOf) {
    const IntervalPartition part = partition_intervals_with_threshold(fan_in(), fan_in_pebbling(), 1);
    for (std::size_t j = 1; j <= 9; ++j) {
        const std::size_t iv = part.interval_of(j);
        EXPECT_LT(part.boundaries[iv], j);
        EXPECT_LE(j, part.boundaries[iv + 1]);
    }
}

TEST(Extend, PathThree) {
    const Dag g = path_graph(3);
    const ExtensionPebbling ext = extend_to_redblue(g, path3(), 1, 1, costs(7, 2));
    EXPECT_TRUE(ext.checks.invariants_hold());
    EXPECT_EQ(ext.total_cost, Cost(6));
    EXPECT_EQ(ext.rb.red_budget, 20u);
    for (std::size_t j = 0; j <= 3; ++j) EXPECT_TRUE(ext.rb.configs[j].blue.is_subset_of(path3()[j]));
}

TEST(Extend, SingleIntervalHasNoBlueMoves) {
    Rng rng(3);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Dag g = generate(Family::RandomDelta, 3 + s % 6, 1 + s % 3, s);
        const std::size_t m = 1 + s % 3;
        const BlackPebbling p = random_black_pebbling(g, m, rng);
        const ExtensionPebbling ext = extend_to_redblue(g, p, g.delta(), m, costs(3, 1));
        ASSERT_EQ(ext.partition.interval_count(), 1u);
        std::uint64_t placed = 0, blue = 0, red = 0;
        for (std::size_t j = 1; j <= p.rounds(); ++j) {
            placed += p.placed(j).size();
            const Moves mv = moves(g, ext.rb, j);
            blue += mv.blue;
            red += mv.red;
        }
        EXPECT_EQ(blue, 0u);
        EXPECT_EQ(red, placed);
        EXPECT_EQ(ext.total_cost, Cost(static_cast<std::int64_t>(placed)));
    }
}

TEST(Extend, Errors) {
    const Dag g = path_graph(3);
    try {
        extend_to_redblue(g, BlackPebbling{{{}, {1}}}, 1, 1, costs(1, 1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::IllegalPebbling);
    }
    const Dag two = build_dag(2, {});
    try {
        extend_to_redblue(two, BlackPebbling{{{}, {0, 1}}}, 1, 1, costs(1, 1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::StepTooWide);
    }
}

void check_forced(const Dag &g, const BlackPebbling &p, std::size_t m, std::size_t th, const CostModel &cm) {
    const ExtensionPebbling ext =
        extend_with_partition(g, p, g.delta(), m, cm, partition_intervals_with_threshold(g, p, th));
    ASSERT_TRUE(ext.checks.legal);
    ASSERT_TRUE(ext.checks.successful);
    EXPECT_TRUE(ext.checks.invariants_hold());
    EXPECT_EQ(ext.checks.containment_violations, 0u);
    EXPECT_EQ(ext.checks.cost_bound_violations, 0u);
    Cost sum{0};
    for (const Cost &c : ext.interval_costs) sum += c;
    EXPECT_EQ(sum, ext.total_cost);
    EXPECT_EQ(ext.total_cost, cost_redblue(g, ext.rb, cm));
    // R_old is empty at every boundary
    for (std::size_t b : ext.partition.boundaries) EXPECT_TRUE(ext.r_old[b].empty());
    // blue pebbles are never dropped
    for (std::size_t j = 1; j <= p.rounds(); ++j)
        EXPECT_TRUE(ext.rb.configs[j - 1].blue.is_subset_of(ext.rb.configs[j].blue));
}

TEST(Extend, ForcedIntervalsOnFanIn) {
    const Dag g = fan_in();
    for (std::size_t th : {0, 1, 2}) check_forced(g, fan_in_pebbling(), 1, th, costs(4, 1));
    const ExtensionPebbling ext = extend_with_partition(g, fan_in_pebbling(), 3, 1, costs(4, 1),
                                                        partition_intervals_with_threshold(g, fan_in_pebbling(), 1));
    EXPECT_FALSE(ext.writes.empty());
}

TEST(Extend, ForcedIntervalsOnRandomInstances) {
    Rng rng(17);
    for (std::uint64_t s = 0; s < 150; ++s) {
        const Dag g = generate(Family::RandomDelta, 3 + s % 8, 1 + s % 3, s);
        const std::size_t m = 1 + s % 3;
        const BlackPebbling p = random_black_pebbling(g, m, rng);
        for (std::size_t th : {0, 1, 3}) check_forced(g, p, m, th, costs(1 + s % 4, 1 + s % 2));
    }
}

// A held pebble may be neither red nor blue only while it waits for a later
// boundary that recomputes it from red predecessors instead of fetching it.
TEST(Extend, UncoveredPebblesAreRecomputedLater) {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const Dag g = generate(Family::RandomDelta, 4 + s % 8, 1 + s % 3, s);
        const BlackPebbling p = greedy_black_pebbling(g);
        for (std::size_t th : {0, 1, 9}) {
            const ExtensionPebbling ext =
                extend_with_partition(g, p, g.delta(), 1, costs(1, 1), partition_intervals_with_threshold(g, p, th));
            EXPECT_LE(ext.checks.max_red, extension_budget(g.delta(), 1));
            std::size_t uncovered = 0;
            for (std::size_t j = 0; j <= p.rounds(); ++j) {
                const RBConfig &c = ext.rb.configs[j];
                for (NodeId v : p[j] - (c.blue | c.red)) {
                    ++uncovered;
                    bool recomputed = false;
                    for (std::size_t b = j + 1; b <= p.rounds() && !recomputed; ++b) {
                        const NodeSet &prev = ext.rb.configs[b - 1].red;
                        recomputed = ext.rb.configs[b].red.contains(v) && !prev.contains(v) &&
                                     !p.placed(b).contains(v) && detail::preds_within(g, v, prev);
                    }
                    EXPECT_TRUE(recomputed) << "seed " << s << " round " << j << " node " << v;
                }
            }
            EXPECT_EQ(uncovered > 0, ext.checks.k_extension_violations > 0);
            if (ext.partition.interval_count() == 1) {
                EXPECT_EQ(ext.checks.k_extension_violations, 0u);
            }
        }
    }
}

TEST(Extend, BoundsTheOracleOnTinyGraphs) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dag g = generate(Family::RandomDelta, 3 + s % 3, 2, s);
        const BlackPebbling p = greedy_black_pebbling(g);
        const CostModel cm = costs(2, 1);
        const ExtensionPebbling ext = extend_to_redblue(g, p, g.delta(), 1, cm);
        EXPECT_LE(rbcost_oracle(g, extension_budget(g.delta(), 1), cm), ext.total_cost);
    }
}

}  // namespace
}  // namespace rbpebble
