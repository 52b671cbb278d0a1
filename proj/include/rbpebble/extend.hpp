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

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbpebble/common.hpp"
#include "rbpebble/graph.hpp"
#include "rbpebble/pebble.hpp"

namespace rbpebble {

/**
 * Critical(t1, t2): parents of nodes placed in rounds t1..t2 that were not
 * themselves placed earlier inside the window.
 */
inline NodeSet critical_set(const Dag &g, const BlackPebbling &p, std::size_t t1, std::size_t t2) {
    if (t1 == 0 || t1 > t2 || t2 > p.rounds())
        throw Error(Errc::RoundOutOfRange, "Critical(" + std::to_string(t1) + ", " + std::to_string(t2) +
                                               ") outside 0 < t1 <= t2 <= " + std::to_string(p.rounds()));
    NodeSet crit;
    NodeSet placed_in_window;
    for (std::size_t i = t1; i <= t2; ++i) {
        const NodeSet fresh = p.placed(i);
        crit |= g.pred_of(fresh) - placed_in_window;
        placed_in_window |= fresh;
    }
    return crit;
}

/// All Critical(j, T) for 1 <= j <= T <= t, built row by row in O(t^2) set operations.
class CriticalTable {
  public:
    CriticalTable(const Dag &g, const BlackPebbling &p) : t_(p.rounds()), rows_(t_ + 1) {
        std::vector<NodeSet> placed(t_ + 1), parents(t_ + 1);
        for (std::size_t i = 1; i <= t_; ++i) {
            placed[i] = p.placed(i);
            parents[i] = g.pred_of(placed[i]);
        }
        for (std::size_t j = 1; j <= t_; ++j) {
            rows_[j].resize(t_ + 1);
            NodeSet crit, window;
            for (std::size_t i = j; i <= t_; ++i) {
                crit |= parents[i] - window;
                window |= placed[i];
                rows_[j][i] = crit;
            }
        }
    }

    const NodeSet &at(std::size_t t1, std::size_t t2) const {
        if (t1 == 0 || t1 > t2 || t2 > t_) throw Error(Errc::RoundOutOfRange, "critical table lookup");
        return rows_[t1][t2];
    }

    std::size_t rounds() const { return t_; }

  private:
    std::size_t t_;
    std::vector<std::vector<NodeSet>> rows_;
};

/// Boundaries t_0 = 0 < ... < t_k = t; critical[i] = Critical(t_i + 1, t_{i+1}).
struct IntervalPartition {
    std::vector<std::size_t> boundaries;
    std::vector<NodeSet> critical;
    std::size_t threshold = 0;

    std::size_t interval_count() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }

    /// Index of the interval (t_i, t_{i+1}] containing round j >= 1.
    std::size_t interval_of(std::size_t j) const {
        auto it = std::lower_bound(boundaries.begin() + 1, boundaries.end(), j);
        return static_cast<std::size_t>(it - boundaries.begin()) - 1;
    }
};

namespace detail {

inline IntervalPartition partition_from_table(const CriticalTable &table, std::size_t threshold) {
    const std::size_t t = table.rounds();
    IntervalPartition part;
    part.threshold = threshold;
    part.boundaries.push_back(0);
    std::size_t prev = 0;
    while (prev < t) {
        std::size_t next = t;
        for (std::size_t T = prev + 1; T <= t && next == t; ++T)
            for (std::size_t j = prev + 1; j < T; ++j)
                if (table.at(j, T).size() > threshold) {
                    next = T;
                    break;
                }
        part.boundaries.push_back(next);
        part.critical.push_back(table.at(prev + 1, next));
        prev = next;
    }
    return part;
}

}  // namespace detail

/**
 * Left-to-right partition: each boundary is the least round T after the
 * previous boundary t_i such that |Critical(j, T)| > threshold for some
 * t_i < j < T; when no such T exists the interval runs to t.
 */
inline IntervalPartition partition_intervals_with_threshold(const Dag &g, const BlackPebbling &p,
                                                            std::size_t threshold) {
    return detail::partition_from_table(CriticalTable(g, p), threshold);
}

inline std::size_t partition_threshold(std::size_t delta, std::size_t m) { return (10 * delta - 1) * m; }

inline IntervalPartition partition_intervals(const Dag &g, const BlackPebbling &p, std::size_t delta,
                                             std::size_t m) {
    return partition_intervals_with_threshold(g, p, partition_threshold(delta, m));
}

/// A red-to-blue write at `round`, charged to the interval whose fetch consumes it.
struct BlueWrite {
    NodeId node;
    std::size_t round;
    std::size_t charged_interval;
};

struct ExtensionChecks {
    bool legal = false;
    bool successful = false;
    std::size_t critical_cap_violations = 0;  // |Critical(j, t_{i+1})| > 10 delta m
    std::size_t r_old_cap_violations = 0;     // |R_old_j| > 10 delta m
    std::size_t containment_violations = 0;   // needed in-interval placements missing from R_old_j
    std::size_t cost_bound_violations = 0;    // interval cost above 20 delta m c_b + c_r sum |P_j \ P_{j-1}|
    std::size_t k_extension_violations = 0;   // rounds with P_j not inside B_j u R_j
    std::size_t max_critical = 0;
    std::size_t max_r_old = 0;
    std::size_t max_red = 0;
    std::size_t max_slack = 0;  // max |(B_j u R_j) \ P_j|

    bool invariants_hold() const {
        return legal && successful && critical_cap_violations == 0 && r_old_cap_violations == 0 &&
               containment_violations == 0 && cost_bound_violations == 0;
    }
};

struct ExtensionPebbling {
    RedBluePebbling rb;
    IntervalPartition partition;
    std::vector<NodeSet> r_old;
    std::vector<NodeSet> r_move;
    std::vector<NodeSet> r_fresh;
    std::vector<BlueWrite> writes;
    std::vector<Cost> interval_costs;
    std::vector<Cost> interval_bounds;
    Cost total_cost{0};
    ExtensionChecks checks;
};

/// Red budget of the extension pebbling.
inline std::size_t extension_budget(std::size_t delta, std::size_t m) { return 20 * delta * m; }

/**
 * Builds the red-blue extension of a legal black pebbling over a given
 * partition and records every invariant the construction is supposed to keep.
 *
 * For interval (a, b] and round a < j <= b the red set is
 *   R_old_j   = (R_old_{j-1} u (P_j \ P_{j-1})) n Critical(j+1, b)   (empty at a and b)
 *   R_move_j  = Critical(j+1, end(j+1)) \ R_old_j
 *   R_fresh_j = P_j \ P_{j-1}
 * so R_b already holds Critical(b+1, t_{i+2}) for the next interval. A node of
 * that set missing from R_{b-1} is fetched at round b; it is written blue the
 * round after its last placement unless already blue or computable from R_{b-1}.
 */
inline ExtensionPebbling extend_with_partition(const Dag &g, const BlackPebbling &p, std::size_t delta,
                                               std::size_t m, const CostModel &cm, IntervalPartition part) {
    if (auto why = black_violation(g, p)) throw Error(Errc::IllegalPebbling, *why);
    const std::size_t t = p.rounds();
    for (std::size_t i = 1; i <= t; ++i)
        if (p.placed(i).size() > m)
            throw Error(Errc::StepTooWide, "round " + std::to_string(i) + " places " +
                                               std::to_string(p.placed(i).size()) + " > m pebbles");

    const CriticalTable table(g, p);
    const std::size_t k = part.interval_count();
    const std::size_t cap = 10 * delta * m;

    ExtensionPebbling ext;
    ext.rb.red_budget = extension_budget(delta, m);
    ext.rb.configs.assign(t + 1, RBConfig{});
    ext.r_old.assign(t + 1, NodeSet{});
    ext.r_move.assign(t + 1, NodeSet{});
    ext.r_fresh.assign(t + 1, NodeSet{});

    std::vector<NodeSet> fresh(t + 1);
    for (std::size_t j = 1; j <= t; ++j) fresh[j] = p.placed(j);

    // Red sets, interval by interval.
    for (std::size_t iv = 0; iv < k; ++iv) {
        const std::size_t a = part.boundaries[iv];
        const std::size_t b = part.boundaries[iv + 1];
        NodeSet old;
        for (std::size_t j = a + 1; j <= b; ++j) {
            NodeSet needed;  // Critical(j+1, end of the interval containing j+1)
            if (j < b) {
                old = (old | fresh[j]) & table.at(j + 1, b);
                needed = table.at(j + 1, b);
            } else {
                old = NodeSet{};
                if (iv + 1 < k) needed = table.at(b + 1, part.boundaries[iv + 2]);
            }
            ext.r_old[j] = old;
            ext.r_move[j] = needed - old;
            ext.r_fresh[j] = fresh[j];
            ext.rb.configs[j].red = old | ext.r_move[j] | fresh[j];
        }
    }

    // Blue writes for fetches at each inner boundary.
    std::vector<NodeSet> writes_at(t + 1);
    std::vector<std::optional<std::size_t>> write_interval(g.node_count());
    NodeSet written;
    for (std::size_t iv = 1; iv < k; ++iv) {
        const std::size_t b = part.boundaries[iv];
        const NodeSet &prev_red = ext.rb.configs[b - 1].red;
        for (NodeId v : ext.rb.configs[b].red - prev_red) {
            if (fresh[b].contains(v) || detail::preds_within(g, v, prev_red) || written.contains(v)) continue;
            std::size_t c = b - 1;
            while (!fresh[c].contains(v)) --c;  // v in P_{b-1}, so its last placement exists
            writes_at[c + 1].insert(v);
            written.insert(v);
            ext.writes.push_back({v, c + 1, iv});
        }
    }
    NodeSet blue;
    for (std::size_t j = 1; j <= t; ++j) {
        blue |= writes_at[j];
        ext.rb.configs[j].blue = blue;
    }
    ext.partition = std::move(part);

    // Cost per interval: computations to their own interval, boundary fetches and
    // the writes feeding them to the interval that starts at that boundary.
    ext.interval_costs.assign(k, Cost{0});
    ext.interval_bounds.assign(k, Cost{0});
    for (std::size_t j = 1; j <= t; ++j) {
        const std::size_t iv = ext.partition.interval_of(j);
        const RBConfig &prev = ext.rb.configs[j - 1];
        const RBConfig &cur = ext.rb.configs[j];
        for (NodeId v : cur.red - prev.red) {
            const bool is_fetch = !fresh[j].contains(v);
            const std::size_t charged = is_fetch ? iv + 1 : iv;
            const Cost c = detail::preds_within(g, v, prev.red) ? cm.c_r : cm.c_b;
            ext.interval_costs[std::min(charged, k - 1)] += c;
        }
        ext.interval_bounds[iv] += cm.c_r * static_cast<std::int64_t>(fresh[j].size());
    }
    for (const BlueWrite &w : ext.writes) ext.interval_costs[w.charged_interval] += cm.c_b;
    for (std::size_t iv = 0; iv < k; ++iv) {
        ext.interval_bounds[iv] += cm.c_b * static_cast<std::int64_t>(extension_budget(delta, m));
        if (ext.interval_costs[iv] > ext.interval_bounds[iv]) ++ext.checks.cost_bound_violations;
    }
    ext.total_cost = cost_redblue(g, ext.rb, cm);

    // Invariant audit.
    ExtensionChecks &ck = ext.checks;
    ck.legal = is_legal_redblue(g, ext.rb);
    ck.successful = is_successful_redblue(g, ext.rb);
    for (std::size_t iv = 0; iv < k; ++iv) {
        const std::size_t a = ext.partition.boundaries[iv];
        const std::size_t b = ext.partition.boundaries[iv + 1];
        NodeSet placed_so_far;
        for (std::size_t j = a + 1; j <= b; ++j) {
            const std::size_t crit = table.at(j, b).size();
            ck.max_critical = std::max(ck.max_critical, crit);
            if (crit > cap) ++ck.critical_cap_violations;
            placed_so_far |= fresh[j];
            if (j < b && !(table.at(j + 1, b) & placed_so_far).is_subset_of(ext.r_old[j]))
                ++ck.containment_violations;
        }
    }
    for (std::size_t j = 0; j <= t; ++j) {
        const RBConfig &c = ext.rb.configs[j];
        ck.max_r_old = std::max(ck.max_r_old, ext.r_old[j].size());
        if (ext.r_old[j].size() > cap) ++ck.r_old_cap_violations;
        ck.max_red = std::max(ck.max_red, c.red.size());
        const NodeSet held = c.blue | c.red;
        if (!p[j].is_subset_of(held)) ++ck.k_extension_violations;
        ck.max_slack = std::max(ck.max_slack, (held - p[j]).size());
    }
    return ext;
}

inline ExtensionPebbling extend_to_redblue(const Dag &g, const BlackPebbling &p, std::size_t delta, std::size_t m,
                                           const CostModel &cm) {
    if (auto why = black_violation(g, p)) throw Error(Errc::IllegalPebbling, *why);
    return extend_with_partition(g, p, delta, m, cm, partition_intervals(g, p, delta, m));
}

}  // namespace rbpebble
