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
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbpebble/common.hpp"
#include "rbpebble/extend.hpp"
#include "rbpebble/graph.hpp"
#include "rbpebble/pebble.hpp"

namespace rbpebble {

/**
 * Sequential black pebbling in topological order, one node per round. By
 * default a pebble is dropped once its last successor has been placed and
 * sinks are dropped the round after placement; `keep_all` never drops.
 */
inline BlackPebbling greedy_black_pebbling(const Dag &g, bool keep_all = false) {
    const std::size_t n = g.node_count();
    // last_use[u] = round in which the last successor of u is placed
    std::vector<std::size_t> last_use(n, 0);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId w : g.succ(u)) last_use[u] = std::max(last_use[u], g.topo_index(w) + 1);

    BlackPebbling p;
    p.configs.emplace_back();
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<NodeId> keep;
        for (NodeId u : p.configs.back())
            if (keep_all || last_use[u] > i) keep.push_back(u);
        keep.push_back(g.topo()[i - 1]);
        p.configs.emplace_back(std::move(keep));
    }
    return p;
}

/**
 * Sequential red-blue schedule with an m-word cache and farthest-next-use
 * eviction. For each node in topological order: an optional write round
 * (labels about to be evicted that are needed later and not yet blue), an
 * optional fetch round for missing predecessors, then the compute round.
 */
inline RedBluePebbling greedy_keep_hot(const Dag &g, std::size_t m) {
    const std::size_t n = g.node_count();
    std::size_t max_in = 1;
    for (NodeId v = 0; v < n; ++v) max_in = std::max(max_in, g.indegree(v));
    if (m < max_in)
        throw Error(Errc::BudgetExceedsCache,
                    "cache of " + std::to_string(m) + " words is below the max indegree " + std::to_string(max_in));

    constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
    // next use of u strictly after topo position `pos`
    auto next_use = [&](NodeId u, std::size_t pos) {
        std::size_t best = kNever;
        for (NodeId w : g.succ(u)) {
            const std::size_t tw = g.topo_index(w);
            if (tw > pos) best = std::min(best, tw);
        }
        return best;
    };
    // Eviction order: dead first, then farthest next use, then larger id.
    auto pick_victims = [&](const NodeSet &pool, std::size_t count, std::size_t pos) {
        std::vector<NodeId> cand(pool.begin(), pool.end());
        std::sort(cand.begin(), cand.end(), [&](NodeId a, NodeId b) {
            const std::size_t na = next_use(a, pos), nb = next_use(b, pos);
            if (na != nb) return na > nb;
            return a > b;
        });
        cand.resize(std::min(count, cand.size()));
        return NodeSet(std::move(cand));
    };

    RedBluePebbling rb;
    rb.red_budget = m;
    rb.configs.emplace_back();
    for (std::size_t pos = 0; pos < n; ++pos) {
        const NodeId v = g.topo()[pos];
        const RBConfig cur = rb.configs.back();
        const NodeSet needed = g.pred_set(v);
        const NodeSet missing = needed - cur.red;

        NodeSet evict_fetch;  // leaves the cache in the fetch round
        if (!missing.empty() && cur.red.size() + missing.size() > m)
            evict_fetch = pick_victims(cur.red - needed, cur.red.size() + missing.size() - m, pos);
        const NodeSet after_fetch = (cur.red - evict_fetch) | missing;
        NodeSet evict_compute;  // leaves the cache in the compute round
        if (after_fetch.size() + 1 > m) evict_compute = pick_victims(after_fetch, after_fetch.size() + 1 - m, pos);

        std::vector<NodeId> writes;
        for (NodeId u : evict_fetch | evict_compute)
            if (next_use(u, pos) != kNever && !cur.blue.contains(u)) writes.push_back(u);
        NodeSet blue = cur.blue;
        if (!writes.empty()) {
            blue |= NodeSet(writes);
            rb.configs.push_back({blue, cur.red});
        }
        if (!missing.empty()) rb.configs.push_back({blue, after_fetch});
        NodeSet red = after_fetch - evict_compute;
        red.insert(v);
        rb.configs.push_back({blue, red});
    }
    return rb;
}

/// Largest red set of any round.
inline std::size_t peak_red(const RedBluePebbling &rb) {
    std::size_t peak = 0;
    for (const RBConfig &c : rb.configs) peak = std::max(peak, c.red.size());
    return peak;
}

/**
 * Greedy black pebbling pushed through the extension with m = cache; usable
 * only when the extension's red usage actually fits the cache, in which case
 * the budget is tightened to the cache size.
 */
inline RedBluePebbling all_red_if_fits(const Dag &g, std::size_t cache_words, const CostModel &cm) {
    const BlackPebbling p = greedy_black_pebbling(g);
    ExtensionPebbling ext = extend_to_redblue(g, p, g.delta(), cache_words, cm);
    const std::size_t peak = peak_red(ext.rb);
    if (peak > cache_words)
        throw Error(Errc::BudgetExceedsCache, "extension needs " + std::to_string(peak) + " red pebbles, cache holds " +
                                                  std::to_string(cache_words));
    ext.rb.red_budget = cache_words;
    return ext.rb;
}

enum class Strategy { GreedyKeepHot, AllRedIfFits };

inline std::optional<Strategy> parse_strategy(std::string_view s) {
    if (s == "greedy_keep_hot") return Strategy::GreedyKeepHot;
    if (s == "all_red_if_fits") return Strategy::AllRedIfFits;
    return std::nullopt;
}

inline RedBluePebbling run_strategy(Strategy s, const Dag &g, std::size_t cache_words, const CostModel &cm) {
    return s == Strategy::GreedyKeepHot ? greedy_keep_hot(g, cache_words) : all_red_if_fits(g, cache_words, cm);
}

}  // namespace rbpebble
