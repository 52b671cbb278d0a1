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

#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "rbpebble/common.hpp"
#include "rbpebble/graph.hpp"

namespace rbpebble {

/// P_0..P_t; configs[0] must be empty.
struct BlackPebbling {
    std::vector<NodeSet> configs;

    std::size_t rounds() const { return configs.empty() ? 0 : configs.size() - 1; }
    const NodeSet &operator[](std::size_t i) const { return configs[i]; }

    /// P_i \ P_{i-1}
    NodeSet placed(std::size_t i) const { return configs[i] - configs[i - 1]; }
};

struct RBConfig {
    NodeSet blue;
    NodeSet red;

    friend bool operator==(const RBConfig &, const RBConfig &) = default;
};

struct RedBluePebbling {
    std::vector<RBConfig> configs;
    std::size_t red_budget = 1;

    std::size_t rounds() const { return configs.empty() ? 0 : configs.size() - 1; }
    const RBConfig &operator[](std::size_t i) const { return configs[i]; }
};

/// c_b per n-bit word moved, c_r per permutation query.
struct CostModel {
    Cost c_b{1};
    Cost c_r{1};
    std::size_t cache_words = 1;
    unsigned width_bits = 16;
};

namespace detail {

inline bool ids_in_range(const Dag &g, const NodeSet &s) {
    return s.empty() || s.ids().back() < g.node_count();
}

inline bool preds_within(const Dag &g, NodeId v, const NodeSet &s) {
    for (NodeId u : g.pred(v))
        if (!s.contains(u)) return false;
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Black pebbling
// ---------------------------------------------------------------------------

inline std::optional<std::string> black_violation(const Dag &g, const BlackPebbling &p) {
    if (p.configs.empty()) return "no configurations";
    if (!p.configs[0].empty()) return "P_0 is not empty";
    for (std::size_t i = 0; i < p.configs.size(); ++i)
        if (!detail::ids_in_range(g, p.configs[i])) return "node id out of range in P_" + std::to_string(i);
    for (std::size_t i = 1; i < p.configs.size(); ++i)
        for (NodeId v : p.placed(i))
            if (!detail::preds_within(g, v, p.configs[i - 1]))
                return "node " + std::to_string(v) + " placed at round " + std::to_string(i) +
                       " without its predecessors";
    return std::nullopt;
}

inline bool is_legal_black(const Dag &g, const BlackPebbling &p) { return !black_violation(g, p); }

inline bool is_successful_black(const Dag &g, const BlackPebbling &p) {
    for (NodeId s : g.sinks()) {
        bool hit = false;
        for (const NodeSet &c : p.configs) hit = hit || c.contains(s);
        if (!hit) return false;
    }
    return true;
}

inline std::uint64_t cumulative_black_cost(const BlackPebbling &p) {
    std::uint64_t total = 0;
    for (const NodeSet &c : p.configs) total += c.size();
    return total;
}

// ---------------------------------------------------------------------------
// Red-blue pebbling
// ---------------------------------------------------------------------------

inline std::optional<std::string> redblue_violation(const Dag &g, const RedBluePebbling &rb) {
    if (rb.configs.empty()) return "no configurations";
    if (!rb.configs[0].red.empty() || !rb.configs[0].blue.empty()) return "R_0 or B_0 is not empty";
    for (std::size_t i = 0; i < rb.configs.size(); ++i) {
        const RBConfig &c = rb.configs[i];
        if (!detail::ids_in_range(g, c.red) || !detail::ids_in_range(g, c.blue))
            return "node id out of range at round " + std::to_string(i);
        if (c.red.size() > rb.red_budget)
            return "round " + std::to_string(i) + " holds " + std::to_string(c.red.size()) + " red pebbles";
    }
    for (std::size_t i = 1; i < rb.configs.size(); ++i) {
        const RBConfig &prev = rb.configs[i - 1];
        const RBConfig &cur = rb.configs[i];
        for (NodeId v : cur.red - (prev.red | prev.blue))
            if (!detail::preds_within(g, v, prev.red))
                return "red on " + std::to_string(v) + " at round " + std::to_string(i) +
                       " without red predecessors";
        for (NodeId v : cur.blue - prev.blue)
            if (!prev.red.contains(v))
                return "blue on " + std::to_string(v) + " at round " + std::to_string(i) + " without a red pebble";
    }
    return std::nullopt;
}

inline bool is_legal_redblue(const Dag &g, const RedBluePebbling &rb) { return !redblue_violation(g, rb); }

inline bool is_successful_redblue(const Dag &g, const RedBluePebbling &rb) {
    for (NodeId s : g.sinks()) {
        bool hit = false;
        for (const RBConfig &c : rb.configs) hit = hit || c.red.contains(s);
        if (!hit) return false;
    }
    return true;
}

struct Moves {
    std::uint64_t blue = 0;
    std::uint64_t red = 0;

    friend bool operator==(const Moves &, const Moves &) = default;
};

/// New reds whose predecessors were not all red in the previous round (fetches).
inline NodeSet fetched_reds(const Dag &g, const RBConfig &prev, const RBConfig &cur) {
    std::vector<NodeId> out;
    for (NodeId v : cur.red - prev.red)
        if (!detail::preds_within(g, v, prev.red)) out.push_back(v);
    return NodeSet(std::move(out));
}

inline Moves moves(const Dag &g, const RedBluePebbling &rb, std::size_t i) {
    if (i < 1 || i > rb.rounds())
        throw Error(Errc::RoundOutOfRange, "round " + std::to_string(i) + " outside [1, " +
                                               std::to_string(rb.rounds()) + "]");
    const RBConfig &prev = rb.configs[i - 1];
    const RBConfig &cur = rb.configs[i];
    const std::uint64_t fetched = fetched_reds(g, prev, cur).size();
    const std::uint64_t new_red = (cur.red - prev.red).size();
    const std::uint64_t new_blue = (cur.blue - prev.blue).size();
    return {fetched + new_blue, new_red - fetched};
}

inline Cost cost_redblue(const Dag &g, const RedBluePebbling &rb, const CostModel &cm) {
    Cost total{0};
    for (std::size_t i = 1; i <= rb.rounds(); ++i) {
        const Moves mv = moves(g, rb, i);
        total += cm.c_b * static_cast<std::int64_t>(mv.blue) + cm.c_r * static_cast<std::int64_t>(mv.red);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Exact rbcost by least-cost search
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultOracleNodes = 6;

/**
 * Minimum cost_redblue over all legal successful pebblings with `red_budget`
 * red pebbles. Dijkstra over (B, R, sinks already red) with every legal
 * one-round transition as an edge. Blue pebbles are never dropped in the
 * search: keeping one is free and only relaxes both rules and the BM count.
 */
inline Cost rbcost_oracle(const Dag &g, std::size_t red_budget, const CostModel &cm,
                          std::size_t max_nodes = kDefaultOracleNodes) {
    const std::size_t n = g.node_count();
    if (n > max_nodes || n > 20)
        throw Error(Errc::TooLarge, std::to_string(n) + " nodes exceeds oracle cap " + std::to_string(max_nodes));
    if (cm.c_b < 0 || cm.c_r < 0) throw Error(Errc::BadShape, "costs must be non-negative");

    // Integer edge weights: scale both rationals by the lcm of their denominators.
    const std::int64_t scale = std::lcm(cm.c_b.denominator(), cm.c_r.denominator());
    const std::int64_t wb = cm.c_b.numerator() * (scale / cm.c_b.denominator());
    const std::int64_t wr = cm.c_r.numerator() * (scale / cm.c_r.denominator());

    using Mask = std::uint32_t;
    std::vector<Mask> pred_mask(n, 0);
    for (NodeId v = 0; v < n; ++v)
        for (NodeId u : g.pred(v)) pred_mask[v] |= Mask{1} << u;
    std::vector<std::size_t> sink_slot(n, n);
    std::size_t sink_count = 0;
    for (NodeId s : g.sinks()) sink_slot[s] = sink_count++;
    const Mask all_sinks = (Mask{1} << sink_count) - 1;

    auto sink_bits = [&](Mask red) {
        Mask out = 0;
        for (NodeId v = 0; v < n; ++v)
            if ((red >> v & 1) && sink_slot[v] < n) out |= Mask{1} << sink_slot[v];
        return out;
    };
    auto encode = [&](Mask b, Mask r, Mask s) {
        return (static_cast<std::uint64_t>(s) << (2 * n)) | (static_cast<std::uint64_t>(r) << n) | b;
    };

    using Item = std::pair<std::int64_t, std::uint64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
    std::unordered_map<std::uint64_t, std::int64_t> dist;
    dist[encode(0, 0, 0)] = 0;
    frontier.push({0, encode(0, 0, 0)});
    const Mask node_mask = static_cast<Mask>((std::uint64_t{1} << n) - 1);

    while (!frontier.empty()) {
        const auto [d, key] = frontier.top();
        frontier.pop();
        if (dist[key] < d) continue;
        const Mask b = static_cast<Mask>(key & node_mask);
        const Mask r = static_cast<Mask>((key >> n) & node_mask);
        const Mask s = static_cast<Mask>(key >> (2 * n));
        if (s == all_sinks) return Cost(d, scale);

        Mask computable = 0;
        for (NodeId v = 0; v < n; ++v)
            if ((pred_mask[v] & ~r) == 0) computable |= Mask{1} << v;
        const Mask allowed_red = r | b | computable;
        const Mask blue_candidates = r & ~b;

        // Enumerate R' subset of allowed_red with |R'| <= budget, and new blues subset of R \ B.
        for (Mask rp = allowed_red;; rp = (rp - 1) & allowed_red) {
            if (static_cast<std::size_t>(std::popcount(rp)) <= red_budget) {
                const Mask new_red = rp & ~r;
                const Mask fetched = new_red & ~computable;
                const std::int64_t red_cost = wb * std::popcount(fetched) + wr * std::popcount(new_red & computable);
                for (Mask nb = blue_candidates;; nb = (nb - 1) & blue_candidates) {
                    const Mask bp = b | nb;
                    const std::int64_t nd = d + red_cost + wb * std::popcount(nb);
                    const std::uint64_t nkey = encode(bp, rp, s | sink_bits(rp));
                    if (nkey != key) {
                        auto it = dist.find(nkey);
                        if (it == dist.end() || nd < it->second) {
                            dist[nkey] = nd;
                            frontier.push({nd, nkey});
                        }
                    }
                    if (nb == 0) break;
                }
            }
            if (rp == 0) break;
        }
    }
    throw Error(Errc::BadShape, "no successful pebbling exists under this red budget");
}

}  // namespace rbpebble
