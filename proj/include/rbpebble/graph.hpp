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

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbpebble/common.hpp"

namespace rbpebble {

using Edge = std::pair<NodeId, NodeId>;

/**
 * Immutable directed acyclic graph with bounded indegree.
 *
 * Node ids are dense in [0, node_count). Predecessor and successor lists are
 * kept in ascending id order; `topo()` is the smallest-id-first Kahn order,
 * which is the identity for every generated graph.
 */
class Dag {
  public:
    /// Validates and builds. `delta_bound`, when given, is the declared
    /// indegree bound; otherwise delta is the observed maximum (at least 1).
    static Dag build(std::size_t node_count, std::vector<Edge> edges,
                     std::optional<std::size_t> delta_bound = std::nullopt) {
        if (node_count == 0) throw Error(Errc::BadShape, "graph needs at least one node");
        std::sort(edges.begin(), edges.end());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto [u, v] = edges[i];
            if (u >= node_count || v >= node_count)
                throw Error(Errc::NodeOutOfRange, "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
            if (u == v) throw Error(Errc::SelfLoop, "node " + std::to_string(u));
            if (i > 0 && edges[i - 1] == edges[i])
                throw Error(Errc::DuplicateEdge, "(" + std::to_string(u) + "," + std::to_string(v) + ")");
        }

        Dag g;
        g.pred_.resize(node_count);
        g.succ_.resize(node_count);
        for (const auto &[u, v] : edges) {
            g.succ_[u].push_back(v);
            g.pred_[v].push_back(u);
        }
        for (auto &p : g.pred_) std::sort(p.begin(), p.end());

        std::size_t max_in = 0;
        for (const auto &p : g.pred_) max_in = std::max(max_in, p.size());
        if (delta_bound) {
            if (*delta_bound == 0) throw Error(Errc::BadShape, "delta must be positive");
            if (max_in > *delta_bound)
                throw Error(Errc::IndegreeExceeded,
                            "indegree " + std::to_string(max_in) + " > delta " + std::to_string(*delta_bound));
            g.delta_ = *delta_bound;
        } else {
            g.delta_ = std::max<std::size_t>(1, max_in);
        }

        // Kahn, smallest ready id first.
        std::vector<std::size_t> remaining(node_count);
        std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
        for (NodeId v = 0; v < node_count; ++v) {
            remaining[v] = g.pred_[v].size();
            if (remaining[v] == 0) ready.push(v);
        }
        while (!ready.empty()) {
            NodeId u = ready.top();
            ready.pop();
            g.topo_.push_back(u);
            for (NodeId w : g.succ_[u])
                if (--remaining[w] == 0) ready.push(w);
        }
        if (g.topo_.size() != node_count) throw Error(Errc::CycleDetected, "edges admit no topological order");

        g.topo_index_.resize(node_count);
        for (std::size_t i = 0; i < node_count; ++i) g.topo_index_[g.topo_[i]] = i;
        for (NodeId v = 0; v < node_count; ++v) {
            if (g.pred_[v].empty()) g.sources_.push_back(v);
            if (g.succ_[v].empty()) g.sinks_.push_back(v);
        }
        g.edges_ = std::move(edges);
        return g;
    }

    std::size_t node_count() const { return pred_.size(); }
    std::size_t delta() const { return delta_; }
    const std::vector<Edge> &edges() const { return edges_; }
    std::span<const NodeId> pred(NodeId v) const { return pred_[v]; }
    std::span<const NodeId> succ(NodeId v) const { return succ_[v]; }
    std::size_t indegree(NodeId v) const { return pred_[v].size(); }
    const std::vector<NodeId> &topo() const { return topo_; }
    std::size_t topo_index(NodeId v) const { return topo_index_[v]; }
    const std::vector<NodeId> &sources() const { return sources_; }
    const std::vector<NodeId> &sinks() const { return sinks_; }
    bool is_source(NodeId v) const { return pred_[v].empty(); }
    bool is_sink(NodeId v) const { return succ_[v].empty(); }

    NodeSet pred_set(NodeId v) const { return NodeSet(pred_[v]); }

    /// pred(S) = union of pred(v) over v in S.
    NodeSet pred_of(const NodeSet &s) const {
        std::vector<NodeId> out;
        for (NodeId v : s) out.insert(out.end(), pred_[v].begin(), pred_[v].end());
        return NodeSet(std::move(out));
    }

    /// Position of `v` among the sources, for input-vector indexing.
    std::optional<std::size_t> source_index(NodeId v) const {
        auto it = std::lower_bound(sources_.begin(), sources_.end(), v);
        if (it == sources_.end() || *it != v) return std::nullopt;
        return static_cast<std::size_t>(it - sources_.begin());
    }

  private:
    Dag() = default;

    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> pred_;
    std::vector<std::vector<NodeId>> succ_;
    std::vector<NodeId> topo_;
    std::vector<std::size_t> topo_index_;
    std::vector<NodeId> sources_;
    std::vector<NodeId> sinks_;
    std::size_t delta_ = 1;
};

inline Dag build_dag(std::size_t node_count, std::vector<Edge> edges) {
    return Dag::build(node_count, std::move(edges));
}

/// True iff no two distinct nodes have the same predecessor set (sources included).
inline bool is_predecessor_distinct(const Dag &g) {
    std::vector<std::vector<NodeId>> sets;
    sets.reserve(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) sets.emplace_back(g.pred(v).begin(), g.pred(v).end());
    std::sort(sets.begin(), sets.end());
    return std::adjacent_find(sets.begin(), sets.end()) == sets.end();
}

/// Same predicate restricted to non-source nodes.
inline bool is_predecessor_distinct_nonsource(const Dag &g) {
    std::vector<std::vector<NodeId>> sets;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (!g.is_source(v)) sets.emplace_back(g.pred(v).begin(), g.pred(v).end());
    std::sort(sets.begin(), sets.end());
    return std::adjacent_find(sets.begin(), sets.end()) == sets.end();
}

namespace detail {

// Longest path (in nodes) avoiding `removed`. With `source_to_sink`, paths
// must start at a source of g and end at a sink of g.
inline std::size_t residual_depth(const Dag &g, std::uint64_t removed, bool source_to_sink) {
    constexpr std::size_t kNone = 0;
    std::vector<std::size_t> best(g.node_count(), kNone);
    std::size_t depth = 0;
    for (NodeId v : g.topo()) {
        if (removed >> v & 1) continue;
        std::size_t b = kNone;
        if (g.is_source(v)) b = 1;
        for (NodeId u : g.pred(v))
            if (best[u] != kNone) b = std::max(b, best[u] + 1);
        if (!source_to_sink && b == kNone) b = 1;
        best[v] = b;
        if (b != kNone && (!source_to_sink || g.is_sink(v))) depth = std::max(depth, b);
    }
    return depth;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline bool exhaustive_robust(const Dag &g, std::size_t e, std::size_t d, bool source_to_sink,
                              std::size_t max_nodes) {
    const std::size_t n = g.node_count();
    if (n > max_nodes || n > 20)
        throw Error(Errc::TooLarge, std::to_string(n) + " nodes exceeds exhaustive cap");
    // Residual depth only shrinks as S grows, so subsets of the largest size suffice.
    const std::size_t k = std::min(e, n);
    if (binomial(n, k) > (std::uint64_t{1} << 20)) throw Error(Errc::TooLarge, "too many subsets");
    if (k == 0) return residual_depth(g, 0, source_to_sink) >= d;
    if (k == n) return d == 0;
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (mask < limit) {
        if (residual_depth(g, mask, source_to_sink) < d) return false;
        // Gosper's hack: next mask with the same popcount.
        const std::uint64_t c = mask & (~mask + 1);
        const std::uint64_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    return true;
}

}  // namespace detail

/// Number of nodes on the longest directed path.
inline std::size_t depth(const Dag &g) { return detail::residual_depth(g, 0, false); }

/// (e, d)-depth-robustness by exhaustive subset enumeration.
inline bool is_depth_robust(const Dag &g, std::size_t e, std::size_t d, std::size_t max_nodes = 20) {
    return detail::exhaustive_robust(g, e, d, false, max_nodes);
}

/// Source-to-sink variant: the surviving path must run from a source of g to a sink of g.
inline bool is_source_to_sink_depth_robust(const Dag &g, std::size_t e, std::size_t d,
                                           std::size_t max_nodes = 20) {
    return detail::exhaustive_robust(g, e, d, true, max_nodes);
}

enum class Family { Path, BinaryTree, BitReversal, RandomDelta };

inline std::optional<Family> parse_family(std::string_view s) {
    if (s == "path") return Family::Path;
    if (s == "binary_tree") return Family::BinaryTree;
    if (s == "bit_reversal") return Family::BitReversal;
    if (s == "random_delta") return Family::RandomDelta;
    return std::nullopt;
}

inline const char *family_name(Family f) {
    switch (f) {
        case Family::Path: return "path";
        case Family::BinaryTree: return "binary_tree";
        case Family::BitReversal: return "bit_reversal";
        case Family::RandomDelta: return "random_delta";
    }
    return "?";
}

/**
 * Deterministic graph generators. All emit edges u -> v with u < v, so the
 * identity order is topological.
 *
 *  - path:         0 -> 1 -> ... -> N-1
 *  - binary_tree:  complete binary in-tree; leaves are sources, node N-1 is the root/sink
 *  - bit_reversal: two layers of N/2 = 2^k nodes, each a path, with rev(j) -> N/2 + j
 *  - random_delta: v-1 -> v for every v > 0, plus up to delta-1 extra distinct earlier
 *                  predecessors drawn from `seed`
 */
inline Dag generate(Family family, std::size_t node_count, std::size_t delta, std::uint64_t seed) {
    if (node_count == 0) throw Error(Errc::BadShape, "node_count must be positive");
    if (delta == 0) throw Error(Errc::BadShape, "delta must be positive");
    std::vector<Edge> edges;
    const auto n = static_cast<NodeId>(node_count);
    switch (family) {
        case Family::Path:
            for (NodeId v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
            break;
        case Family::BinaryTree: {
            if (node_count > 2 && delta < 2) throw Error(Errc::BadShape, "binary_tree needs delta >= 2");
            // Heap index h = n-1-v; heap parent of h is (h-1)/2.
            for (NodeId h = 1; h < n; ++h) edges.emplace_back(n - 1 - h, n - 1 - (h - 1) / 2);
            break;
        }
        case Family::BitReversal: {
            const std::size_t half = node_count / 2;
            if (node_count % 2 != 0 || half == 0 || (half & (half - 1)) != 0)
                throw Error(Errc::BadShape, "bit_reversal needs node_count = 2 * 2^k");
            if (half > 1 && delta < 2) throw Error(Errc::BadShape, "bit_reversal needs delta >= 2");
            const std::size_t bits = ceil_log2(half);
            auto rev = [bits](std::size_t j) {
                std::size_t r = 0;
                for (std::size_t b = 0; b < bits; ++b)
                    if (j >> b & 1) r |= std::size_t{1} << (bits - 1 - b);
                return r;
            };
            const auto h = static_cast<NodeId>(half);
            for (NodeId j = 1; j < h; ++j) {
                edges.emplace_back(j - 1, j);
                edges.emplace_back(h + j - 1, h + j);
            }
            for (NodeId j = 0; j < h; ++j) edges.emplace_back(static_cast<NodeId>(rev(j)), h + j);
            break;
        }
        case Family::RandomDelta: {
            Rng rng(seed);
            for (NodeId v = 1; v < n; ++v) {
                edges.emplace_back(v - 1, v);
                const std::size_t extra_max = std::min<std::size_t>(delta - 1, v - 1);
                const std::size_t extra = static_cast<std::size_t>(rng.between(0, extra_max));
                std::vector<NodeId> pool(v - 1);
                for (NodeId u = 0; u + 1 < v; ++u) pool[u] = u;
                // Partial Fisher-Yates: first `extra` slots become a uniform sample.
                for (std::size_t i = 0; i < extra; ++i) {
                    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
                    std::swap(pool[i], pool[j]);
                    edges.emplace_back(pool[i], v);
                }
            }
            break;
        }
    }
    return Dag::build(node_count, std::move(edges), delta);
}

}  // namespace rbpebble
