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
#include <unordered_set>
#include <vector>

#include "rbpebble/common.hpp"
#include "rbpebble/graph.hpp"
#include "rbpebble/perm.hpp"

namespace rbpebble {

/// One n-bit word per source, in ascending source-id order.
using InputVector = std::vector<Word>;

/// Per-node words of one evaluation: lab = prelab ^ postlab, postlab = pi(prelab).
struct LabelMap {
    std::vector<Word> prelab;
    std::vector<Word> postlab;
    std::vector<Word> lab;

    std::size_t size() const { return lab.size(); }
};

inline bool is_noncolliding(const InputVector &x) {
    std::vector<Word> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

/**
 * Labels every node in topological order with exactly one forward query each.
 * Sources take prelab = x_i; other nodes take the XOR of their predecessors'
 * labels, so a single predecessor gives pi(x) ^ x and two give the usual
 * pi(x1 ^ x2) ^ x1 ^ x2.
 */
inline LabelMap eval_labels(const Dag &g, Permutation &p, const InputVector &x) {
    if (x.size() != g.sources().size())
        throw Error(Errc::InputLengthMismatch,
                    "got " + std::to_string(x.size()) + " words for " + std::to_string(g.sources().size()) + " sources");
    for (Word w : x)
        if (w > p.mask()) throw Error(Errc::WordOutOfRange, "input word wider than permutation");

    const std::size_t n = g.node_count();
    LabelMap lm{std::vector<Word>(n), std::vector<Word>(n), std::vector<Word>(n)};
    for (std::size_t pos = 0; pos < n; ++pos) {
        const NodeId v = g.topo()[pos];
        Word pre = 0;
        if (auto si = g.source_index(v)) {
            pre = x[*si];
        } else {
            for (NodeId u : g.pred(v)) pre ^= lm.lab[u];
        }
        lm.prelab[v] = pre;
        lm.postlab[v] = p.query(Direction::Forward, pre, static_cast<std::uint32_t>(pos + 1));
        lm.lab[v] = lm.prelab[v] ^ lm.postlab[v];
    }
    return lm;
}

/// f(x): sink labels in ascending node-id order.
inline std::vector<Word> graph_function(const Dag &g, Permutation &p, const InputVector &x) {
    const LabelMap lm = eval_labels(g, p, x);
    std::vector<Word> out;
    for (NodeId s : g.sinks()) out.push_back(lm.lab[s]);
    return out;
}

/// Event Coll: two distinct nodes share a label or share a prelabel.
inline bool detect_collision(const LabelMap &lm) {
    auto has_dup = [](std::vector<Word> words) {
        std::sort(words.begin(), words.end());
        return std::adjacent_find(words.begin(), words.end()) != words.end();
    };
    return has_dup(lm.lab) || has_dup(lm.prelab);
}

/// `count` pairwise-distinct uniform n-bit words.
inline InputVector random_noncolliding_input(std::size_t count, unsigned width_bits, Rng &rng) {
    const std::uint64_t domain = std::uint64_t{1} << width_bits;
    if (count > domain) throw Error(Errc::BadShape, "more sources than distinct words");
    InputVector x;
    std::unordered_set<Word> used;
    while (x.size() < count) {
        const auto w = static_cast<Word>(rng.below(domain));
        if (used.insert(w).second) x.push_back(w);
    }
    return x;
}

struct CollisionStats {
    std::uint64_t collisions = 0;
    std::uint64_t trials = 0;

    double rate() const { return trials == 0 ? 0.0 : static_cast<double>(collisions) / static_cast<double>(trials); }
};

/**
 * Monte Carlo estimate of Pr[Coll]. Trial i uses seed derive_seed(seed, i) for
 * both its permutation and its non-colliding input, so the result does not
 * depend on how trials are scheduled. `make_perm(width, trial_seed)` lets tests
 * inject degenerate permutations.
 */
template <typename PermFactory>
CollisionStats collision_rate(const Dag &g, unsigned width_bits, std::uint64_t trials, std::uint64_t seed,
                              PermFactory &&make_perm) {
    if (trials == 0) throw Error(Errc::BadShape, "trials must be >= 1");
    CollisionStats stats;
    stats.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        Permutation p = make_perm(width_bits, trial_seed);
        Rng rng(mix64(trial_seed));
        const InputVector x = random_noncolliding_input(g.sources().size(), width_bits, rng);
        if (detect_collision(eval_labels(g, p, x))) ++stats.collisions;
    }
    return stats;
}

inline CollisionStats collision_rate(const Dag &g, unsigned width_bits, std::uint64_t trials, std::uint64_t seed) {
    return collision_rate(g, width_bits, trials, seed,
                          [](unsigned w, std::uint64_t s) { return Permutation::sample(w, s); });
}

}  // namespace rbpebble
