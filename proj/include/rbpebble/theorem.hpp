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
#include <optional>
#include <string>

#include "rbpebble/common.hpp"
#include "rbpebble/exec.hpp"
#include "rbpebble/extend.hpp"
#include "rbpebble/label.hpp"
#include "rbpebble/pebble.hpp"
#include "rbpebble/perm.hpp"
#include "rbpebble/strategy.hpp"

namespace rbpebble {

enum class Verdict { Holds, Violated, Vacuous };

inline const char *verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Violated: return "violated";
        case Verdict::Vacuous: return "vacuous";
    }
    return "unknown";
}

struct Theorem1Report {
    std::optional<Cost> lhs;  // min ecost over the shipped honest strategies that fit
    std::string best_strategy;
    Cost rhs{0};
    Cost rbcost{0};  // rbcost(G, 20 delta m)
    Cost extension_cost{0};
    bool sandwich_holds = false;
    Verdict verdict = Verdict::Vacuous;
};

/**
 * Desk-scale check of ecost(f, mn) >= rbcost(G, 20 delta m) / (40 delta) - m c_b / 2
 * with the left side taken as the cheapest honest run of the shipped
 * strategies under an m-word cache, plus rbcost(G, 20 delta m) <= cost of the
 * extension of the greedy black pebbling.
 */
inline Theorem1Report check_theorem1(const Dag &g, unsigned n, std::uint64_t seed, std::size_t m, std::size_t delta,
                                     const CostModel &costs, std::size_t max_oracle_nodes = kDefaultOracleNodes) {
    CostModel cm = costs;
    cm.cache_words = m;
    cm.width_bits = n;
    Theorem1Report rep;
    rep.rbcost = rbcost_oracle(g, extension_budget(delta, m), cm, max_oracle_nodes);
    rep.rhs = rep.rbcost / Cost(static_cast<std::int64_t>(40 * delta)) -
              cm.c_b * Cost(static_cast<std::int64_t>(m), 2);

    const ExtensionPebbling ext = extend_to_redblue(g, greedy_black_pebbling(g), delta, m, cm);
    rep.extension_cost = ext.total_cost;
    rep.sandwich_holds = rep.rbcost <= rep.extension_cost;

    const Permutation pi = Permutation::sample(n, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    const InputVector x = random_noncolliding_input(g.sources().size(), n, rng);
    for (Strategy s : {Strategy::GreedyKeepHot, Strategy::AllRedIfFits}) {
        RedBluePebbling rb;
        try {
            rb = run_strategy(s, g, m, cm);
        } catch (const Error &e) {
            if (e.code() == Errc::BudgetExceedsCache) continue;
            throw;
        }
        Permutation p = pi;
        const Cost c = ecost(execute_redblue(g, p, x, rb, cm, seed), cm);
        if (!rep.lhs || c < *rep.lhs) {
            rep.lhs = c;
            rep.best_strategy = s == Strategy::GreedyKeepHot ? "greedy_keep_hot" : "all_red_if_fits";
        }
    }
    if (!rep.lhs) rep.verdict = Verdict::Vacuous;
    else rep.verdict = *rep.lhs >= rep.rhs ? Verdict::Holds : Verdict::Violated;
    return rep;
}

}  // namespace rbpebble
