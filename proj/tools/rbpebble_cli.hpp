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
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rbpebble/rbpebble.hpp"

namespace rbpebble::cli {

enum ExitCode : int { kOk = 0, kVerdictFailed = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Cost parse_cost(const std::string &s) {
    try {
        const auto slash = s.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const long long v = std::stoll(s, &used);
            if (used != s.size() || v < 0) throw UsageError("");
            return Cost(v);
        }
        const long long num = std::stoll(s.substr(0, slash), &used);
        if (used != slash) throw UsageError("");
        const std::string den_text = s.substr(slash + 1);
        const long long den = std::stoll(den_text, &used);
        if (used != den_text.size() || num < 0 || den <= 0) throw UsageError("");
        return Cost(num, den);
    } catch (const std::exception &) {
        throw UsageError("cost must be a non-negative integer or p/q, got '" + s + "'");
    }
}

/// Permutation and non-colliding input for a run, both derived from --seed.
inline std::pair<Permutation, InputVector> seeded_instance(const Dag &g, unsigned n, std::uint64_t seed) {
    Permutation p = Permutation::sample(n, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    InputVector x = random_noncolliding_input(g.sources().size(), n, rng);
    return {std::move(p), std::move(x)};
}

inline std::size_t oracle_cap() {
    if (const char *env = std::getenv("RBPEBBLE_MAX_ORACLE_NODES")) {
        try {
            return static_cast<std::size_t>(std::stoul(env));
        } catch (const std::exception &) {
            throw UsageError("RBPEBBLE_MAX_ORACLE_NODES must be a non-negative integer");
        }
    }
    return kDefaultOracleNodes;
}

/// Flat scalar fields as an aligned two-column table, nested values as indented JSON.
inline std::string pretty_text(const Json &j) {
    if (!j.is_object()) return j.dump(2) + "\n";
    std::size_t width = 0;
    for (auto it = j.begin(); it != j.end(); ++it) width = std::max(width, it.key().size());
    std::ostringstream os;
    for (auto it = j.begin(); it != j.end(); ++it) {
        os << std::left << std::setw(static_cast<int>(width) + 2) << it.key();
        if (it->is_structured()) os << "\n" << it->dump(2) << "\n";
        else os << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
    }
    return os.str();
}

struct Output {
    std::string out_path;
    bool pretty = false;

    void emit(const Json &report, std::ostream &stdout_stream) const { emit_text(render(report), stdout_stream); }

    void emit_text(const std::string &text, std::ostream &stdout_stream) const {
        if (out_path.empty()) stdout_stream << text;
        else write_file(out_path, text);
    }

    std::string render(const Json &report) const { return pretty ? pretty_text(report) : report.dump() + "\n"; }
};

struct Options {
    // gen
    std::string family;
    std::size_t nodes = 0;
    std::optional<std::size_t> delta;
    // shared
    std::string graph_path;
    unsigned n = 16;
    std::uint64_t seed = 0;
    std::size_t cache = 1;
    std::size_t m = 1;
    std::string cb = "1";
    std::string cr = "1";
    std::optional<std::size_t> delta_override;
    // eval
    std::string input;
    // simulate
    std::string strategy = "greedy_keep_hot";
    std::string trace_path;
    // collide
    std::uint64_t trials = 10000;
    // extend
    std::string pebbling_path;
    std::string pebbling_out;
    std::optional<std::size_t> threshold;
    // predict
    std::optional<std::size_t> interval;
    Output output;
};

inline Dag load_graph(const std::string &path) { return graph_from_text(read_file(path)); }

inline CostModel cost_model(const Options &o, std::size_t cache_words, unsigned n) {
    CostModel cm;
    cm.c_b = parse_cost(o.cb);
    cm.c_r = parse_cost(o.cr);
    cm.cache_words = cache_words;
    cm.width_bits = n;
    return cm;
}

inline void check_width(unsigned n) {
    if (n < kMinWidth || n > kMaxWidth) throw UsageError("--n must lie in [2, 24]");
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_gen(const Options &o, std::ostream &out) {
    const auto fam = parse_family(o.family);
    if (!fam) throw UsageError("unknown family '" + o.family + "' (path, binary_tree, bit_reversal, random_delta)");
    if (o.nodes == 0) throw UsageError("--nodes must be positive");
    const std::size_t delta = o.delta.value_or(*fam == Family::Path ? 1 : 2);
    o.output.emit_text(graph_to_text(generate(*fam, o.nodes, delta, o.seed)), out);
    return kOk;
}

inline int cmd_eval(const Options &o, std::ostream &out) {
    check_width(o.n);
    const Dag g = load_graph(o.graph_path);
    auto [p, x] = seeded_instance(g, o.n, o.seed);
    if (!o.input.empty()) {
        x.clear();
        std::stringstream ss(o.input);
        std::string word;
        while (std::getline(ss, word, ',')) x.push_back(parse_hex_word(word, o.n));
    }
    std::string text;
    for (Word w : graph_function(g, p, x)) text += hex_word(w, o.n) + "\n";
    o.output.emit_text(text, out);
    return kOk;
}

inline int cmd_simulate(const Options &o, std::ostream &out) {
    check_width(o.n);
    const Dag g = load_graph(o.graph_path);
    const auto strat = parse_strategy(o.strategy);
    if (!strat) throw UsageError("unknown strategy '" + o.strategy + "' (greedy_keep_hot, all_red_if_fits)");
    const CostModel cm = cost_model(o, o.cache, o.n);
    RedBluePebbling rb;
    try {
        rb = run_strategy(*strat, g, o.cache, cm);
    } catch (const Error &e) {
        if (e.code() == Errc::BudgetExceedsCache) throw UsageError(e.what());
        throw;
    }
    auto [p, x] = seeded_instance(g, o.n, o.seed);
    const ExecutionTrace tr = execute_redblue(g, p, x, rb, cm, o.seed);
    if (!o.trace_path.empty()) write_file(o.trace_path, trace_to_text(tr));
    o.output.emit(Json{{"strategy", o.strategy},
                       {"ecost", cost_json(ecost(tr, cm))},
                       {"cmc", cmc(tr)},
                       {"queries", tr.query_count()},
                       {"words_moved", words_moved(tr)},
                       {"rounds", tr.rounds.size() - 1},
                       {"pebbling_cost", cost_json(cost_redblue(g, rb, cm))}},
                  out);
    return kOk;
}

inline int cmd_check_theorem1(const Options &o, std::ostream &out) {
    check_width(o.n);
    const Dag g = load_graph(o.graph_path);
    const std::size_t delta = o.delta_override.value_or(g.delta());
    if (delta < g.delta()) throw UsageError("--delta below the graph's max indegree");
    if (o.m == 0) throw UsageError("--m must be positive");
    const CostModel cm = cost_model(o, o.m, o.n);
    const Theorem1Report rep = check_theorem1(g, o.n, o.seed, o.m, delta, cm, oracle_cap());
    o.output.emit(Json{{"m", o.m},
                       {"delta", delta},
                       {"lhs", rep.lhs ? Json(to_string(*rep.lhs)) : Json(nullptr)},
                       {"best_strategy", rep.lhs ? Json(rep.best_strategy) : Json(nullptr)},
                       {"rhs", cost_json(rep.rhs)},
                       {"rbcost", cost_json(rep.rbcost)},
                       {"extension_cost", cost_json(rep.extension_cost)},
                       {"sandwich_holds", rep.sandwich_holds},
                       {"verdict", verdict_name(rep.verdict)}},
                  out);
    return rep.verdict == Verdict::Violated || !rep.sandwich_holds ? kVerdictFailed : kOk;
}

inline int cmd_collide(const Options &o, std::ostream &out) {
    check_width(o.n);
    if (o.trials == 0) throw UsageError("--trials must be positive");
    const Dag g = load_graph(o.graph_path);
    const CollisionStats st = collision_rate(g, o.n, o.trials, o.seed);
    const double v = static_cast<double>(g.node_count());
    o.output.emit(Json{{"trials", st.trials},
                       {"collisions", st.collisions},
                       {"rate", st.rate()},
                       {"bound", 2.0 * v * v / std::ldexp(1.0, static_cast<int>(o.n))}},
                  out);
    return kOk;
}

inline int cmd_rbcost(const Options &o, std::ostream &out) {
    const Dag g = load_graph(o.graph_path);
    if (o.m == 0) throw UsageError("--m must be positive");
    const CostModel cm = cost_model(o, o.m, o.n);
    o.output.emit(Json{{"m", o.m}, {"rbcost", cost_json(rbcost_oracle(g, o.m, cm, oracle_cap()))}}, out);
    return kOk;
}

inline int cmd_extend(const Options &o, std::ostream &out) {
    const Dag g = load_graph(o.graph_path);
    const std::size_t delta = o.delta_override.value_or(g.delta());
    if (o.m == 0) throw UsageError("--m must be positive");
    const CostModel cm = cost_model(o, o.m, o.n);
    const BlackPebbling p = o.pebbling_path.empty() ? greedy_black_pebbling(g) : black_from_text(read_file(o.pebbling_path));
    if (!is_successful_black(g, p)) throw UsageError("black pebbling is not successful");
    IntervalPartition part = o.threshold ? partition_intervals_with_threshold(g, p, *o.threshold)
                                         : partition_intervals(g, p, delta, o.m);
    const ExtensionPebbling ext = extend_with_partition(g, p, delta, o.m, cm, std::move(part));
    if (!o.pebbling_out.empty()) write_file(o.pebbling_out, redblue_to_text(ext.rb));
    Json rep = partition_report(ext.partition, ext.interval_costs);
    const ExtensionChecks &ck = ext.checks;
    rep["total_cost"] = cost_json(ext.total_cost);
    rep["red_budget"] = ext.rb.red_budget;
    rep["checks"] = Json{{"legal", ck.legal},
                         {"successful", ck.successful},
                         {"critical_cap_violations", ck.critical_cap_violations},
                         {"r_old_cap_violations", ck.r_old_cap_violations},
                         {"containment_violations", ck.containment_violations},
                         {"cost_bound_violations", ck.cost_bound_violations},
                         {"k_extension_violations", ck.k_extension_violations},
                         {"max_critical", ck.max_critical},
                         {"max_r_old", ck.max_r_old},
                         {"max_red", ck.max_red},
                         {"max_slack", ck.max_slack}};
    o.output.emit(rep, out);
    return ck.invariants_hold() ? kOk : kVerdictFailed;
}

inline int cmd_predict(const Options &o, std::ostream &out) {
    check_width(o.n);
    const Dag g = load_graph(o.graph_path);
    const CostModel cm = cost_model(o, o.cache, o.n);
    RedBluePebbling rb;
    try {
        rb = greedy_keep_hot(g, o.cache);
    } catch (const Error &e) {
        throw UsageError(e.what());
    }
    auto [p, x] = seeded_instance(g, o.n, o.seed);
    const LabelMap lm = eval_labels(g, p, x);
    if (detect_collision(lm)) throw UsageError("labels collide for this seed; pick another --seed");
    Permutation run = p;
    const ExecutionTrace tr = execute_redblue(g, run, x, rb, cm, o.seed);
    const BlackPebbling bp = extract_black_pebbling(g, lm, tr);
    const IntervalPartition part = o.threshold ? partition_intervals_with_threshold(g, bp, *o.threshold)
                                               : partition_intervals(g, bp, g.delta(), o.cache);

    std::optional<std::size_t> chosen = o.interval;
    if (!chosen) {
        for (std::size_t iv = 0; iv + 1 < part.interval_count() && !chosen; ++iv)
            if (!part.critical[iv].empty()) chosen = iv;
        if (!chosen) throw UsageError("no interval with critical nodes before the last one; try a lower --threshold");
    }
    Hint hint;
    try {
        hint = build_hint(g, lm, tr, rb, part, *chosen);
    } catch (const Error &e) {
        if (e.code() == Errc::LastInterval || e.code() == Errc::NoCriticalNodes || e.code() == Errc::RoundOutOfRange)
            throw UsageError(e.what());
        throw;
    }
    HonestReplayAdversary adv(g, rb, x, hint);
    GuardedPermutation guard = guard_for(p, lm, hint);
    const PredictionReport rep = run_predictor(g, hint, x, adv, guard, p);
    const HintBudget budget = hint_budget(g.delta(), o.cache, o.n, g.node_count(), tr.query_count());
    o.output.emit(Json{{"boundaries", part.boundaries},
                       {"hint", hint_to_json(hint)},
                       {"report", prediction_report_to_json(rep, o.n)},
                       {"budget", hint_budget_to_json(budget)}},
                  out);
    return rep.all_correct && rep.forbidden_queries == 0 ? kOk : kVerdictFailed;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, char **argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    CLI::App app{"rbpebble: red-blue pebbling and permutation-labeling simulator"};
    app.require_subcommand(1);
    Options o;

    auto add_output = [&](CLI::App *c) {
        c->add_option("--out", o.output.out_path, "Write the report here instead of stdout");
        c->add_flag("--pretty", o.output.pretty, "Human-readable report");
    };
    auto add_graph = [&](CLI::App *c) { c->add_option("--graph", o.graph_path, "Graph JSON file")->required(); };
    auto add_costs = [&](CLI::App *c) {
        c->add_option("--cb", o.cb, "Cost per word moved (integer or p/q)");
        c->add_option("--cr", o.cr, "Cost per permutation query (integer or p/q)");
    };

    auto *gen = app.add_subcommand("gen", "Generate a graph");
    gen->add_option("--family", o.family, "path | binary_tree | bit_reversal | random_delta")->required();
    gen->add_option("--nodes", o.nodes, "Node count")->required();
    gen->add_option("--delta", o.delta, "Indegree bound (default 1 for path, else 2)");
    gen->add_option("--seed", o.seed, "Seed");
    add_output(gen);

    auto *eval = app.add_subcommand("eval", "Evaluate the labeling function; one hex word per sink");
    add_graph(eval);
    eval->add_option("--n", o.n, "Word width in bits");
    eval->add_option("--seed", o.seed, "Seed for the permutation (and the input if --input is absent)");
    eval->add_option("--input", o.input, "Comma-separated hex words, one per source");
    add_output(eval);

    auto *sim = app.add_subcommand("simulate", "Run an honest strategy and report its cost");
    add_graph(sim);
    sim->add_option("--n", o.n, "Word width in bits");
    sim->add_option("--seed", o.seed, "Seed");
    sim->add_option("--cache", o.cache, "Cache size in words");
    add_costs(sim);
    sim->add_option("--strategy", o.strategy, "greedy_keep_hot | all_red_if_fits");
    sim->add_option("--trace", o.trace_path, "Write the execution trace here");
    add_output(sim);

    auto *thm = app.add_subcommand("check-theorem1", "Check the energy lower bound against the shipped strategies");
    add_graph(thm);
    thm->add_option("--n", o.n, "Word width in bits");
    thm->add_option("--seed", o.seed, "Seed");
    thm->add_option("--m", o.m, "Cache size in words");
    thm->add_option("--delta", o.delta_override, "Indegree bound (default: the graph's)");
    add_costs(thm);
    add_output(thm);

    auto *col = app.add_subcommand("collide", "Estimate the label collision rate");
    add_graph(col);
    col->add_option("--n", o.n, "Word width in bits");
    col->add_option("--trials", o.trials, "Number of trials");
    col->add_option("--seed", o.seed, "Seed");
    add_output(col);

    auto *rbc = app.add_subcommand("rbcost", "Exact red-blue pebbling cost of a small graph");
    add_graph(rbc);
    rbc->add_option("--m", o.m, "Red pebble budget");
    add_costs(rbc);
    add_output(rbc);

    auto *ext = app.add_subcommand("extend", "Extend a black pebbling to a red-blue pebbling");
    add_graph(ext);
    ext->add_option("--pebbling", o.pebbling_path, "Black pebbling JSON lines (default: greedy)");
    ext->add_option("--m", o.m, "Cache parameter m");
    ext->add_option("--delta", o.delta_override, "Indegree bound (default: the graph's)");
    ext->add_option("--threshold", o.threshold, "Partition threshold (default: (10 delta - 1) m)");
    ext->add_option("--pebbling-out", o.pebbling_out, "Write the red-blue pebbling here");
    add_costs(ext);
    add_output(ext);

    auto *pred = app.add_subcommand("predict", "Build a hint for one interval and run the predictor");
    add_graph(pred);
    pred->add_option("--n", o.n, "Word width in bits");
    pred->add_option("--seed", o.seed, "Seed");
    pred->add_option("--cache", o.cache, "Cache size in words");
    pred->add_option("--threshold", o.threshold, "Partition threshold (default: (10 delta - 1) m)");
    pred->add_option("--interval", o.interval, "Interval index (default: first usable)");
    add_costs(pred);
    add_output(pred);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_gen(o, out);
        if (*eval) return cmd_eval(o, out);
        if (*sim) return cmd_simulate(o, out);
        if (*thm) return cmd_check_theorem1(o, out);
        if (*col) return cmd_collide(o, out);
        if (*rbc) return cmd_rbcost(o, out);
        if (*ext) return cmd_extend(o, out);
        if (*pred) return cmd_predict(o, out);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return e.code() == Errc::ParseError ? kIo : kUsage;
    }
    return kUsage;
}

}  // namespace rbpebble::cli
