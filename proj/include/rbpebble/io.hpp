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
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbpebble/common.hpp"
#include "rbpebble/exec.hpp"
#include "rbpebble/extend.hpp"
#include "rbpebble/graph.hpp"
#include "rbpebble/pebble.hpp"
#include "rbpebble/predictor.hpp"

namespace rbpebble {

using Json = nlohmann::ordered_json;

/// File missing, unreadable or unwritable.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

inline Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::ParseError, e.what());
    }
}

/// Non-empty lines of a JSON-lines document, each parsed.
inline std::vector<Json> parse_json_lines(const std::string &text) {
    std::vector<Json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(parse_json(line));
    return out;
}

// ---------------------------------------------------------------------------
// Words
// ---------------------------------------------------------------------------

inline std::string hex_word(Word w, unsigned width) { return BitString::from_word(w, width).hex(); }

inline Word parse_hex_word(const std::string &s, unsigned width) {
    std::string digits = s;
    if (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0) digits = digits.substr(2);
    if (digits.empty() || digits.size() > 8) throw Error(Errc::ParseError, "bad hex word '" + s + "'");
    std::uint64_t v = 0;
    for (char ch : digits) {
        int d;
        if (ch >= '0' && ch <= '9') d = ch - '0';
        else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
        else throw Error(Errc::ParseError, "bad hex word '" + s + "'");
        v = v * 16 + static_cast<std::uint64_t>(d);
    }
    if (v >> width) throw Error(Errc::WordOutOfRange, "word " + s + " wider than " + std::to_string(width) + " bits");
    return static_cast<Word>(v);
}

inline std::string message_text(const BitString &m) { return std::to_string(m.size()) + ":" + m.hex(); }

inline BitString parse_message(const std::string &s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw Error(Errc::ParseError, "message without bit count: " + s);
    try {
        return BitString::from_hex(std::stoull(s.substr(0, colon)), s.substr(colon + 1));
    } catch (const std::logic_error &) {
        throw Error(Errc::ParseError, "bad message " + s);
    }
}

inline Json cost_json(const Cost &c) { return to_string(c); }

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

inline Json graph_to_json(const Dag &g) {
    Json edges = Json::array();
    for (const Edge &e : g.edges()) edges.push_back({e.first, e.second});
    return Json{{"nodes", g.node_count()}, {"delta", g.delta()}, {"edges", edges}};
}

inline std::string graph_to_text(const Dag &g) { return graph_to_json(g).dump() + "\n"; }

inline Dag graph_from_json(const Json &j) {
    try {
        const auto nodes = j.at("nodes").get<std::size_t>();
        std::vector<Edge> edges;
        for (const Json &e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw Error(Errc::ParseError, "edge must be a pair");
            edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
        }
        std::optional<std::size_t> delta;
        if (j.contains("delta")) delta = j.at("delta").get<std::size_t>();
        return Dag::build(nodes, std::move(edges), delta);
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::ParseError, std::string("graph: ") + e.what());
    }
}

inline Dag graph_from_text(const std::string &text) { return graph_from_json(parse_json(text)); }

// ---------------------------------------------------------------------------
// Pebblings (JSON lines, one record per round)
// ---------------------------------------------------------------------------

inline Json ids_json(const NodeSet &s) { return Json(s.ids()); }

inline NodeSet ids_from_json(const Json &j) {
    if (!j.is_array()) throw Error(Errc::ParseError, "node list must be an array");
    std::vector<NodeId> ids;
    for (const Json &v : j) ids.push_back(v.get<NodeId>());
    return NodeSet(std::move(ids));
}

inline std::string black_to_text(const BlackPebbling &p) {
    std::string out;
    for (std::size_t i = 0; i < p.configs.size(); ++i) out += Json{{"i", i}, {"P", ids_json(p.configs[i])}}.dump() + "\n";
    return out;
}

inline std::string redblue_to_text(const RedBluePebbling &rb) {
    std::string out;
    for (std::size_t i = 0; i < rb.configs.size(); ++i)
        out += Json{{"i", i}, {"B", ids_json(rb.configs[i].blue)}, {"R", ids_json(rb.configs[i].red)}}.dump() + "\n";
    return out;
}

namespace detail {

inline void check_round_index(const Json &rec, std::size_t expected) {
    if (rec.at("i").get<std::size_t>() != expected)
        throw Error(Errc::ParseError, "round records must be consecutive from 0");
}

}  // namespace detail

inline BlackPebbling black_from_text(const std::string &text) {
    BlackPebbling p;
    try {
        for (const Json &rec : parse_json_lines(text)) {
            detail::check_round_index(rec, p.configs.size());
            p.configs.push_back(ids_from_json(rec.at("P")));
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::ParseError, std::string("black pebbling: ") + e.what());
    }
    return p;
}

inline RedBluePebbling redblue_from_text(const std::string &text, std::size_t red_budget) {
    RedBluePebbling rb;
    rb.red_budget = red_budget;
    try {
        for (const Json &rec : parse_json_lines(text)) {
            detail::check_round_index(rec, rb.configs.size());
            rb.configs.push_back({ids_from_json(rec.at("B")), ids_from_json(rec.at("R"))});
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::ParseError, std::string("red-blue pebbling: ") + e.what());
    }
    return rb;
}

inline Json partition_report(const IntervalPartition &part, const std::vector<Cost> &interval_costs) {
    Json crit = Json::array();
    for (const NodeSet &c : part.critical) crit.push_back(ids_json(c));
    Json costs = Json::array();
    for (const Cost &c : interval_costs) costs.push_back(cost_json(c));
    return Json{{"boundaries", part.boundaries}, {"critical", crit}, {"interval_costs", costs}};
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

inline std::string hash_text(std::uint64_t h) {
    static const char *digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int k = 15; k >= 0; --k, h >>= 4) s[static_cast<std::size_t>(k)] = digits[h & 15];
    return s;
}

inline std::string trace_to_text(const ExecutionTrace &tr) {
    const unsigned n = tr.width_bits;
    std::string out = Json{{"graph_hash", hash_text(tr.graph_hash)},
                           {"n", n},
                           {"seed", tr.seed},
                           {"cache_words", tr.cache_words}}
                          .dump() +
                      "\n";
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
        const TraceRound &r = tr.rounds[i];
        Json queries = Json::array();
        for (const QueryRecord &q : r.queries)
            queries.push_back({std::string(1, direction_sign(q.direction)), hex_word(q.input, n), hex_word(q.output, n)});
        Json outs = Json::array();
        for (const auto &[v, w] : r.out) outs.push_back({v, hex_word(w, n)});
        Json to_mem = Json::array(), from_mem = Json::array();
        for (const BitString &m : r.to_mem) to_mem.push_back(message_text(m));
        for (const BitString &m : r.from_mem) from_mem.push_back(message_text(m));
        out += Json{{"i", i},
                    {"sigma_bits", r.sigma_bits},
                    {"zeta_bits", r.zeta_bits},
                    {"queries", queries},
                    {"out", outs},
                    {"to_mem", to_mem},
                    {"from_mem", from_mem}}
                   .dump() +
               "\n";
    }
    return out;
}

inline ExecutionTrace trace_from_text(const std::string &text) {
    const std::vector<Json> lines = parse_json_lines(text);
    if (lines.empty()) throw Error(Errc::ParseError, "trace has no header");
    ExecutionTrace tr;
    try {
        const Json &h = lines[0];
        tr.graph_hash = std::stoull(h.at("graph_hash").get<std::string>(), nullptr, 16);
        tr.width_bits = h.at("n").get<unsigned>();
        tr.seed = h.at("seed").get<std::uint64_t>();
        tr.cache_words = h.at("cache_words").get<std::size_t>();
        for (std::size_t k = 1; k < lines.size(); ++k) {
            const Json &rec = lines[k];
            detail::check_round_index(rec, tr.rounds.size());
            TraceRound r;
            r.sigma_bits = rec.at("sigma_bits").get<std::uint64_t>();
            r.zeta_bits = rec.at("zeta_bits").get<std::uint64_t>();
            const auto tag = static_cast<std::uint32_t>(k - 1);
            for (const Json &q : rec.at("queries")) {
                const std::string sign = q.at(0).get<std::string>();
                if (sign != "+" && sign != "-") throw Error(Errc::ParseError, "query direction must be + or -");
                r.queries.push_back({sign == "+" ? Direction::Forward : Direction::Inverse,
                                     parse_hex_word(q.at(1).get<std::string>(), tr.width_bits),
                                     parse_hex_word(q.at(2).get<std::string>(), tr.width_bits), tag});
            }
            for (const Json &o : rec.at("out"))
                r.out.emplace_back(o.at(0).get<NodeId>(), parse_hex_word(o.at(1).get<std::string>(), tr.width_bits));
            for (const Json &m : rec.at("to_mem")) r.to_mem.push_back(parse_message(m.get<std::string>()));
            for (const Json &m : rec.at("from_mem")) r.from_mem.push_back(parse_message(m.get<std::string>()));
            tr.rounds.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::ParseError, std::string("trace: ") + e.what());
    } catch (const std::logic_error &e) {
        throw Error(Errc::ParseError, std::string("trace: ") + e.what());
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Hints and prediction reports
// ---------------------------------------------------------------------------

inline Json hint_to_json(const Hint &h) {
    Json L = Json::array(), H = Json::array(), msgs = Json::array();
    for (const auto &l : h.L) L.push_back(l ? Json(*l) : Json(nullptr));
    for (const auto &w : h.H) H.push_back(w ? Json(hex_word(*w, h.width_bits)) : Json(nullptr));
    for (const TranscriptMessage &m : h.messages)
        msgs.push_back({{"round", m.round},
                        {"dir", m.dir == MessageDir::ToMemory ? "to_mem" : "from_mem"},
                        {"bits", message_text(m.payload)}});
    return Json{{"interval", h.interval_index},
                {"window", {h.window_start, h.window_end}},
                {"critical_nodes", h.critical_nodes},
                {"Q", h.Q},
                {"W", h.W},
                {"L", L},
                {"H", H},
                {"snapshot_nodes", h.snapshot_nodes},
                {"cache_snapshot", message_text(h.cache_snapshot)},
                {"messages", msgs},
                {"bits",
                 {{"critical_list", h.bits.critical_list},
                  {"Q", h.bits.q},
                  {"W", h.bits.w},
                  {"L", h.bits.l},
                  {"H", h.bits.h},
                  {"snapshot", h.bits.snapshot},
                  {"messages", h.bits.messages},
                  {"total", h.bits.total()}}}};
}

inline Json prediction_report_to_json(const PredictionReport &r, unsigned width) {
    Json preds = Json::array();
    for (const Prediction &p : r.predictions)
        preds.push_back({{"node", p.node},
                         {"prelab", hex_word(p.prelab, width)},
                         {"predicted", hex_word(p.predicted, width)},
                         {"correct", p.correct}});
    return Json{{"predictions", preds},
                {"all_correct", r.all_correct},
                {"forbidden_queries", r.forbidden_queries},
                {"oracle_queries", r.oracle_queries},
                {"oracle_fallbacks", r.oracle_fallbacks},
                {"completion_queries", r.completion_queries},
                {"answered_from_list", r.answered_from_list},
                {"adversary_queries", r.adversary_queries}};
}

inline Json hint_budget_to_json(const HintBudget &b) {
    return Json{{"critical_list", b.critical_list}, {"Q", b.q},
                {"W", b.w},
                {"L", b.l},
                {"H", b.h},
                {"snapshot_messages", b.snapshot_messages},
                {"total", b.total},
                {"regime_total", b.regime_total},
                {"in_regime", b.in_regime},
                {"theorem1_regime", b.theorem1_regime}};
}

}  // namespace rbpebble
