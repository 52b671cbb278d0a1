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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rbpebble/common.hpp"
#include "rbpebble/graph.hpp"
#include "rbpebble/label.hpp"
#include "rbpebble/pebble.hpp"
#include "rbpebble/perm.hpp"

namespace rbpebble {

/// Bit string, most significant bit first.
class BitString {
  public:
    BitString() = default;

    static BitString from_word(Word w, unsigned width) {
        BitString s;
        s.append(w, width);
        return s;
    }

    void append(Word w, unsigned width) {
        for (unsigned k = width; k-- > 0;) bits_.push_back((w >> k) & 1u);
    }
    void append(const BitString &o) { bits_.insert(bits_.end(), o.bits_.begin(), o.bits_.end()); }

    Word read(std::size_t pos, unsigned width) const {
        if (pos + width > bits_.size()) throw Error(Errc::BadShape, "bit string read past end");
        Word w = 0;
        for (unsigned k = 0; k < width; ++k) w = (w << 1) | static_cast<Word>(bits_[pos + k]);
        return w;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    /// Hex of the bits read as one big-endian integer, zero-padded to ceil(bits/4) digits.
    std::string hex() const {
        static const char *digits = "0123456789abcdef";
        const std::size_t ndig = (bits_.size() + 3) / 4;
        const std::size_t pad = ndig * 4 - bits_.size();
        std::string out;
        out.reserve(ndig);
        unsigned acc = 0;
        for (std::size_t i = 0; i < ndig * 4; ++i) {
            const bool bit = i >= pad && bits_[i - pad];
            acc = (acc << 1) | (bit ? 1u : 0u);
            if (i % 4 == 3) {
                out.push_back(digits[acc]);
                acc = 0;
            }
        }
        return out;
    }

    static BitString from_hex(std::size_t bits, const std::string &hex) {
        if (hex.size() != (bits + 3) / 4) throw Error(Errc::ParseError, "hex length does not match bit count");
        std::vector<bool> all;
        for (char ch : hex) {
            int d;
            if (ch >= '0' && ch <= '9') d = ch - '0';
            else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
            else throw Error(Errc::ParseError, "bad hex digit");
            for (int k = 3; k >= 0; --k) all.push_back((d >> k) & 1);
        }
        const std::size_t pad = all.size() - bits;
        for (std::size_t i = 0; i < pad; ++i)
            if (all[i]) throw Error(Errc::ParseError, "nonzero padding bits");
        BitString s;
        s.bits_.assign(all.begin() + static_cast<std::ptrdiff_t>(pad), all.end());
        return s;
    }

    friend bool operator==(const BitString &, const BitString &) = default;

  private:
    std::vector<bool> bits_;
};

/// One round: state sizes after the round, the query batch, outputs and messages.
struct TraceRound {
    std::uint64_t sigma_bits = 0;
    std::uint64_t zeta_bits = 0;
    std::vector<QueryRecord> queries;
    std::vector<std::pair<NodeId, Word>> out;
    std::vector<BitString> to_mem;
    std::vector<BitString> from_mem;

    friend bool operator==(const TraceRound &, const TraceRound &) = default;
};

/// rounds[0] is the initial state; the last round issues no queries.
struct ExecutionTrace {
    std::uint64_t graph_hash = 0;
    unsigned width_bits = 0;
    std::uint64_t seed = 0;
    std::size_t cache_words = 0;
    std::vector<TraceRound> rounds;

    std::vector<QueryRecord> ledger() const {
        std::vector<QueryRecord> all;
        for (const TraceRound &r : rounds) all.insert(all.end(), r.queries.begin(), r.queries.end());
        return all;
    }

    std::size_t query_count() const {
        std::size_t q = 0;
        for (const TraceRound &r : rounds) q += r.queries.size();
        return q;
    }
};

/// FNV-1a 64 of the canonical graph text {"nodes":N,"delta":D,"edges":[[u,v],...]}.
inline std::string canonical_graph_text(const Dag &g) {
    std::string s = "{\"nodes\":" + std::to_string(g.node_count()) + ",\"delta\":" + std::to_string(g.delta()) +
                    ",\"edges\":[";
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        if (i) s += ',';
        s += '[' + std::to_string(g.edges()[i].first) + ',' + std::to_string(g.edges()[i].second) + ']';
    }
    return s + "]}";
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t graph_hash(const Dag &g) { return fnv1a64(canonical_graph_text(g)); }

inline std::uint64_t cmc(const ExecutionTrace &tr) {
    std::uint64_t total = 0;
    for (const TraceRound &r : tr.rounds) total += r.sigma_bits + r.zeta_bits;
    return total;
}

/// Words per message, rounding each message up to whole n-bit words.
inline std::uint64_t words_moved(const ExecutionTrace &tr) {
    const std::uint64_t n = tr.width_bits == 0 ? 1 : tr.width_bits;
    std::uint64_t words = 0;
    for (const TraceRound &r : tr.rounds) {
        for (const BitString &m : r.to_mem) words += (m.size() + n - 1) / n;
        for (const BitString &m : r.from_mem) words += (m.size() + n - 1) / n;
    }
    return words;
}

inline Cost ecost(const ExecutionTrace &tr, const CostModel &cm) {
    return cm.c_r * static_cast<std::int64_t>(tr.query_count()) +
           cm.c_b * static_cast<std::int64_t>(words_moved(tr));
}

/**
 * Honest evaluator following a red-blue pebbling: each red move is one forward
 * query on the node's prelabel, each fetch one message carrying the stored
 * label, and each new blue pebble one message writing the cached label out.
 */
inline ExecutionTrace execute_redblue(const Dag &g, Permutation &p, const InputVector &x, const RedBluePebbling &rb,
                                      const CostModel &cm, std::uint64_t seed = 0) {
    if (rb.red_budget > cm.cache_words)
        throw Error(Errc::BudgetExceedsCache, "red budget " + std::to_string(rb.red_budget) + " > cache of " +
                                                  std::to_string(cm.cache_words) + " words");
    if (auto why = redblue_violation(g, rb)) throw Error(Errc::IllegalPebbling, *why);
    if (x.size() != g.sources().size()) throw Error(Errc::InputLengthMismatch, "input length != source count");

    const unsigned n = p.width();
    ExecutionTrace tr;
    tr.graph_hash = graph_hash(g);
    tr.width_bits = n;
    tr.seed = seed;
    tr.cache_words = cm.cache_words;
    tr.rounds.push_back(TraceRound{static_cast<std::uint64_t>(n) * x.size(), 0, {}, {}, {}, {}});

    std::unordered_map<NodeId, Word> cache, memory;
    for (std::size_t i = 1; i <= rb.rounds(); ++i) {
        const RBConfig &prev = rb.configs[i - 1];
        const RBConfig &cur = rb.configs[i];
        TraceRound round;
        const auto tag = static_cast<std::uint32_t>(i);
        std::unordered_map<NodeId, Word> next;
        for (NodeId v : cur.red) {
            if (prev.red.contains(v)) {
                next[v] = cache.at(v);
            } else if (detail::preds_within(g, v, prev.red)) {
                Word pre = 0;
                if (auto si = g.source_index(v)) pre = x[*si];
                else
                    for (NodeId u : g.pred(v)) pre ^= cache.at(u);
                const Word post = p.query(Direction::Forward, pre, tag);
                round.queries.push_back(p.ledger().back());
                next[v] = pre ^ post;
                round.out.emplace_back(v, pre ^ post);
            } else {
                next[v] = memory.at(v);
                round.from_mem.push_back(BitString::from_word(memory.at(v), n));
            }
        }
        for (NodeId v : cur.blue - prev.blue) {
            memory[v] = cache.at(v);
            round.to_mem.push_back(BitString::from_word(cache.at(v), n));
        }
        for (NodeId v : prev.blue - cur.blue) memory.erase(v);
        cache = std::move(next);
        round.sigma_bits = static_cast<std::uint64_t>(n) * cur.red.size();
        round.zeta_bits = static_cast<std::uint64_t>(n) * cur.blue.size();
        tr.rounds.push_back(std::move(round));
    }
    TraceRound terminal;
    terminal.sigma_bits = tr.rounds.back().sigma_bits;
    terminal.zeta_bits = tr.rounds.back().zeta_bits;
    tr.rounds.push_back(std::move(terminal));
    return tr;
}

// ---------------------------------------------------------------------------
// Correct and critical calls
// ---------------------------------------------------------------------------

struct CallInfo {
    std::optional<NodeId> correct_for;
    std::vector<NodeId> critical_for;
};

struct CallClassification {
    std::vector<CallInfo> calls;
    std::vector<std::optional<std::size_t>> first_correct;
    std::vector<std::optional<std::size_t>> first_critical;
    std::vector<std::optional<NodeId>> first_critical_witness;  // successor whose correct call it is
    std::vector<std::optional<std::size_t>> last_correct;
};

/// Word -> node lookups for prelabels and postlabels; collisions make calls ambiguous.
class LabelIndex {
  public:
    explicit LabelIndex(const LabelMap &lm) {
        if (detect_collision(lm)) throw Error(Errc::AmbiguousLabels, "labels or prelabels collide");
        for (NodeId v = 0; v < lm.size(); ++v) {
            by_prelab_[lm.prelab[v]] = v;
            by_postlab_[lm.postlab[v]] = v;
        }
    }

    std::optional<NodeId> correct_for(const QueryRecord &q) const {
        const auto &table = q.direction == Direction::Forward ? by_prelab_ : by_postlab_;
        auto it = table.find(q.input);
        if (it == table.end()) return std::nullopt;
        return it->second;
    }

  private:
    std::unordered_map<Word, NodeId> by_prelab_;
    std::unordered_map<Word, NodeId> by_postlab_;
};

/**
 * Labels every ledger entry. Without `window_start` a call correct for v is
 * critical for each u in pred(v) (u's label is consumed); with a window start i
 * only entries in rounds > i count, and the call is critical for u only if no
 * correct call for u occurred in an earlier round of the window. In both modes
 * the first correct call for a sink is critical for the sink itself.
 */
inline CallClassification classify_calls(const Dag &g, const LabelMap &lm, std::span<const QueryRecord> ledger,
                                         std::optional<std::uint32_t> window_start = std::nullopt) {
    const LabelIndex index(lm);
    const std::size_t n = g.node_count();
    CallClassification cc;
    cc.calls.resize(ledger.size());
    cc.first_correct.assign(n, std::nullopt);
    cc.first_critical.assign(n, std::nullopt);
    cc.first_critical_witness.assign(n, std::nullopt);
    cc.last_correct.assign(n, std::nullopt);
    std::vector<std::optional<std::uint32_t>> first_window_round(n);

    for (std::size_t e = 0; e < ledger.size(); ++e) {
        const QueryRecord &q = ledger[e];
        const auto v = index.correct_for(q);
        cc.calls[e].correct_for = v;
        if (!v) continue;
        const bool in_window = !window_start || q.round > *window_start;
        if (in_window) {
            for (NodeId u : g.pred(*v)) {
                const bool seen_earlier = window_start && first_window_round[u] && *first_window_round[u] < q.round;
                if (seen_earlier) continue;
                cc.calls[e].critical_for.push_back(u);
                if (!cc.first_critical[u]) {
                    cc.first_critical[u] = e;
                    cc.first_critical_witness[u] = *v;
                }
            }
            if (g.is_sink(*v) && !cc.first_correct[*v]) {
                cc.calls[e].critical_for.push_back(*v);
                if (!cc.first_critical[*v]) {
                    cc.first_critical[*v] = e;
                    cc.first_critical_witness[*v] = *v;
                }
            }
        }
        if (!cc.first_correct[*v] && in_window) cc.first_correct[*v] = e;
        cc.last_correct[*v] = e;
        if (in_window && !first_window_round[*v]) first_window_round[*v] = q.round;
    }
    return cc;
}

/**
 * Black pebbling read off a trace: v is held in rounds [i, i'-1] when round i'
 * has a correct call for a successor of v and i is the latest earlier round
 * with a correct call for v; a sink is held at the round of its first correct call.
 */
inline BlackPebbling extract_black_pebbling(const Dag &g, const LabelMap &lm, const ExecutionTrace &tr) {
    const LabelIndex index(lm);
    const std::size_t n = g.node_count();
    const std::size_t T = tr.rounds.empty() ? 0 : tr.rounds.size() - 1;

    // Rounds with at least one correct call, per node.
    std::vector<std::vector<std::size_t>> correct_rounds(n);
    for (std::size_t i = 1; i <= T; ++i)
        for (const QueryRecord &q : tr.rounds[i].queries)
            if (auto v = index.correct_for(q))
                if (correct_rounds[*v].empty() || correct_rounds[*v].back() != i) correct_rounds[*v].push_back(i);

    for (NodeId s : g.sinks())
        if (correct_rounds[s].empty())
            throw Error(Errc::IncompleteEvaluation, "sink " + std::to_string(s) + " never receives a correct call");

    std::vector<std::vector<NodeId>> held(T + 1);
    for (NodeId v = 0; v < n; ++v) {
        std::vector<bool> mark(T + 1, false);
        for (NodeId w : g.succ(v))
            for (std::size_t use : correct_rounds[w]) {
                // latest correct call for v strictly before the successor's call
                auto it = std::lower_bound(correct_rounds[v].begin(), correct_rounds[v].end(), use);
                if (it == correct_rounds[v].begin()) continue;
                for (std::size_t j = *std::prev(it); j < use; ++j) mark[j] = true;
            }
        if (g.is_sink(v)) mark[correct_rounds[v].front()] = true;
        for (std::size_t j = 0; j <= T; ++j)
            if (mark[j]) held[j].push_back(v);
    }
    BlackPebbling p;
    for (auto &ids : held) p.configs.emplace_back(std::move(ids));
    return p;
}

}  // namespace rbpebble
