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
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rbpebble/common.hpp"
#include "rbpebble/exec.hpp"
#include "rbpebble/extend.hpp"
#include "rbpebble/graph.hpp"
#include "rbpebble/label.hpp"
#include "rbpebble/pebble.hpp"
#include "rbpebble/perm.hpp"

namespace rbpebble {

enum class MessageDir : std::uint8_t { ToMemory, FromMemory };

struct TranscriptMessage {
    std::uint32_t round;
    MessageDir dir;
    BitString payload;

    friend bool operator==(const TranscriptMessage &, const TranscriptMessage &) = default;
};

struct HintBits {
    std::uint64_t critical_list = 0;
    std::uint64_t q = 0;
    std::uint64_t w = 0;
    std::uint64_t l = 0;
    std::uint64_t h = 0;
    std::uint64_t snapshot = 0;
    std::uint64_t messages = 0;

    std::uint64_t total() const { return critical_list + q + w + l + h + snapshot + messages; }
};

/**
 * Predictor input for the window of trace rounds (a, b]. Call indices in Q and
 * L count the window's queries from zero.
 */
struct Hint {
    std::size_t interval_index = 0;
    std::uint32_t window_start = 0;  // a
    std::uint32_t window_end = 0;    // b
    unsigned width_bits = 0;
    std::size_t node_count = 0;
    std::size_t ledger_length = 0;  // q, the whole run's query count
    std::vector<NodeId> critical_nodes;
    std::vector<std::size_t> Q;
    std::vector<NodeId> W;
    std::vector<std::optional<std::size_t>> L;
    std::vector<std::optional<Word>> H;
    std::vector<NodeId> snapshot_nodes;  // node ids of the cache snapshot, ascending
    BitString cache_snapshot;
    std::vector<TranscriptMessage> messages;
    HintBits bits;
};

/// Bit sizes of each hint component, with log taken as ceil(log2(.)).
inline HintBits hint_bit_sizes(std::size_t critical_count, std::size_t h_present, std::size_t node_count,
                               std::size_t ledger_length, unsigned width_bits, std::uint64_t snapshot_bits,
                               std::uint64_t message_bits) {
    HintBits b;
    const std::uint64_t c = critical_count;
    b.critical_list = c * ceil_log2(node_count);
    b.w = c * ceil_log2(node_count);
    b.q = c * ceil_log2(ledger_length);
    b.l = c * ceil_log2(ledger_length);
    b.h = static_cast<std::uint64_t>(h_present) * width_bits;
    b.snapshot = snapshot_bits;
    b.messages = message_bits;
    return b;
}

/**
 * Hint for interval `interval_index` of a partition of the trace's extracted
 * black pebbling. `rb` is the pebbling the honest run followed; the cache
 * snapshot holds the labels of R_a.
 */
inline Hint build_hint(const Dag &g, const LabelMap &lm, const ExecutionTrace &tr, const RedBluePebbling &rb,
                       const IntervalPartition &part, std::size_t interval_index) {
    if (interval_index >= part.interval_count())
        throw Error(Errc::RoundOutOfRange, "interval " + std::to_string(interval_index) + " does not exist");
    if (interval_index + 1 == part.interval_count())
        throw Error(Errc::LastInterval, "the last interval has no successor to hand off to");
    const auto a = static_cast<std::uint32_t>(part.boundaries[interval_index]);
    const auto b = static_cast<std::uint32_t>(part.boundaries[interval_index + 1]);
    if (b >= tr.rounds.size() || a > rb.rounds()) throw Error(Errc::RoundOutOfRange, "window outside the trace");

    std::vector<QueryRecord> prefix;
    std::size_t base = 0;
    for (std::uint32_t i = 0; i <= b; ++i) {
        if (i <= a) base += tr.rounds[i].queries.size();
        prefix.insert(prefix.end(), tr.rounds[i].queries.begin(), tr.rounds[i].queries.end());
    }
    const CallClassification cc = classify_calls(g, lm, prefix, a);

    Hint h;
    h.interval_index = interval_index;
    h.window_start = a;
    h.window_end = b;
    h.width_bits = tr.width_bits;
    h.node_count = g.node_count();
    h.ledger_length = tr.query_count();

    std::vector<std::pair<std::size_t, NodeId>> order;
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (cc.first_critical[u] && cc.first_critical_witness[u] != u) order.emplace_back(*cc.first_critical[u], u);
    if (order.empty()) throw Error(Errc::NoCriticalNodes, "interval has an empty critical set");
    std::sort(order.begin(), order.end());

    for (const auto &[idx, u] : order) {
        h.critical_nodes.push_back(u);
        h.Q.push_back(idx - base);
        h.W.push_back(*cc.first_critical_witness[u]);
        if (cc.first_correct[u]) h.L.push_back(*cc.first_correct[u] - base);
        else h.L.push_back(std::nullopt);
    }
    std::size_t h_present = 0;
    for (std::size_t j = 0; j < h.critical_nodes.size(); ++j) {
        const bool shared = std::find(h.Q.begin() + static_cast<std::ptrdiff_t>(j) + 1, h.Q.end(), h.Q[j]) != h.Q.end();
        if (shared) {
            h.H.push_back(lm.lab[h.critical_nodes[j]]);
            ++h_present;
        } else {
            h.H.push_back(std::nullopt);
        }
    }

    for (NodeId v : rb.configs[a].red) {
        h.snapshot_nodes.push_back(v);
        h.cache_snapshot.append(lm.lab[v], tr.width_bits);
    }
    std::uint64_t message_bits = 0;
    for (std::uint32_t i = a + 1; i <= b; ++i) {
        for (const BitString &m : tr.rounds[i].to_mem) {
            h.messages.push_back({i, MessageDir::ToMemory, m});
            message_bits += m.size();
        }
        for (const BitString &m : tr.rounds[i].from_mem) {
            h.messages.push_back({i, MessageDir::FromMemory, m});
            message_bits += m.size();
        }
    }
    h.bits = hint_bit_sizes(h.critical_nodes.size(), h_present, h.node_count, h.ledger_length, h.width_bits,
                            h.cache_snapshot.size(), message_bits);
    return h;
}

// ---------------------------------------------------------------------------
// Hint budget
// ---------------------------------------------------------------------------

struct HintBudget {
    std::uint64_t critical_list = 0;
    std::uint64_t q = 0;
    std::uint64_t w = 0;
    std::uint64_t l = 0;
    std::uint64_t h = 0;
    std::uint64_t snapshot_messages = 0;
    std::uint64_t total = 0;           // sum of the component bounds
    std::uint64_t regime_total = 0;    // (10 delta - 3) m n
    bool in_regime = false;            // |V| <= 2^{n/8delta} and q <= 2^{n/8delta}
    bool theorem1_regime = false;      // q <= 2^{n/10delta} and |V| <= 2^{n/4delta}
    bool vertex_bound_4delta = false;  // |V| <= 2^{n/4delta}
};

namespace detail {

/// x <= 2^{n/k}, decided exactly as x^k <= 2^n.
inline bool within_root_of_pow2(std::uint64_t x, std::uint64_t n, std::uint64_t k) {
    using boost::multiprecision::cpp_int;
    cpp_int lhs = 1;
    for (std::uint64_t i = 0; i < k; ++i) lhs *= x;
    return lhs <= (cpp_int(1) << static_cast<unsigned>(n));
}

}  // namespace detail

inline HintBudget hint_budget(std::size_t delta, std::size_t m, unsigned n, std::size_t node_count, std::size_t q) {
    HintBudget hb;
    const std::uint64_t slots = 10 * static_cast<std::uint64_t>(delta) * m;
    hb.critical_list = slots * ceil_log2(node_count);
    hb.w = slots * ceil_log2(node_count);
    hb.q = slots * ceil_log2(q);
    hb.l = slots * ceil_log2(q);
    hb.h = 10 * static_cast<std::uint64_t>(delta - 1) * m * n;
    hb.snapshot_messages = 2 * static_cast<std::uint64_t>(m) * n;
    hb.total = hb.critical_list + hb.w + hb.q + hb.l + hb.h + hb.snapshot_messages;
    hb.regime_total = (10 * static_cast<std::uint64_t>(delta) - 3) * m * n;
    hb.in_regime = detail::within_root_of_pow2(node_count, n, 8 * delta) && detail::within_root_of_pow2(q, n, 8 * delta);
    hb.vertex_bound_4delta = detail::within_root_of_pow2(node_count, n, 4 * delta);
    hb.theorem1_regime = detail::within_root_of_pow2(q, n, 10 * delta) && hb.vertex_bound_4delta;
    return hb;
}

// ---------------------------------------------------------------------------
// Guarded permutation and adversaries
// ---------------------------------------------------------------------------

/**
 * Oracle access for the predictor. Forward queries at a predicted prelabel
 * and inverse queries at its postlabel are logged and refused.
 */
class GuardedPermutation {
  public:
    GuardedPermutation(const Permutation &p, const std::vector<Word> &forward_forbidden,
                       const std::vector<Word> &inverse_forbidden)
        : p_(p), fwd_(forward_forbidden.begin(), forward_forbidden.end()),
          inv_(inverse_forbidden.begin(), inverse_forbidden.end()) {}

    Word query(Direction dir, Word x, std::uint32_t round) {
        const bool forbidden = dir == Direction::Forward ? fwd_.count(x) > 0 : inv_.count(x) > 0;
        if (forbidden) {
            rejected_.push_back({dir, x, 0, round});
            throw Error(Errc::ForbiddenQuery, std::string("predictor queried ") + direction_sign(dir) +
                                                  " at a point it must predict");
        }
        const Word y = dir == Direction::Forward ? p_.forward(x) : p_.inverse(x);
        allowed_.push_back({dir, x, y, round});
        return y;
    }

    const std::vector<QueryRecord> &allowed() const { return allowed_; }
    const std::vector<QueryRecord> &rejected() const { return rejected_; }

  private:
    const Permutation &p_;
    std::unordered_set<Word> fwd_;
    std::unordered_set<Word> inv_;
    std::vector<QueryRecord> allowed_;
    std::vector<QueryRecord> rejected_;
};

struct OracleCall {
    Direction direction;
    Word input;
};

/// Round/query protocol: next_queries() for the coming round, then receive() its answers.
class Adversary {
  public:
    virtual ~Adversary() = default;
    virtual bool done() const = 0;
    virtual std::vector<OracleCall> next_queries() = 0;
    virtual void receive(const std::vector<Word> &answers) = 0;
};

/**
 * Re-runs the honest evaluator over rounds a+1..b starting from the hint's
 * cache snapshot, reading fetched labels from the transcript in order.
 */
class HonestReplayAdversary : public Adversary {
  public:
    HonestReplayAdversary(const Dag &g, const RedBluePebbling &rb, const InputVector &x, const Hint &hint)
        : g_(g), rb_(rb), x_(x), n_(hint.width_bits), round_(hint.window_start), end_(hint.window_end) {
        for (std::size_t k = 0; k < hint.snapshot_nodes.size(); ++k)
            cache_[hint.snapshot_nodes[k]] = hint.cache_snapshot.read(k * n_, n_);
        for (const TranscriptMessage &m : hint.messages)
            if (m.dir == MessageDir::FromMemory) fetched_.push_back(m.payload.read(0, n_));
    }

    bool done() const override { return round_ >= end_; }

    std::vector<OracleCall> next_queries() override {
        const RBConfig &prev = rb_.configs[round_];
        const RBConfig &cur = rb_.configs[round_ + 1];
        pending_.clear();
        std::vector<OracleCall> calls;
        for (NodeId v : cur.red) {
            if (prev.red.contains(v) || !detail::preds_within(g_, v, prev.red)) continue;
            Word pre = 0;
            if (auto si = g_.source_index(v)) pre = x_[*si];
            else
                for (NodeId u : g_.pred(v)) pre ^= cache_.at(u);
            pending_.emplace_back(v, pre);
            calls.push_back({Direction::Forward, pre});
        }
        return calls;
    }

    void receive(const std::vector<Word> &answers) override {
        const RBConfig &prev = rb_.configs[round_];
        const RBConfig &cur = rb_.configs[round_ + 1];
        std::unordered_map<NodeId, Word> next;
        for (std::size_t k = 0; k < pending_.size(); ++k) next[pending_[k].first] = pending_[k].second ^ answers.at(k);
        for (NodeId v : cur.red) {
            if (next.count(v)) continue;
            if (prev.red.contains(v)) next[v] = cache_.at(v);
            else next[v] = fetched_.at(fetch_pos_++);
        }
        cache_ = std::move(next);
        ++round_;
    }

  private:
    const Dag &g_;
    const RedBluePebbling &rb_;
    const InputVector &x_;
    unsigned n_;
    std::uint32_t round_;
    std::uint32_t end_;
    std::unordered_map<NodeId, Word> cache_;
    std::vector<Word> fetched_;
    std::size_t fetch_pos_ = 0;
    std::vector<std::pair<NodeId, Word>> pending_;
};

// ---------------------------------------------------------------------------
// Predictor
// ---------------------------------------------------------------------------

struct Prediction {
    NodeId node;
    Word prelab;
    Word predicted;
    bool correct;
};

struct PredictionReport {
    std::vector<Prediction> predictions;
    bool all_correct = false;
    std::size_t forbidden_queries = 0;
    std::size_t oracle_queries = 0;      // allowed queries made during the replay
    std::size_t oracle_fallbacks = 0;    // forward critical calls answered by the oracle (lab(w) unknown)
    std::size_t completion_queries = 0;  // queries spent completing prelabels after the replay
    std::size_t answered_from_list = 0;  // calls answered without the oracle
    std::size_t adversary_queries = 0;
};

namespace detail {

/// The predictor's running list of (prelab, postlab, lab) knowledge.
class PredictorState {
  public:
    PredictorState(const Dag &g, const InputVector &x) : g_(g), prelab_(g.node_count()), lab_(g.node_count()) {
        for (NodeId s : g.sources()) set_prelab(s, x[*g.source_index(s)]);
    }

    const std::optional<Word> &prelab(NodeId v) const { return prelab_[v]; }
    const std::optional<Word> &lab(NodeId v) const { return lab_[v]; }

    std::optional<NodeId> node_with_prelab(Word x) const {
        auto it = by_prelab_.find(x);
        if (it == by_prelab_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<NodeId> node_with_postlab(Word y) const {
        auto it = by_postlab_.find(y);
        if (it == by_postlab_.end()) return std::nullopt;
        return it->second;
    }

    void set_prelab(NodeId v, Word w) {
        if (prelab_[v]) return;
        prelab_[v] = w;
        by_prelab_[w] = v;
        index_postlab(v);
    }

    void set_lab(NodeId v, Word w) {
        if (lab_[v]) return;
        lab_[v] = w;
        index_postlab(v);
        for (NodeId s : g_.succ(v)) {
            if (prelab_[s]) continue;
            Word acc = 0;
            bool ready = true;
            for (NodeId u : g_.pred(s)) {
                if (!lab_[u]) {
                    ready = false;
                    break;
                }
                acc ^= *lab_[u];
            }
            if (ready) set_prelab(s, acc);
        }
    }

  private:
    void index_postlab(NodeId v) {
        if (prelab_[v] && lab_[v]) by_postlab_[*prelab_[v] ^ *lab_[v]] = v;
    }

    const Dag &g_;
    std::vector<std::optional<Word>> prelab_;
    std::vector<std::optional<Word>> lab_;
    std::unordered_map<Word, NodeId> by_prelab_;
    std::unordered_map<Word, NodeId> by_postlab_;
};

}  // namespace detail

/**
 * Runs the adversary over the hint's window, answering its oracle calls. For
 * each round the critical calls are resolved first (critical nodes in reverse
 * topological order), then every call is answered from the running list when
 * possible and from the guarded oracle otherwise. Predictions are checked
 * against `truth` with unrecorded lookups.
 */
inline PredictionReport run_predictor(const Dag &g, const Hint &hint, const InputVector &x, Adversary &adversary,
                                      GuardedPermutation &oracle, const Permutation &truth) {
    PredictionReport report;
    detail::PredictorState st(g, x);
    const std::size_t c = hint.critical_nodes.size();
    std::unordered_map<NodeId, std::size_t> slot;
    for (std::size_t j = 0; j < c; ++j) slot[hint.critical_nodes[j]] = j;
    std::unordered_map<std::size_t, std::size_t> first_correct_at;  // window index -> slot
    for (std::size_t j = 0; j < c; ++j)
        if (hint.L[j]) first_correct_at[*hint.L[j]] = j;

    std::vector<std::size_t> reverse_topo(c);
    for (std::size_t j = 0; j < c; ++j) reverse_topo[j] = j;
    std::sort(reverse_topo.begin(), reverse_topo.end(), [&](std::size_t p, std::size_t q) {
        return g.topo_index(hint.critical_nodes[p]) > g.topo_index(hint.critical_nodes[q]);
    });

    std::size_t base = 0;
    std::uint32_t round = hint.window_start;
    while (!adversary.done()) {
        ++round;
        const std::vector<OracleCall> calls = adversary.next_queries();
        report.adversary_queries += calls.size();
        std::vector<std::optional<Word>> answers(calls.size());

        // Critical calls of this round, in reverse topological order; a node whose
        // inputs are not yet known is retried after the others in the same round.
        auto try_resolve = [&](std::size_t j) {
            const NodeId v = hint.critical_nodes[j];
            const std::size_t k = hint.Q[j] - base;
            const OracleCall &call = calls[k];
            const NodeId w = hint.W[j];
            std::optional<Word> pre_w = st.prelab(w);
            if (!pre_w) {
                if (call.direction == Direction::Forward) {
                    pre_w = call.input;
                } else if (st.lab(w)) {
                    pre_w = *st.lab(w) ^ call.input;
                } else if (slot.count(w)) {
                    return false;  // w is critical: wait for its label
                } else {
                    pre_w = oracle.query(Direction::Inverse, call.input, round);
                    ++report.oracle_queries;
                    answers[k] = *pre_w;
                    st.set_prelab(w, *pre_w);
                    st.set_lab(w, *pre_w ^ call.input);
                }
            }
            Word lab_v = *pre_w;
            if (hint.H[j]) {
                lab_v = *hint.H[j];
            } else {
                for (NodeId u : g.pred(w)) {
                    if (u == v) continue;
                    std::optional<Word> lu = st.lab(u);
                    if (!lu && slot.count(u) && hint.H[slot[u]]) lu = hint.H[slot[u]];
                    if (!lu) return false;
                    lab_v ^= *lu;
                }
            }
            st.set_prelab(w, *pre_w);
            st.set_lab(v, lab_v);
            return true;
        };
        std::vector<std::size_t> todo;
        for (std::size_t j : reverse_topo)
            if (hint.Q[j] >= base && hint.Q[j] < base + calls.size() && !st.lab(hint.critical_nodes[j]))
                todo.push_back(j);
        for (bool progress = true; progress && !todo.empty();) {
            progress = false;
            std::vector<std::size_t> left;
            for (std::size_t j : todo) {
                if (st.lab(hint.critical_nodes[j]) || try_resolve(j)) progress = true;
                else left.push_back(j);
            }
            todo = std::move(left);
        }
        if (!todo.empty())
            throw Error(Errc::BadShape, "critical node " + std::to_string(hint.critical_nodes[todo.front()]) +
                                            " cannot be resolved from the hint");

        // Answer every call.
        for (std::size_t k = 0; k < calls.size(); ++k) {
            if (answers[k]) continue;
            const OracleCall &call = calls[k];
            const std::size_t idx = base + k;
            auto fc = first_correct_at.find(idx);
            if (fc != first_correct_at.end() && st.lab(hint.critical_nodes[fc->second])) {
                const NodeId v = hint.critical_nodes[fc->second];
                const Word ans = *st.lab(v) ^ call.input;
                answers[k] = ans;
                ++report.answered_from_list;
                st.set_prelab(v, call.direction == Direction::Forward ? call.input : ans);
                continue;
            }
            if (call.direction == Direction::Forward) {
                if (auto v = st.node_with_prelab(call.input); v && st.lab(*v)) {
                    answers[k] = *st.lab(*v) ^ call.input;
                    ++report.answered_from_list;
                    continue;
                }
            } else if (auto v = st.node_with_postlab(call.input)) {
                answers[k] = *st.lab(*v) ^ call.input;
                ++report.answered_from_list;
                continue;
            }
            const bool critical_call = std::any_of(hint.Q.begin(), hint.Q.end(), [&](std::size_t q) { return q == idx; });
            if (critical_call && call.direction == Direction::Forward) ++report.oracle_fallbacks;
            const Word ans = oracle.query(call.direction, call.input, round);
            ++report.oracle_queries;
            answers[k] = ans;
            if (call.direction == Direction::Forward) {
                if (auto v = st.node_with_prelab(call.input)) st.set_lab(*v, call.input ^ ans);
            } else if (auto v = st.node_with_prelab(ans)) {
                st.set_lab(*v, ans ^ call.input);
            }
        }

        std::vector<Word> out;
        for (const auto &a : answers) out.push_back(*a);
        adversary.receive(out);
        base += calls.size();
    }

    // Prelabels of critical nodes whose predecessors never appeared in the window:
    // evaluate non-critical ancestors with ordinary (allowed) queries.
    std::vector<std::optional<Word>> memo(g.node_count());
    auto label_of = [&](auto &&self, NodeId u) -> Word {
        if (st.lab(u)) return *st.lab(u);
        if (memo[u]) return *memo[u];
        Word pre = 0;
        if (auto si = g.source_index(u)) pre = x[*si];
        else
            for (NodeId p : g.pred(u)) pre ^= self(self, p);
        const Word lab = pre ^ oracle.query(Direction::Forward, pre, round + 1);
        ++report.completion_queries;
        memo[u] = lab;
        return lab;
    };

    report.all_correct = true;
    for (NodeId v : hint.critical_nodes) {
        Word pre;
        if (st.prelab(v)) pre = *st.prelab(v);
        else if (auto si = g.source_index(v)) pre = x[*si];
        else {
            pre = 0;
            for (NodeId p : g.pred(v)) pre ^= label_of(label_of, p);
        }
        const Word predicted = pre ^ *st.lab(v);
        const bool ok = truth.forward(pre) == predicted;
        report.all_correct = report.all_correct && ok;
        report.predictions.push_back({v, pre, predicted, ok});
    }
    report.forbidden_queries = oracle.rejected().size();
    return report;
}

/// Guard forbidding the critical nodes' true prelabels (forward) and postlabels (inverse).
inline GuardedPermutation guard_for(const Permutation &p, const LabelMap &lm, const Hint &hint) {
    std::vector<Word> fwd, inv;
    for (NodeId v : hint.critical_nodes) {
        fwd.push_back(lm.prelab[v]);
        inv.push_back(lm.postlab[v]);
    }
    return GuardedPermutation(p, fwd, inv);
}

// ---------------------------------------------------------------------------
// Guessing bound estimate
// ---------------------------------------------------------------------------

struct GuessEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    double bound = 1.0;  // 1 / 2^{kn - 1}, capped at 1
};

/**
 * A fixed guesser with no hint queries pi on 0..q-1 and then guesses pi on the
 * k points q..q+k-1, each time naming the smallest value neither seen nor
 * already guessed. Trial i uses permutation seed derive_seed(seed, i).
 */
inline GuessEstimate guess_bound_estimate(unsigned n, std::uint64_t q, std::uint64_t k, std::uint64_t trials,
                                          std::uint64_t seed) {
    if (trials == 0) throw Error(Errc::BadShape, "trials must be >= 1");
    const std::uint64_t domain = std::uint64_t{1} << n;
    if (q + k > domain) throw Error(Errc::BadShape, "q + k exceeds the domain");
    GuessEstimate est;
    est.trials = trials;
    const std::int64_t exponent = static_cast<std::int64_t>(k * n) - 1;
    est.bound = exponent <= 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(-exponent));
    for (std::uint64_t t = 0; t < trials; ++t) {
        Permutation p = Permutation::sample(n, derive_seed(seed, t));
        std::vector<bool> used(domain, false);
        for (std::uint64_t i = 0; i < q; ++i) used[p.query(Direction::Forward, static_cast<Word>(i), 1)] = true;
        bool all = true;
        Word next = 0;
        for (std::uint64_t i = 0; i < k; ++i) {
            while (used[next]) ++next;
            used[next] = true;
            all = all && p.forward(static_cast<Word>(q + i)) == next;
        }
        if (all) ++est.successes;
    }
    est.rate = static_cast<double>(est.successes) / static_cast<double>(trials);
    return est;
}

}  // namespace rbpebble
