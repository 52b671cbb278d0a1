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
#include <initializer_list>
#include <iterator>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace rbpebble {

using NodeId = std::uint32_t;
/// An n-bit word, n <= 24, stored right-aligned.
using Word = std::uint32_t;
using Cost = boost::rational<std::int64_t>;

enum class Errc {
    CycleDetected,
    DuplicateEdge,
    SelfLoop,
    NodeOutOfRange,
    IndegreeExceeded,
    TooLarge,
    BadShape,
    WidthOutOfRange,
    WordOutOfRange,
    InputLengthMismatch,
    RoundOutOfRange,
    StepTooWide,
    IllegalPebbling,
    BudgetExceedsCache,
    AmbiguousLabels,
    IncompleteEvaluation,
    LastInterval,
    NoCriticalNodes,
    ForbiddenQuery,
    ParseError,
};

inline const char *errc_name(Errc code) {
    switch (code) {
        case Errc::CycleDetected: return "CycleDetected";
        case Errc::DuplicateEdge: return "DuplicateEdge";
        case Errc::SelfLoop: return "SelfLoop";
        case Errc::NodeOutOfRange: return "NodeOutOfRange";
        case Errc::IndegreeExceeded: return "IndegreeExceeded";
        case Errc::TooLarge: return "TooLarge";
        case Errc::BadShape: return "BadShape";
        case Errc::WidthOutOfRange: return "WidthOutOfRange";
        case Errc::WordOutOfRange: return "WordOutOfRange";
        case Errc::InputLengthMismatch: return "InputLengthMismatch";
        case Errc::RoundOutOfRange: return "RoundOutOfRange";
        case Errc::StepTooWide: return "StepTooWide";
        case Errc::IllegalPebbling: return "IllegalPebbling";
        case Errc::BudgetExceedsCache: return "BudgetExceedsCache";
        case Errc::AmbiguousLabels: return "AmbiguousLabels";
        case Errc::IncompleteEvaluation: return "IncompleteEvaluation";
        case Errc::LastInterval: return "LastInterval";
        case Errc::NoCriticalNodes: return "NoCriticalNodes";
        case Errc::ForbiddenQuery: return "ForbiddenQuery";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure the library reports carries one of the `Errc` codes.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

/**
 * Sorted, duplicate-free set of node ids.
 *
 * Pebbling configurations are small and mostly iterated or compared, so a
 * sorted vector beats a tree set here and gives a canonical order for output.
 */
class NodeSet {
  public:
    using const_iterator = std::vector<NodeId>::const_iterator;

    NodeSet() = default;
    NodeSet(std::initializer_list<NodeId> ids) : ids_(ids) { normalize(); }
    explicit NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids)) { normalize(); }

    bool contains(NodeId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    const_iterator begin() const { return ids_.begin(); }
    const_iterator end() const { return ids_.end(); }
    const std::vector<NodeId> &ids() const { return ids_; }

    void insert(NodeId v) {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
        if (it == ids_.end() || *it != v) ids_.insert(it, v);
    }

    void erase(NodeId v) {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
        if (it != ids_.end() && *it == v) ids_.erase(it);
    }

    bool is_subset_of(const NodeSet &other) const {
        return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
    }

    friend NodeSet operator|(const NodeSet &a, const NodeSet &b) {
        NodeSet out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids_));
        return out;
    }
    friend NodeSet operator&(const NodeSet &a, const NodeSet &b) {
        NodeSet out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids_));
        return out;
    }
    friend NodeSet operator-(const NodeSet &a, const NodeSet &b) {
        NodeSet out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids_));
        return out;
    }
    NodeSet &operator|=(const NodeSet &o) { return *this = *this | o; }

    friend bool operator==(const NodeSet &a, const NodeSet &b) { return a.ids_ == b.ids_; }

  private:
    void normalize() {
        std::sort(ids_.begin(), ids_.end());
        ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    }

    std::vector<NodeId> ids_;
};

// ---------------------------------------------------------------------------
// Randomness. Every random choice in the project flows through `Rng`, which is
// std::mt19937_64 (fully specified by the standard) plus a rejection-sampled
// bounded draw, so results replay bit-for-bit across standard libraries.
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of trial `index` under master seed `seed`. Independent of worker count.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    bool coin(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

    /// Fisher-Yates, last index first.
    template <typename T>
    void shuffle(std::vector<T> &items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
constexpr std::uint64_t ceil_log2(std::uint64_t x) {
    std::uint64_t bits = 0;
    while (bits < 64 && (std::uint64_t{1} << bits) < x) ++bits;
    return bits;
}

inline double to_double(const Cost &c) {
    return static_cast<double>(c.numerator()) / static_cast<double>(c.denominator());
}

inline std::string to_string(const Cost &c) {
    if (c.denominator() == 1) return std::to_string(c.numerator());
    return std::to_string(c.numerator()) + "/" + std::to_string(c.denominator());
}

}  // namespace rbpebble
