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
#include <span>
#include <string>
#include <vector>

#include "rbpebble/common.hpp"

namespace rbpebble {

enum class Direction : std::uint8_t { Forward, Inverse };

inline char direction_sign(Direction d) { return d == Direction::Forward ? '+' : '-'; }

/// One oracle call: (ip, +, x) or (ip, -, y), its answer, and the round it was issued in.
struct QueryRecord {
    Direction direction;
    Word input;
    Word output;
    std::uint32_t round;

    friend bool operator==(const QueryRecord &, const QueryRecord &) = default;
};

inline constexpr unsigned kMinWidth = 2;
inline constexpr unsigned kMaxWidth = 24;

/**
 * Explicit permutation of {0,1}^n held as a full table, together with the
 * append-only ledger of every query made through `query`. `forward`/`inverse`
 * are unrecorded lookups for checkers and oracles that must not disturb the
 * ledger.
 */
class Permutation {
  public:
    /// Seeded uniform permutation: Fisher-Yates over the identity table.
    static Permutation sample(unsigned width_bits, std::uint64_t seed) {
        Permutation p = identity(width_bits);
        Rng rng(seed);
        rng.shuffle(p.forward_);
        p.rebuild_inverse();
        return p;
    }

    static Permutation identity(unsigned width_bits) {
        check_width(width_bits);
        Permutation p;
        p.width_ = width_bits;
        p.forward_.resize(std::size_t{1} << width_bits);
        for (std::size_t i = 0; i < p.forward_.size(); ++i) p.forward_[i] = static_cast<Word>(i);
        p.inverse_ = p.forward_;
        return p;
    }

    /// Explicit table; must be a bijection on {0,1}^n.
    static Permutation from_table(unsigned width_bits, std::vector<Word> table) {
        check_width(width_bits);
        if (table.size() != (std::size_t{1} << width_bits))
            throw Error(Errc::BadShape, "table size must be 2^width");
        Permutation p;
        p.width_ = width_bits;
        p.forward_ = std::move(table);
        std::vector<bool> seen(p.forward_.size(), false);
        for (Word y : p.forward_) {
            if (y >= p.forward_.size() || seen[y]) throw Error(Errc::BadShape, "table is not a bijection");
            seen[y] = true;
        }
        p.rebuild_inverse();
        return p;
    }

    unsigned width() const { return width_; }
    std::size_t domain_size() const { return forward_.size(); }
    Word mask() const { return static_cast<Word>(forward_.size() - 1); }

    Word forward(Word x) const { return forward_.at(x); }
    Word inverse(Word y) const { return inverse_.at(y); }

    /// Answers one oracle call and appends it to the ledger.
    Word query(Direction dir, Word x, std::uint32_t round) {
        if (x > mask()) throw Error(Errc::WordOutOfRange, "query word wider than " + std::to_string(width_) + " bits");
        const Word y = dir == Direction::Forward ? forward_[x] : inverse_[x];
        ledger_.push_back({dir, x, y, round});
        return y;
    }

    std::span<const QueryRecord> ledger() const { return ledger_; }
    std::size_t query_count() const { return ledger_.size(); }

    std::span<const Word> forward_table() const { return forward_; }

  private:
    Permutation() = default;

    static void check_width(unsigned width_bits) {
        if (width_bits < kMinWidth || width_bits > kMaxWidth)
            throw Error(Errc::WidthOutOfRange, "width " + std::to_string(width_bits) + " outside [2, 24]");
    }

    void rebuild_inverse() {
        inverse_.assign(forward_.size(), 0);
        for (std::size_t x = 0; x < forward_.size(); ++x) inverse_[forward_[x]] = static_cast<Word>(x);
    }

    unsigned width_ = 0;
    std::vector<Word> forward_;
    std::vector<Word> inverse_;
    std::vector<QueryRecord> ledger_;
};

inline Permutation sample_permutation(unsigned width_bits, std::uint64_t seed) {
    return Permutation::sample(width_bits, seed);
}

inline Permutation identity_permutation(unsigned width_bits) { return Permutation::identity(width_bits); }

}  // namespace rbpebble
