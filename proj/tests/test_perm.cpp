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


#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

namespace rbpebble {
namespace {

TEST(Permutation, SampleIsDeterministic) {
    const Permutation a = Permutation::sample(10, 77);
    const Permutation b = Permutation::sample(10, 77);
    const Permutation c = Permutation::sample(10, 78);
    EXPECT_TRUE(std::equal(a.forward_table().begin(), a.forward_table().end(), b.forward_table().begin()));
    EXPECT_FALSE(std::equal(a.forward_table().begin(), a.forward_table().end(), c.forward_table().begin()));
}

TEST(Permutation, WidthTwoIsABijectionOnFourWords) {
    const Permutation p = Permutation::sample(2, 5);
    std::set<Word> seen(p.forward_table().begin(), p.forward_table().end());
    EXPECT_EQ(seen, (std::set<Word>{0, 1, 2, 3}));
}

TEST(Permutation, BijectionForSeveralWidths) {
    for (unsigned n = 2; n <= 12; ++n) {
        const Permutation p = Permutation::sample(n, n * 31);
        std::vector<bool> hit(p.domain_size(), false);
        for (Word x = 0; x <= p.mask(); ++x) {
            const Word y = p.forward(x);
            ASSERT_FALSE(hit[y]);
            hit[y] = true;
            EXPECT_EQ(p.inverse(y), x);
        }
    }
}

TEST(Permutation, FixedPointMeanNearOne) {
    // a uniform permutation has Poisson(1) fixed points
    double total = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const Permutation p = Permutation::sample(8, derive_seed(4242, s));
        for (Word x = 0; x <= p.mask(); ++x) total += p.forward(x) == x;
    }
    EXPECT_NEAR(total / 1000.0, 1.0, 0.1);
}

TEST(Permutation, QueryRoundTripAndLedger) {
    Permutation p = Permutation::sample(8, 3);
    const Word y = p.query(Direction::Forward, 17, 1);
    EXPECT_EQ(p.query(Direction::Inverse, y, 2), 17u);
    ASSERT_EQ(p.query_count(), 2u);
    EXPECT_EQ(p.ledger()[0], (QueryRecord{Direction::Forward, 17, y, 1}));
    EXPECT_EQ(p.ledger()[1], (QueryRecord{Direction::Inverse, y, 17, 2}));
    // unrecorded lookups leave the ledger alone
    (void)p.forward(1);
    (void)p.inverse(1);
    EXPECT_EQ(p.query_count(), 2u);
}

TEST(Permutation, Identity) {
    Permutation p = Permutation::identity(4);
    EXPECT_EQ(p.forward(5), 5u);
    EXPECT_EQ(p.inverse(5), 5u);
    for (Word x = 0; x <= p.mask(); ++x) EXPECT_EQ(p.forward(p.forward(x)), x);
}

TEST(Permutation, Errors) {
    auto code = [](auto fn) {
        try {
            fn();
        } catch (const Error &e) {
            return e.code();
        }
        return Errc::ParseError;
    };
    EXPECT_EQ(code([] { Permutation::sample(1, 0); }), Errc::WidthOutOfRange);
    EXPECT_EQ(code([] { Permutation::identity(25); }), Errc::WidthOutOfRange);
    EXPECT_EQ(code([] {
                  Permutation p = Permutation::identity(4);
                  p.query(Direction::Forward, 16, 1);
              }),
              Errc::WordOutOfRange);
    EXPECT_EQ(code([] { Permutation::from_table(2, {0, 1, 1, 3}); }), Errc::BadShape);
    EXPECT_EQ(code([] { Permutation::from_table(2, {0, 1, 2}); }), Errc::BadShape);
}

TEST(Permutation, FromTable) {
    const Permutation p = Permutation::from_table(2, {2, 0, 3, 1});
    EXPECT_EQ(p.forward(0), 2u);
    EXPECT_EQ(p.inverse(1), 3u);
}

TEST(Rng, DeriveSeedSeparatesTrials) {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(1, i));
    EXPECT_EQ(seeds.size(), 1000u);
    EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}

TEST(Rng, BelowStaysInRange) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_LT(rng.below(7), 7u);
        const auto v = rng.between(3, 5);
        EXPECT_GE(v, 3u);
        EXPECT_LE(v, 5u);
    }
}

}  // namespace
}  // namespace rbpebble
