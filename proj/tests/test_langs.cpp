#include <gtest/gtest.h>

#include "twoway/langs.hpp"

using namespace twoway;

TEST(Bits, ParseValueAndText) {
    EXPECT_EQ(parse_bits("0110"), (Bits{0, 1, 1, 0}));
    EXPECT_EQ(bits_text(Bits{1, 0}), "10");
    EXPECT_EQ(num_value(parse_bits("0110")), 6u);
    EXPECT_EQ(num_value(Bits(70, 0)), 0u);
    EXPECT_THROW(num_value(Bits(65, 1)), std::overflow_error);
    EXPECT_THROW(parse_bits("012"), std::invalid_argument);
    const auto all = all_bit_strings(3);
    ASSERT_EQ(all.size(), 8u);
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(num_value(all[i]), i);
}

TEST(Predicates, EqAndInt) {
    EXPECT_EQ(eq_predicate(parse_bits("01"), parse_bits("01")), 1);
    EXPECT_EQ(eq_predicate(parse_bits("01"), parse_bits("11")), 0);
    EXPECT_EQ(int_predicate(parse_bits("1000"), parse_bits("1000")), 1);
    EXPECT_EQ(int_predicate(parse_bits("1000"), parse_bits("0111")), 0);
    EXPECT_EQ(bitwise_and(parse_bits("110"), parse_bits("011")), parse_bits("010"));
}

TEST(Ne, Examples) {
    EXPECT_EQ(ne_eval(1, parse_bits("000")), 0);
    EXPECT_EQ(ne_eval(1, parse_bits("111")), 0);
    EXPECT_EQ(ne_eval(1, parse_bits("010")), 1);
    EXPECT_EQ(ne_eval(2, parse_bits("000111010")), 1);
    EXPECT_EQ(ne_eval(2, parse_bits("010010010")), 0);
    EXPECT_THROW(ne_eval(2, parse_bits("0101")), std::invalid_argument);
}

// Independent evaluator: level-by-level reduction of the 3^d leaves.
TEST(Ne, TableAgreementDepthTwo) {
    for (const Bits& x : all_bit_strings(9)) {
        Bits level = x;
        while (level.size() > 1) {
            Bits up;
            for (std::size_t i = 0; i < level.size(); i += 3) {
                up.push_back(level[i] == level[i + 1] && level[i + 1] == level[i + 2] ? 0 : 1);
            }
            level = up;
        }
        ASSERT_EQ(ne_eval(2, x), level[0]) << bits_text(x);
    }
}

TEST(Ne, BlockPermutationInvariant) {
    for (const Bits& x : all_bit_strings(9)) {
        const Bits rotated = {x[3], x[4], x[5], x[6], x[7], x[8], x[0], x[1], x[2]};
        const Bits swapped = {x[3], x[4], x[5], x[0], x[1], x[2], x[6], x[7], x[8]};
        EXPECT_EQ(ne_eval(2, x), ne_eval(2, rotated));
        EXPECT_EQ(ne_eval(2, x), ne_eval(2, swapped));
    }
}

TEST(Ne, RestrictedWithAllOnes) {
    for (const Bits& x : all_bit_strings(9)) EXPECT_EQ(rne_predicate(x, Bits(9, 1), 2), ne_eval(2, x));
}

TEST(Encoding, PairRoundTrip) {
    const Tape t = encode_pair(parse_bits("01"), parse_bits("11"));
    EXPECT_EQ(to_string(t), "¢01##11$");
    const auto back = decode_pair(t);
    ASSERT_TRUE(back);
    EXPECT_EQ(back->first, parse_bits("01"));
    EXPECT_EQ(back->second, parse_bits("11"));
    EXPECT_FALSE(decode_pair(parse_tape("¢01#11$")));
    EXPECT_EQ(to_string(encode_plain(parse_bits("0110"))), "¢0110$");
    EXPECT_THROW(encode_pair(parse_bits("01"), parse_bits("1")), std::invalid_argument);
}

TEST(Member, EqExhaustive) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const LanguageId l{Language::Eq, n};
        const auto all = all_bit_strings(n);
        for (const Bits& x : all) {
            for (const Bits& y : all) ASSERT_EQ(member(l, encode_pair(x, y)), eq_predicate(x, y));
        }
    }
    EXPECT_EQ(member({Language::Eq, 2}, parse_tape("¢01#01$")), 0);
}

TEST(Member, NeNeedsPowerOfThree) {
    EXPECT_EQ(ternary_depth(9), 2);
    EXPECT_FALSE(ternary_depth(6));
    EXPECT_THROW((LanguageId{Language::Ne, 6}.validate()), std::invalid_argument);
    EXPECT_EQ(member({Language::Ne, 3}, encode_pair(parse_bits("011"), parse_bits("111"))), 1);
    EXPECT_EQ(member({Language::Ne, 3}, encode_pair(parse_bits("011"), parse_bits("100"))), 0);
}
