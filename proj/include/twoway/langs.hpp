// Reference predicates for EQ, INT, NE^d and RNE, and the tape encoders.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twoway/machines.hpp"

namespace twoway {

using Bits = std::vector<std::uint8_t>;

// "0110" -> {0,1,1,0}; throws std::invalid_argument on other characters.
Bits parse_bits(std::string_view text);
std::string bits_text(const Bits& bits);
// Binary value, most significant bit first. Throws std::overflow_error past 64 bits.
std::uint64_t num_value(const Bits& bits);
// All 2^n strings of length n in increasing numeric order.
std::vector<Bits> all_bit_strings(std::size_t n);

int eq_predicate(const Bits& x, const Bits& y);
int int_predicate(const Bits& x, const Bits& y);
// NE(a,b,c) = 0 iff a = b = c, composed d levels deep over 3^d bits.
int ne_eval(int d, const Bits& bits);
int rne_predicate(const Bits& x, const Bits& y, int d);
Bits bitwise_and(const Bits& x, const Bits& y);

// ¢ x #^n y $
Tape encode_pair(const Bits& x, const Bits& y);
// ¢ x $
Tape encode_plain(const Bits& x);
// Inverse of encode_pair; nullopt when the tape is not of that shape.
std::optional<std::pair<Bits, Bits>> decode_pair(const Tape& tape);

enum class Language { Eq, Int, Ne };

struct LanguageId {
    Language language = Language::Eq;
    std::size_t n = 1;
    // Throws std::invalid_argument for n = 0 or a non power of 3 with Ne.
    void validate() const;
};

// Depth d with 3^d = n, or nullopt.
std::optional<int> ternary_depth(std::size_t n);

// 1 iff the tape has the x#^n y shape for l.n and the predicate holds.
int member(const LanguageId& l, const Tape& tape);

}  // namespace twoway
