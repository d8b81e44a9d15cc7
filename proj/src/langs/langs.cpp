#include "twoway/langs.hpp"

#include <stdexcept>

namespace twoway {

Bits parse_bits(std::string_view text) {
    Bits bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit strings use only 0 and 1");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return bits;
}

std::string bits_text(const Bits& bits) {
    std::string s;
    for (auto b : bits) s += b ? '1' : '0';
    return s;
}

std::uint64_t num_value(const Bits& bits) {
    std::uint64_t v = 0;
    std::size_t significant = 0;
    for (auto b : bits) {
        if (significant > 0 || b) ++significant;
        if (significant > 64) throw std::overflow_error("value does not fit in 64 bits");
        v = (v << 1) | b;
    }
    return v;
}

std::vector<Bits> all_bit_strings(std::size_t n) {
    if (n >= 31) throw std::length_error("too many strings to enumerate");
    std::vector<Bits> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
        Bits b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = (v >> (n - 1 - i)) & 1;
        out.push_back(std::move(b));
    }
    return out;
}

static void same_length(const Bits& x, const Bits& y) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
}

int eq_predicate(const Bits& x, const Bits& y) {
    same_length(x, y);
    return x == y ? 1 : 0;
}

int int_predicate(const Bits& x, const Bits& y) {
    same_length(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) return 1;
    }
    return 0;
}

std::optional<int> ternary_depth(std::size_t n) {
    int d = 0;
    std::size_t p = 1;
    while (p < n) {
        p *= 3;
        ++d;
    }
    if (p != n) return std::nullopt;
    return d;
}

static int ne_range(const Bits& bits, std::size_t lo, std::size_t len) {
    if (len == 1) return bits[lo];
    const std::size_t third = len / 3;
    const int a = ne_range(bits, lo, third);
    const int b = ne_range(bits, lo + third, third);
    const int c = ne_range(bits, lo + 2 * third, third);
    return (a == b && b == c) ? 0 : 1;
}

int ne_eval(int d, const Bits& bits) {
    if (d < 0) throw std::invalid_argument("negative depth");
    std::size_t len = 1;
    for (int i = 0; i < d; ++i) len *= 3;
    if (bits.size() != len) throw std::invalid_argument("NE^d needs exactly 3^d bits");
    return ne_range(bits, 0, len);
}

Bits bitwise_and(const Bits& x, const Bits& y) {
    same_length(x, y);
    Bits z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] & y[i];
    return z;
}

int rne_predicate(const Bits& x, const Bits& y, int d) {
    return ne_eval(d, bitwise_and(x, y));
}

static Symbol bit_symbol(std::uint8_t b) { return b ? Symbol::One : Symbol::Zero; }

Tape encode_pair(const Bits& x, const Bits& y) {
    same_length(x, y);
    Tape t;
    t.reserve(3 * x.size() + 2);
    t.push_back(Symbol::LeftEnd);
    for (auto b : x) t.push_back(bit_symbol(b));
    t.insert(t.end(), x.size(), Symbol::Hash);
    for (auto b : y) t.push_back(bit_symbol(b));
    t.push_back(Symbol::RightEnd);
    return t;
}

Tape encode_plain(const Bits& x) {
    Tape t;
    t.push_back(Symbol::LeftEnd);
    for (auto b : x) t.push_back(bit_symbol(b));
    t.push_back(Symbol::RightEnd);
    return t;
}

std::optional<std::pair<Bits, Bits>> decode_pair(const Tape& tape) {
    if (tape.size() < 5 || (tape.size() - 2) % 3 != 0) return std::nullopt;
    if (tape.front() != Symbol::LeftEnd || tape.back() != Symbol::RightEnd) return std::nullopt;
    const std::size_t n = (tape.size() - 2) / 3;
    Bits x, y;
    for (std::size_t i = 0; i < n; ++i) {
        const Symbol a = tape[1 + i], h = tape[1 + n + i], b = tape[1 + 2 * n + i];
        if (h != Symbol::Hash) return std::nullopt;
        if (a != Symbol::Zero && a != Symbol::One) return std::nullopt;
        if (b != Symbol::Zero && b != Symbol::One) return std::nullopt;
        x.push_back(a == Symbol::One);
        y.push_back(b == Symbol::One);
    }
    return std::make_pair(std::move(x), std::move(y));
}

void LanguageId::validate() const {
    if (n == 0) throw std::invalid_argument("language parameter n must be positive");
    if (language == Language::Ne && !ternary_depth(n)) {
        throw std::invalid_argument("L_NE needs n a power of 3");
    }
}

int member(const LanguageId& l, const Tape& tape) {
    l.validate();
    const auto pair = decode_pair(tape);
    if (!pair || pair->first.size() != l.n) return 0;
    const auto& [x, y] = *pair;
    switch (l.language) {
    case Language::Eq: return eq_predicate(x, y);
    case Language::Int: return int_predicate(x, y);
    case Language::Ne: return rne_predicate(x, y, *ternary_depth(l.n));
    }
    return 0;
}

}  // namespace twoway
