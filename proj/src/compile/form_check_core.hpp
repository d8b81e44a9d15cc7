// Single left-to-right scan over local states 0..form_check_states()-1,
// starting at the left marker in local state 0.
#pragma once

#include "twoway/compile.hpp"

namespace twoway::detail {

struct FormStep {
    enum class Kind { Continue, Done, Fail };
    Kind kind = Kind::Fail;
    std::uint64_t next = 0;
};

inline std::uint64_t form_check_states(std::size_t n, TapeShape shape) {
    return shape == TapeShape::Pair ? 3 * n + 2 : n + 2;
}

// Every Continue step moves the head right. Done is reported while reading
// the right marker.
inline FormStep form_check_step(std::size_t n, TapeShape shape, std::uint64_t local, Symbol sym) {
    using K = FormStep::Kind;
    const bool bit = sym == Symbol::Zero || sym == Symbol::One;
    if (local == 0) return sym == Symbol::LeftEnd ? FormStep{K::Continue, 1} : FormStep{};
    // x(k): local 1 + k, k = 0..n
    if (local <= n + 1) {
        const std::uint64_t k = local - 1;
        if (k < n) return bit ? FormStep{K::Continue, local + 1} : FormStep{};
        if (shape == TapeShape::Plain) return sym == Symbol::RightEnd ? FormStep{K::Done, 0} : FormStep{};
        return sym == Symbol::Hash ? FormStep{K::Continue, n + 2} : FormStep{};
    }
    // hashes seen h: local n + 1 + h, h = 1..n
    if (local <= 2 * n + 1) {
        const std::uint64_t h = local - n - 1;
        if (h < n) return sym == Symbol::Hash ? FormStep{K::Continue, local + 1} : FormStep{};
        return bit ? FormStep{K::Continue, 2 * n + 2} : FormStep{};
    }
    // y bits seen k: local 2n + 1 + k, k = 1..n
    const std::uint64_t k = local - 2 * n - 1;
    if (k < n) return bit ? FormStep{K::Continue, local + 1} : FormStep{};
    return sym == Symbol::RightEnd ? FormStep{K::Done, 0} : FormStep{};
}

}  // namespace twoway::detail
