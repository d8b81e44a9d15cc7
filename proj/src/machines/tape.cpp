#include <stdexcept>
#include <string>

#include "twoway/machines.hpp"

namespace twoway {

Tape parse_tape(std::string_view text) {
    Tape tape;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        switch (c) {
        case '0': tape.push_back(Symbol::Zero); break;
        case '1': tape.push_back(Symbol::One); break;
        case '#': tape.push_back(Symbol::Hash); break;
        case '<': tape.push_back(Symbol::LeftEnd); break;
        case '$':
        case '>': tape.push_back(Symbol::RightEnd); break;
        default:
            // U+00A2 CENT SIGN is C2 A2 in UTF-8.
            if (static_cast<unsigned char>(c) == 0xC2 && i + 1 < text.size() &&
                static_cast<unsigned char>(text[i + 1]) == 0xA2) {
                tape.push_back(Symbol::LeftEnd);
                ++i;
                break;
            }
            throw std::invalid_argument("unexpected tape character '" + std::string(1, c) + "'");
        }
    }
    validate_tape(tape);
    return tape;
}

std::string_view symbol_text(Symbol s) {
    switch (s) {
    case Symbol::Zero: return "0";
    case Symbol::One: return "1";
    case Symbol::Hash: return "#";
    case Symbol::LeftEnd: return "\xC2\xA2";
    case Symbol::RightEnd: return "$";
    }
    return "?";
}

std::string to_string(const Tape& tape) {
    std::string out;
    for (Symbol s : tape) out += symbol_text(s);
    return out;
}

void validate_tape(const Tape& tape) {
    if (tape.size() < 2 || tape.front() != Symbol::LeftEnd || tape.back() != Symbol::RightEnd) {
        throw std::invalid_argument("tape must be bracketed by end markers");
    }
    for (std::size_t i = 1; i + 1 < tape.size(); ++i) {
        if (tape[i] == Symbol::LeftEnd || tape[i] == Symbol::RightEnd) {
            throw std::invalid_argument("end marker in tape interior");
        }
    }
}

}  // namespace twoway
