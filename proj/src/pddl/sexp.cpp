#include <cctype>

#include "slaf/errors.hpp"
#include "slaf/pddl/pddl.hpp"

namespace slaf::pddl {

std::vector<Sexp> read_sexps(const std::string& text) {
    std::vector<Sexp> top;
    std::vector<Sexp> stack;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&] {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    auto emit = [&](Sexp s) {
        if (stack.empty()) top.push_back(std::move(s));
        else stack.back().items.push_back(std::move(s));
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
        } else if (c == ';') {
            while (i < text.size() && text[i] != '\n') advance();
        } else if (c == '(') {
            Sexp s;
            s.line = line;
            s.col = col;
            stack.push_back(std::move(s));
            advance();
        } else if (c == ')') {
            if (stack.empty()) throw ParseError("unbalanced ')'", line, col);
            Sexp s = std::move(stack.back());
            stack.pop_back();
            emit(std::move(s));
            advance();
        } else {
            Sexp s;
            s.is_atom = true;
            s.line = line;
            s.col = col;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
                   text[i] != ')' && text[i] != ';') {
                s.text.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text[i]))));
                advance();
            }
            emit(std::move(s));
        }
    }
    if (!stack.empty()) throw ParseError("unbalanced '('", stack.back().line, stack.back().col);
    return top;
}

}  // namespace slaf::pddl
