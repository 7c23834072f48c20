#ifndef ROBY_PARSE_HPP
#define ROBY_PARSE_HPP

#include <cctype>
#include <string>
#include <string_view>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "polynomial.hpp"

namespace roby
{

namespace detail
{

// Recursive-descent parser for polynomial strings such as "3/2*x^2*y - z2".
// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := power (('*'|'/') power)*       -- '/' only by nonzero constants
//   power  := unary ['^' integer]
//   unary  := '-' unary | atom
//   atom   := integer | identifier | poly(e; c0, ...) | '(' expr ')'
class poly_parser
{
public:
    explicit poly_parser(std::string_view text) : src_(text) {}

    Poly parse()
    {
        Poly p = expr();
        skip_ws();
        if (pos_ != src_.size()) {
            fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string &what) const
    {
        throw input_error("polynomial parse error at offset " + std::to_string(pos_) + " in '" + std::string(src_)
                          + "': " + what);
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }
    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr()
    {
        skip_ws();
        bool neg = false;
        if (accept('-')) {
            neg = true;
        } else {
            accept('+');
        }
        Poly acc = term();
        if (neg) {
            acc = -acc;
        }
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Poly term()
    {
        Poly acc = power();
        while (true) {
            if (accept('*')) {
                acc *= power();
            } else if (accept('/')) {
                Poly d = power();
                if (d.is_zero()) {
                    throw zero_division_error("division by zero in '" + std::string(src_) + "'");
                }
                if (!d.is_constant()) {
                    fail("division only by constants");
                }
                acc = acc.scaled(d.constant_term().inverse());
            } else {
                return acc;
            }
        }
    }

    Poly power()
    {
        Poly base = unary();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected a nonnegative integer exponent");
            }
            base = base.pow(static_cast<unsigned>(std::stoul(std::string(src_.substr(start, pos_ - start)))));
        }
        return base;
    }

    Poly unary()
    {
        if (accept('-')) {
            return -unary();
        }
        return atom();
    }

    Poly atom()
    {
        skip_ws();
        if (pos_ >= src_.size()) {
            fail("unexpected end of input");
        }
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            }
            return Poly(CycScalar::parse_rational(src_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size()
                   && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            std::string_view name = src_.substr(start, pos_ - start);
            skip_ws();
            if (name == "poly" && pos_ < src_.size() && src_[pos_] == '(') {
                std::size_t close = src_.find(')', pos_);
                if (close == std::string_view::npos) {
                    fail("unterminated cyclotomic literal");
                }
                CycScalar s = CycScalar::parse(src_.substr(start, close + 1 - start));
                pos_ = close + 1;
                return Poly(s);
            }
            return Poly::variable(name);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Poly parse_poly(std::string_view text)
{
    return detail::poly_parser(text).parse();
}

inline bool is_valid_var_name(std::string_view name)
{
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
        return false;
    }
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
            return false;
        }
    }
    return true;
}

} // namespace roby

#endif // ROBY_PARSE_HPP
