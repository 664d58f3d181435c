#pragma once

#include <cctype>
#include <string>

#include "liouville/expr.hpp"

namespace liouville {

namespace detail {

/// Recursive-descent parser for CAS-style infix input:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('-'|'+')* power
///   power  := atom ('^' unary)?        (exponent must fold to an integer)
///   atom   := integer | ident | ident '(' expr ')' | '(' expr ')'
class InfixParser {
  public:
    explicit InfixParser(const std::string& text) : s_(text) {}

    Expr parse() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size())
            throw parse_error("unexpected character '" + std::string(1, s_[pos_]) + "'",
                              pos_);
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Expr parse_expr() {
        Expr e = parse_term();
        while (true) {
            if (eat('+')) {
                e = Expr::add({std::move(e), parse_term()});
            } else if (eat('-')) {
                e = Expr::add(
                    {std::move(e), Expr::mul({Expr::constant(-1), parse_term()})});
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        while (true) {
            if (eat('*')) {
                e = Expr::mul({std::move(e), parse_unary()});
            } else if (eat('/')) {
                Expr d = parse_unary();
                if (d.is_constant()) {
                    if (d.value() == 0) throw parse_error("division by zero", pos_);
                    e = Expr::mul({std::move(e), Expr::constant(Rat(1) / d.value())});
                } else {
                    e = Expr::mul({std::move(e), Expr::pow(std::move(d), -1)});
                }
            } else {
                return e;
            }
        }
    }

    Expr parse_unary() {
        int sign = 1;
        while (true) {
            if (eat('-'))
                sign = -sign;
            else if (eat('+'))
                ;
            else
                break;
        }
        Expr e = parse_power();
        if (sign < 0) return Expr::mul({Expr::constant(-1), std::move(e)});
        return e;
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (!eat('^')) return base;
        std::size_t here = pos_;
        Expr exp = canonical(parse_unary());
        if (!exp.is_constant() || !rat_is_integer(exp.value()))
            throw parse_error("exponent must be an integer", here);
        return Expr::pow(std::move(base), exp.value().convert_to<long long>());
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw parse_error("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!eat(')')) throw parse_error("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            return Expr::constant(rat_from_string(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "arctan") name = "atan"; // common alias
            if (peek() == '(') {
                if (!FunctionCatalog::instance().contains(name))
                    throw parse_error("unknown function '" + name + "'", start);
                eat('(');
                Expr arg = parse_expr();
                if (!eat(')')) throw parse_error("expected ')'", pos_);
                return Expr::apply(name, std::move(arg));
            }
            return Expr::variable(name);
        }
        throw parse_error("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses CAS-style infix text into a canonical Expr.
inline Expr parse_infix(const std::string& text) {
    detail::InfixParser p(text);
    return canonical(p.parse());
}

} // namespace liouville
