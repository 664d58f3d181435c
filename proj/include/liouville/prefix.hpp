#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "liouville/expr.hpp"

namespace liouville {

/// Ordered prefix token list; grammar documented in the README (EBNF).
using TokenSeq = std::vector<std::string>;

namespace detail {

inline bool is_integer_token(const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = t[0] == '-' ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
}

inline void emit_prefix(const Expr& e, TokenSeq& out) {
    switch (e.kind()) {
        case Expr::Kind::constant: {
            const Rat& v = e.value();
            if (rat_is_integer(v)) {
                out.push_back(rat_num(v).str());
            } else {
                out.push_back("div");
                out.push_back(rat_num(v).str());
                out.push_back(rat_den(v).str());
            }
            return;
        }
        case Expr::Kind::variable:
            out.push_back(e.var_name());
            return;
        case Expr::Kind::apply:
            out.push_back(e.fname());
            emit_prefix(e.arg(), out);
            return;
        case Expr::Kind::pow:
            out.push_back("pow");
            emit_prefix(e.base(), out);
            out.push_back(std::to_string(e.exponent()));
            return;
        case Expr::Kind::add:
        case Expr::Kind::mul: {
            const char* op = e.kind() == Expr::Kind::add ? "add" : "mul";
            // n-ary nodes serialize as right-nested binary applications.
            for (std::size_t i = 0; i + 1 < e.kids().size(); ++i) {
                out.push_back(op);
                emit_prefix(e.kids()[i], out);
            }
            emit_prefix(e.kids().back(), out);
            return;
        }
    }
}

struct PrefixReader {
    const TokenSeq& toks;
    std::size_t pos = 0;

    const std::string& next(const char* what) {
        if (pos >= toks.size())
            throw parse_error(std::string("unexpected end of tokens, expected ") + what,
                              pos);
        return toks[pos++];
    }

    Rat integer_arg(const char* ctx) {
        const std::string& t = next("integer");
        if (!is_integer_token(t))
            throw parse_error(std::string(ctx) + " expects an integer token, got '" + t +
                                  "'",
                              pos - 1);
        return rat_from_string(t);
    }

    Expr read() {
        const std::string& t = next("expression");
        std::size_t here = pos - 1;
        if (t == "add" || t == "mul") {
            Expr lhs = read();
            Expr rhs = read();
            return t == "add" ? Expr::add({std::move(lhs), std::move(rhs)})
                              : Expr::mul({std::move(lhs), std::move(rhs)});
        }
        if (t == "pow") {
            Expr base = read();
            Rat k = integer_arg("pow");
            return Expr::pow(std::move(base), k.convert_to<long long>());
        }
        if (t == "div") {
            Rat n = integer_arg("div");
            Rat d = integer_arg("div");
            if (d == 0) throw parse_error("div with zero denominator", here);
            return Expr::constant(n / d);
        }
        if (FunctionCatalog::instance().contains(t)) return Expr::apply(t, read());
        if (is_integer_token(t)) return Expr::constant(rat_from_string(t));
        // variable token: identifier-shaped
        if (t.empty() || (!std::isalpha(static_cast<unsigned char>(t[0])) && t[0] != '_'))
            throw parse_error("unexpected token '" + t + "'", here);
        for (char c : t)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                throw parse_error("unexpected token '" + t + "'", here);
        return Expr::variable(t);
    }
};

} // namespace detail

/// Deterministic prefix serialization of the canonical form of e.
inline TokenSeq to_prefix(const Expr& e) {
    TokenSeq out;
    detail::emit_prefix(canonical(e), out);
    return out;
}

/// Parses a prefix token stream; from_prefix(to_prefix(e)) == canonical(e).
inline Expr from_prefix(const TokenSeq& toks) {
    detail::PrefixReader r{toks};
    Expr e = r.read();
    if (r.pos != toks.size())
        throw parse_error("trailing tokens after expression", r.pos);
    return canonical(e);
}

inline std::string join_tokens(const TokenSeq& toks) {
    std::string s;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) s += ' ';
        s += toks[i];
    }
    return s;
}

} // namespace liouville
