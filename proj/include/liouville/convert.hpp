#pragma once

#include <string>
#include <vector>

#include "liouville/tower.hpp"

namespace liouville {

/// Converts an expression to a rational function over the tower. Function
/// applications must match an existing extension (kind + argument); when
/// `extend` is true, unmatched applications of catalog functions append new
/// extensions to `t` instead (the symbolic-log ledger generalized to every
/// elementary kind, which lets antiderivatives live in a larger tower than
/// their integrands). Throws conversion_error for anything outside the model.
inline RatFunc expr_to_ratfunc(const Expr& e, Tower& t, bool extend) {
    switch (e.kind()) {
        case Expr::Kind::constant:
            return RatFunc::constant(t.size(), e.value());
        case Expr::Kind::variable: {
            int i = t.index_of_name(e.var_name());
            if (i < 0) {
                if (extend && SpecialRegistry::instance().has_constant(e.var_name()))
                    i = t.add_const_symbol(e.var_name());
                else
                    throw conversion_error("variable '" + e.var_name() +
                                           "' is not an indeterminate of the tower");
            }
            return RatFunc::variable(t.size(), i);
        }
        case Expr::Kind::apply: {
            RatFunc a = expr_to_ratfunc(e.arg(), t, extend);
            ExtKind k = e.fname() == "log"   ? ExtKind::log_k
                        : e.fname() == "exp" ? ExtKind::exp_k
                        : e.fname() == "tan" ? ExtKind::tan_k
                                             : ExtKind::special;
            if (auto i = t.find(k, e.fname(), a)) return RatFunc::variable(t.size(), *i);
            if (!extend)
                throw conversion_error("application " + e.fname() +
                                       "(...) does not match any tower extension");
            if (a.is_constant())
                throw conversion_error("cannot extend tower by " + e.fname() +
                                       " of a constant argument");
            int i = t.add_extension(e.fname(), a);
            return RatFunc::variable(t.size(), i);
        }
        case Expr::Kind::pow: {
            RatFunc b = expr_to_ratfunc(e.base(), t, extend);
            if (b.is_zero() && e.exponent() < 0)
                throw conversion_error("division by zero in expression");
            return b.resized(t.size()).pow(e.exponent());
        }
        case Expr::Kind::add:
        case Expr::Kind::mul: {
            bool is_add = e.kind() == Expr::Kind::add;
            RatFunc acc = RatFunc::constant(t.size(), is_add ? Rat(0) : Rat(1));
            for (const Expr& k : e.kids()) {
                RatFunc v = expr_to_ratfunc(k, t, extend);
                acc = is_add ? acc.resized(t.size()) + v : acc.resized(t.size()) * v;
            }
            return acc;
        }
    }
    throw conversion_error("internal: bad expression node");
}

/// Strict conversion: the tower is fixed, unmatched functions are errors.
inline RatFunc expr_to_ratfunc(const Expr& e, const Tower& t) {
    Tower copy = t;
    RatFunc f = expr_to_ratfunc(e, copy, false);
    return f;
}

namespace detail {

inline Expr tower_var_expr(const Tower& t, int i, std::vector<Expr>& memo) {
    if (!memo[static_cast<std::size_t>(i)].is_constant(Rat(0)))
        return memo[static_cast<std::size_t>(i)];
    const Extension& e = t[i];
    Expr out = Expr::variable("x");
    if (e.kind == ExtKind::base) {
        out = Expr::variable("x");
    } else if (e.kind == ExtKind::const_sym) {
        out = Expr::variable(e.name);
    } else {
        // unfold the argument recursively (it references lower indices only)
        const RatFunc& a = e.argument;
        std::vector<Expr> num_terms, den_terms;
        auto poly_expr = [&](const MPoly& p) {
            std::vector<Expr> terms;
            for (const auto& [ex, c] : p.terms()) {
                std::vector<Expr> fs;
                fs.push_back(Expr::constant(c));
                for (int v = 0; v < p.nvars(); ++v)
                    if (ex[v] > 0) fs.push_back(Expr::pow(tower_var_expr(t, v, memo), ex[v]));
                terms.push_back(Expr::mul(std::move(fs)));
            }
            return Expr::add(std::move(terms));
        };
        Expr arg = poly_expr(a.num());
        if (!(a.den().is_constant() && a.den().constant_value() == 1))
            arg = expr_div(arg, poly_expr(a.den()));
        out = Expr::apply(e.name, canonical(arg));
    }
    memo[static_cast<std::size_t>(i)] = out;
    return out;
}

} // namespace detail

/// Unfolds a polynomial over the tower into a plain expression in x
/// (extension indeterminates replaced by their function form).
inline Expr mpoly_to_expr(const MPoly& p, const Tower& t) {
    if (p.nvars() > t.size())
        throw domain_error("polynomial references an indeterminate not in the tower");
    std::vector<Expr> memo(static_cast<std::size_t>(t.size()), Expr::constant(0));
    std::vector<Expr> terms;
    for (const auto& [ex, c] : p.terms()) {
        std::vector<Expr> fs;
        fs.push_back(Expr::constant(c));
        for (int v = 0; v < p.nvars(); ++v)
            if (ex[v] > 0)
                fs.push_back(Expr::pow(detail::tower_var_expr(t, v, memo), ex[v]));
        terms.push_back(Expr::mul(std::move(fs)));
    }
    return canonical(Expr::add(std::move(terms)));
}

/// Unfolds a rational function over the tower into a plain expression in x.
inline Expr ratfunc_to_expr(const RatFunc& f, const Tower& t) {
    Expr num = mpoly_to_expr(f.num(), t);
    if (f.is_polynomial() && f.den().constant_value() == 1) return num;
    return canonical(expr_div(num, mpoly_to_expr(f.den(), t)));
}

/// Theta-form printing (indeterminates left folded), for provenance text.
inline std::string ratfunc_to_theta_string(const RatFunc& f, const Tower& t) {
    std::vector<std::string> names = detail::tower_names(t);
    names.resize(static_cast<std::size_t>(std::max<int>(f.nvars(), t.size())), "?");
    return to_infix(detail::ratfunc_to_named_expr(f, names));
}

inline std::string mpoly_to_theta_string(const MPoly& p, const Tower& t) {
    std::vector<std::string> names = detail::tower_names(t);
    names.resize(static_cast<std::size_t>(std::max<int>(p.nvars(), t.size())), "?");
    return to_infix(detail::mpoly_to_named_expr(p, names));
}

} // namespace liouville
