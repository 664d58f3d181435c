#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/rational.hpp"

namespace liouville {

/// Names of the functions expressions may apply. log/exp/tan are built in;
/// special kinds (atan, erf, ...) are added through the tower registry.
class FunctionCatalog {
  public:
    static FunctionCatalog& instance() {
        static FunctionCatalog cat;
        return cat;
    }

    bool contains(const std::string& name) const { return names_.count(name) != 0; }

    void add(const std::string& name) {
        if (frozen_) throw domain_error("function catalog is frozen");
        names_.insert(name);
    }

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

  private:
    FunctionCatalog() : names_{"log", "exp", "tan", "atan", "erf"} {}
    std::set<std::string> names_;
    bool frozen_ = false;
};

/// Immutable expression tree. Constants are exact rationals; add/mul are
/// n-ary; pow exponents are nonzero integers; apply wraps a catalog function.
class Expr {
  public:
    enum class Kind { constant, variable, add, mul, pow, apply };

    Expr() : Expr(constant(Rat(0))) {}

    static Expr constant(Rat v) {
        Node n;
        n.kind = Kind::constant;
        n.value = std::move(v);
        return Expr(std::move(n));
    }
    static Expr constant(long long v) { return constant(Rat(v)); }

    static Expr variable(std::string name) {
        Node n;
        n.kind = Kind::variable;
        n.var = std::move(name);
        return Expr(std::move(n));
    }

    static Expr add(std::vector<Expr> kids) {
        if (kids.empty()) return constant(0);
        if (kids.size() == 1) return kids.front();
        Node n;
        n.kind = Kind::add;
        n.kids = std::move(kids);
        return Expr(std::move(n));
    }

    static Expr mul(std::vector<Expr> kids) {
        if (kids.empty()) return constant(1);
        if (kids.size() == 1) return kids.front();
        Node n;
        n.kind = Kind::mul;
        n.kids = std::move(kids);
        return Expr(std::move(n));
    }

    static Expr pow(Expr base, long long exponent) {
        if (exponent == 0) return constant(1);
        if (exponent == 1) return base;
        Node n;
        n.kind = Kind::pow;
        n.kids.push_back(std::move(base));
        n.exponent = exponent;
        return Expr(std::move(n));
    }

    static Expr apply(const std::string& fname, Expr arg) {
        if (!FunctionCatalog::instance().contains(fname))
            throw domain_error("unknown function '" + fname + "'");
        Node n;
        n.kind = Kind::apply;
        n.fname = fname;
        n.kids.push_back(std::move(arg));
        return Expr(std::move(n));
    }

    Kind kind() const { return n_->kind; }
    const Rat& value() const { return n_->value; }
    const std::string& var_name() const { return n_->var; }
    const std::string& fname() const { return n_->fname; }
    long long exponent() const { return n_->exponent; }
    const std::vector<Expr>& kids() const { return n_->kids; }
    const Expr& base() const { return n_->kids[0]; }
    const Expr& arg() const { return n_->kids[0]; }

    bool is_constant() const { return kind() == Kind::constant; }
    bool is_constant(const Rat& v) const { return is_constant() && value() == v; }
    bool is_variable(const std::string& name) const {
        return kind() == Kind::variable && var_name() == name;
    }

  private:
    struct Node {
        Kind kind;
        Rat value;
        std::string var;
        std::string fname;
        long long exponent = 0;
        std::vector<Expr> kids;
    };

    explicit Expr(Node n) : n_(std::make_shared<const Node>(std::move(n))) {}

    std::shared_ptr<const Node> n_;
};

namespace detail {

inline int kind_rank(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::constant: return 0;
        case Expr::Kind::variable: return 1;
        case Expr::Kind::apply: return 2;
        case Expr::Kind::pow: return 3;
        case Expr::Kind::mul: return 4;
        case Expr::Kind::add: return 5;
    }
    return 6;
}

} // namespace detail

/// Fixed total order on expressions (graded by node kind, then structure).
inline int expr_cmp(const Expr& a, const Expr& b) {
    int ra = detail::kind_rank(a.kind()), rb = detail::kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Expr::Kind::constant:
            if (a.value() == b.value()) return 0;
            return a.value() < b.value() ? -1 : 1;
        case Expr::Kind::variable:
            return a.var_name().compare(b.var_name()) < 0   ? -1
                   : a.var_name() == b.var_name()           ? 0
                                                            : 1;
        case Expr::Kind::apply: {
            int c = a.fname().compare(b.fname());
            if (c != 0) return c < 0 ? -1 : 1;
            return expr_cmp(a.arg(), b.arg());
        }
        case Expr::Kind::pow: {
            int c = expr_cmp(a.base(), b.base());
            if (c != 0) return c;
            if (a.exponent() == b.exponent()) return 0;
            return a.exponent() < b.exponent() ? -1 : 1;
        }
        case Expr::Kind::mul:
        case Expr::Kind::add: {
            if (a.kids().size() != b.kids().size())
                return a.kids().size() < b.kids().size() ? -1 : 1;
            for (std::size_t i = 0; i < a.kids().size(); ++i) {
                int c = expr_cmp(a.kids()[i], b.kids()[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
    return 0;
}

inline bool expr_equal(const Expr& a, const Expr& b) { return expr_cmp(a, b) == 0; }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return expr_cmp(a, b) < 0; }
};

/// Canonical form: flattens nested add/mul, folds constants, drops identity
/// elements, distributes integer powers over products, sorts children under
/// the fixed total order. Idempotent. Not a simplifier: no like-term
/// collection and no function identities.
inline Expr canonical(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::constant:
        case Expr::Kind::variable:
            return e;
        case Expr::Kind::apply:
            return Expr::apply(e.fname(), canonical(e.arg()));
        case Expr::Kind::pow: {
            Expr b = canonical(e.base());
            long long k = e.exponent();
            if (k == 0) return Expr::constant(1);
            if (k == 1) return b;
            if (b.is_constant()) {
                if (b.value() == 0 && k < 0)
                    throw domain_error("0 raised to a negative power");
                return Expr::constant(rat_pow(b.value(), k));
            }
            if (b.kind() == Expr::Kind::pow)
                return canonical(Expr::pow(b.base(), b.exponent() * k));
            if (b.kind() == Expr::Kind::mul) {
                std::vector<Expr> kids;
                kids.reserve(b.kids().size());
                for (const Expr& c : b.kids()) kids.push_back(Expr::pow(c, k));
                return canonical(Expr::mul(std::move(kids)));
            }
            return Expr::pow(std::move(b), k);
        }
        case Expr::Kind::add:
        case Expr::Kind::mul: {
            const bool is_add = e.kind() == Expr::Kind::add;
            std::vector<Expr> flat;
            Rat acc = is_add ? Rat(0) : Rat(1);
            std::vector<Expr> stack(e.kids().rbegin(), e.kids().rend());
            while (!stack.empty()) {
                Expr c = canonical(stack.back());
                stack.pop_back();
                if (c.kind() == e.kind()) {
                    for (auto it = c.kids().rbegin(); it != c.kids().rend(); ++it)
                        stack.push_back(*it);
                } else if (c.is_constant()) {
                    if (is_add)
                        acc += c.value();
                    else
                        acc *= c.value();
                } else {
                    flat.push_back(std::move(c));
                }
            }
            if (!is_add && acc == 0) return Expr::constant(0);
            const Rat identity = is_add ? Rat(0) : Rat(1);
            if (acc != identity || flat.empty())
                flat.push_back(Expr::constant(acc));
            std::sort(flat.begin(), flat.end(), ExprLess{});
            return is_add ? Expr::add(std::move(flat)) : Expr::mul(std::move(flat));
        }
    }
    return e;
}

namespace detail {

inline const char* skeleton_placeholder() { return "C"; }

Expr skel_atom(const Expr& e);

/// Wraps an expression as coefficient-slot * structural-factors.
inline Expr skel_term(const Expr& e) {
    Expr c = Expr::variable(skeleton_placeholder());
    if (e.is_constant()) return c;
    std::vector<Expr> factors;
    factors.push_back(std::move(c));
    if (e.kind() == Expr::Kind::mul) {
        for (const Expr& k : e.kids()) {
            if (k.is_constant()) continue;
            if (k.is_variable(skeleton_placeholder())) continue;
            factors.push_back(skel_atom(k));
        }
    } else if (!e.is_variable(skeleton_placeholder())) {
        factors.push_back(skel_atom(e));
    }
    return Expr::mul(std::move(factors));
}

inline Expr skel_atom(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::constant:
            return Expr::variable(skeleton_placeholder());
        case Expr::Kind::variable:
            return e;
        case Expr::Kind::apply:
            return Expr::apply(e.fname(), skel_term(e.arg()));
        case Expr::Kind::pow:
            return Expr::pow(skel_atom(e.base()), e.exponent());
        case Expr::Kind::mul: // reachable only through apply arguments
            return skel_term(e);
        case Expr::Kind::add: {
            std::vector<Expr> kids;
            kids.reserve(e.kids().size());
            for (const Expr& k : e.kids()) kids.push_back(skel_term(k));
            return Expr::add(std::move(kids));
        }
    }
    return e;
}

} // namespace detail

/// Replaces every numeric coefficient with a placeholder; two expressions are
/// "similar" iff their skeletons are structurally equal. Invariant under
/// rescaling any constant by a nonzero rational, and idempotent.
inline Expr coefficient_skeleton(const Expr& e) {
    return canonical(detail::skel_term(canonical(e)));
}

// ---------------------------------------------------------------------------
// Infix printing (CAS-style: log(x)^2, (a + b)/(c*d), ...)

namespace detail {

void print_infix(std::ostream& os, const Expr& e, int parent_prec);

inline bool starts_negative(const Expr& e) {
    if (e.is_constant()) return e.value() < 0;
    if (e.kind() == Expr::Kind::mul && !e.kids().empty())
        return e.kids().front().is_constant() && e.kids().front().value() < 0;
    return false;
}

inline void print_product(std::ostream& os, const Expr& e, int parent_prec) {
    // Split factors into numerator and denominator parts.
    std::vector<Expr> kids;
    if (e.kind() == Expr::Kind::mul)
        kids = e.kids();
    else
        kids.push_back(e);

    Rat coeff(1);
    std::vector<Expr> num, den;
    for (const Expr& k : kids) {
        if (k.is_constant()) {
            coeff *= k.value();
        } else if (k.kind() == Expr::Kind::pow && k.exponent() < 0) {
            den.push_back(Expr::pow(k.base(), -k.exponent()));
        } else {
            num.push_back(k);
        }
    }

    bool neg = coeff < 0;
    if (neg) coeff = -coeff;
    Int cn = rat_num(coeff), cd = rat_den(coeff);

    std::ostringstream tmp;
    bool first = true;
    if (cn != 1 || num.empty()) {
        tmp << cn.str();
        first = false;
    }
    for (const Expr& k : num) {
        if (!first) tmp << "*";
        print_infix(tmp, k, 2);
        first = false;
    }
    std::string num_str = tmp.str();

    std::string den_str;
    if (cd != 1 || !den.empty()) {
        std::ostringstream dtmp;
        std::size_t pieces = den.size() + (cd != 1 ? 1 : 0);
        bool dfirst = true;
        if (cd != 1) {
            dtmp << cd.str();
            dfirst = false;
        }
        for (const Expr& k : den) {
            if (!dfirst) dtmp << "*";
            print_infix(dtmp, k, 2);
            dfirst = false;
        }
        den_str = dtmp.str();
        if (pieces > 1) den_str = "(" + den_str + ")";
    }

    int prec = den_str.empty() && num.size() + (cn != 1 ? 1 : 0) <= 1 ? 3 : 2;
    bool need_parens = parent_prec > prec || (neg && parent_prec >= 2);
    if (neg) os << "-";
    if (need_parens) os << "(";
    os << num_str;
    if (!den_str.empty()) os << "/" << den_str;
    if (need_parens) os << ")";
}

inline void print_infix(std::ostream& os, const Expr& e, int parent_prec) {
    switch (e.kind()) {
        case Expr::Kind::constant: {
            const Rat& v = e.value();
            bool neg = v < 0;
            bool frac = !rat_is_integer(v);
            bool parens = (neg && parent_prec >= 2) || (frac && parent_prec >= 3);
            if (parens) os << "(";
            if (frac)
                os << rat_num(v).str() << "/" << rat_den(v).str();
            else
                os << rat_num(v).str();
            if (parens) os << ")";
            return;
        }
        case Expr::Kind::variable:
            os << e.var_name();
            return;
        case Expr::Kind::apply:
            os << e.fname() << "(";
            print_infix(os, e.arg(), 0);
            os << ")";
            return;
        case Expr::Kind::pow: {
            if (e.exponent() < 0) {
                print_product(os, e, parent_prec);
                return;
            }
            bool base_parens = detail::kind_rank(e.base().kind()) >=
                               detail::kind_rank(Expr::Kind::pow);
            if (parent_prec > 3) os << "(";
            if (base_parens) os << "(";
            print_infix(os, e.base(), 3);
            if (base_parens) os << ")";
            os << "^" << e.exponent();
            if (parent_prec > 3) os << ")";
            return;
        }
        case Expr::Kind::mul:
            print_product(os, e, parent_prec);
            return;
        case Expr::Kind::add: {
            if (parent_prec > 1) os << "(";
            bool first = true;
            for (const Expr& k : e.kids()) {
                if (!first && starts_negative(k)) {
                    os << " - ";
                    if (k.is_constant()) {
                        print_infix(os, Expr::constant(-k.value()), 2);
                    } else {
                        std::vector<Expr> kk = k.kids();
                        kk[0] = Expr::constant(-kk[0].value());
                        print_infix(os, canonical(Expr::mul(std::move(kk))), 2);
                    }
                } else {
                    if (!first) os << " + ";
                    print_infix(os, k, first ? 0 : 1);
                }
                first = false;
            }
            if (parent_prec > 1) os << ")";
            return;
        }
    }
}

} // namespace detail

inline std::string to_infix(const Expr& e) {
    std::ostringstream os;
    detail::print_infix(os, e, 0);
    return os.str();
}

// Convenience builders.
inline Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) {
    return Expr::add({a, Expr::mul({Expr::constant(-1), b})});
}
inline Expr operator-(const Expr& a) { return Expr::mul({Expr::constant(-1), a}); }

/// a / b as a * b^-1 (exact; b must not be the zero constant).
inline Expr expr_div(const Expr& a, const Expr& b) {
    if (b.is_constant()) {
        if (b.value() == 0) throw domain_error("division by zero expression");
        return Expr::mul({a, Expr::constant(Rat(1) / b.value())});
    }
    return Expr::mul({a, Expr::pow(b, -1)});
}

} // namespace liouville
