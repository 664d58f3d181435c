#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/parse.hpp"
#include "liouville/ratfunc.hpp"

namespace liouville {

enum class ExtKind { base, log_k, exp_k, tan_k, const_sym, special };

/// One differential field extension theta_i. The derivative rule is the
/// closed form of theta_i' as a rational function of theta_0..theta_i.
struct Extension {
    ExtKind kind = ExtKind::base;
    std::string name;   // "x", "log", "exp", "tan", special name, or constant name
    RatFunc argument;   // over theta_0..theta_{i-1}; unused for base/const_sym
    RatFunc rule;       // over theta_0..theta_i
    int nesting = 0;    // function nesting depth of this extension

    Extension() : argument(1), rule(1) {}
};

/// Registry of special function kinds (atan, erf, ...) and named symbolic
/// constants (sqrt_pi). Frozen at startup; towers instantiate entries but
/// never mutate the registry.
class SpecialRegistry {
  public:
    struct SpecialDef {
        std::string name;
        Expr deriv_template; // in "u" and "self"; theta' = u' * template
        double (*eval_fn)(double);
    };

    static SpecialRegistry& instance() {
        static SpecialRegistry reg;
        return reg;
    }

    /// Registers a special function kind whose derivative is
    /// u' * derivative_template. The template must stay inside the tower
    /// model: rational operations over "u", "self", registered constants, and
    /// applications of already-registered function kinds (those become
    /// auxiliary extensions, inserted before the new indeterminate in
    /// left-to-right template order). Throws config_error otherwise.
    void register_special(const std::string& name, const Expr& derivative_template,
                          double (*eval_fn)(double)) {
        if (frozen_) throw config_error("special registry is frozen");
        if (defs_.count(name) || name == "log" || name == "exp" || name == "tan")
            throw config_error("function kind '" + name + "' already registered");
        std::string why;
        if (!template_closed(derivative_template, false, why))
            throw config_error("derivative template for '" + name +
                               "' is not closed under the tower model: " + why);
        FunctionCatalog::instance().add(name);
        defs_[name] = SpecialDef{name, derivative_template, eval_fn};
    }

    void register_special(const std::string& name, const std::string& template_infix,
                          double (*eval_fn)(double)) {
        register_special(name, parse_infix(template_infix), eval_fn);
    }

    void register_constant(const std::string& name, double value) {
        if (frozen_) throw config_error("special registry is frozen");
        const_syms_[name] = value;
    }

    bool has_special(const std::string& name) const { return defs_.count(name) != 0; }
    const SpecialDef& special(const std::string& name) const {
        auto it = defs_.find(name);
        if (it == defs_.end()) throw domain_error("unknown special kind '" + name + "'");
        return it->second;
    }

    bool has_constant(const std::string& name) const {
        return const_syms_.count(name) != 0;
    }
    double constant_value(const std::string& name) const {
        auto it = const_syms_.find(name);
        if (it == const_syms_.end())
            throw domain_error("unknown constant symbol '" + name + "'");
        return it->second;
    }

    void freeze() { frozen_ = true; }

  private:
    SpecialRegistry() {
        const_syms_["sqrt_pi"] = std::sqrt(3.14159265358979323846);
        defs_["atan"] = SpecialDef{"atan", parse_infix("1/(1 + u^2)"),
                                   [](double a) { return std::atan(a); }};
        defs_["erf"] = SpecialDef{
            "erf", parse_infix("2/sqrt_pi * exp(-(u^2))"),
            [](double a) { return std::erf(a); }};
    }

    bool template_closed(const Expr& e, bool inside_apply, std::string& why) const {
        switch (e.kind()) {
            case Expr::Kind::constant:
                return true;
            case Expr::Kind::variable: {
                const std::string& v = e.var_name();
                if (v == "u") return true;
                if (v == "self") {
                    if (inside_apply) {
                        why = "'self' may not appear inside a function application";
                        return false;
                    }
                    return true;
                }
                if (const_syms_.count(v)) return true;
                why = "unknown symbol '" + v + "'";
                return false;
            }
            case Expr::Kind::apply: {
                const std::string& f = e.fname();
                if (f != "log" && f != "exp" && f != "tan" && !defs_.count(f)) {
                    why = "function '" + f + "' is not a registered kind";
                    return false;
                }
                return template_closed(e.arg(), true, why);
            }
            case Expr::Kind::pow:
                return template_closed(e.base(), inside_apply, why);
            case Expr::Kind::add:
            case Expr::Kind::mul:
                for (const Expr& k : e.kids())
                    if (!template_closed(k, inside_apply, why)) return false;
                return true;
        }
        return false;
    }

    std::map<std::string, SpecialDef> defs_;
    std::map<std::string, double> const_syms_;
    bool frozen_ = false;
};

/// Registers a special function kind; returns its name (the extension kind
/// towers refer to).
inline std::string register_special(const std::string& name,
                                    const std::string& derivative_template_infix,
                                    double (*eval_fn)(double) = nullptr) {
    SpecialRegistry::instance().register_special(name, derivative_template_infix,
                                                 eval_fn);
    return name;
}

/// Ordered differential field tower Q(theta_0, ..., theta_n), theta_0 = x.
/// Immutable in spirit: builders append, everything else is read-only.
class Tower {
  public:
    Tower() {
        Extension x;
        x.kind = ExtKind::base;
        x.name = "x";
        x.argument = RatFunc(1);
        x.rule = RatFunc::constant(1, Rat(1));
        exts_.push_back(std::move(x));
    }

    int size() const { return static_cast<int>(exts_.size()); }
    const Extension& operator[](int i) const { return exts_[static_cast<std::size_t>(i)]; }

    /// Finds an existing extension with this kind/name and argument.
    std::optional<int> find(ExtKind kind, const std::string& name,
                            const RatFunc& arg) const {
        for (int i = 0; i < size(); ++i) {
            const Extension& e = exts_[static_cast<std::size_t>(i)];
            if (e.kind != kind || e.name != name) continue;
            if (kind == ExtKind::const_sym) return i;
            int w = std::max(e.argument.nvars(), arg.nvars());
            if (w <= size() && e.argument.resized(w) == arg.resized(w)) return i;
        }
        return std::nullopt;
    }

    int add_log(const RatFunc& arg) { return add_elementary(ExtKind::log_k, "log", arg); }
    int add_exp(const RatFunc& arg) { return add_elementary(ExtKind::exp_k, "exp", arg); }
    int add_tan(const RatFunc& arg) { return add_elementary(ExtKind::tan_k, "tan", arg); }

    int add_const_symbol(const std::string& name) {
        if (auto i = find(ExtKind::const_sym, name, RatFunc(1))) return *i;
        if (!SpecialRegistry::instance().has_constant(name))
            throw domain_error("unknown constant symbol '" + name + "'");
        Extension e;
        e.kind = ExtKind::const_sym;
        e.name = name;
        e.argument = RatFunc(size());
        e.rule = RatFunc(size() + 1); // zero
        e.nesting = 0;
        exts_.push_back(std::move(e));
        return size() - 1;
    }

    /// Appends a registered special kind, materializing any auxiliary
    /// extensions its derivative template needs (deterministically, in
    /// left-to-right template order, before the new indeterminate).
    int add_special(const std::string& name, const RatFunc& arg) {
        const auto& def = SpecialRegistry::instance().special(name);
        if (auto i = find(ExtKind::special, name, arg)) return *i;
        if (arg.nvars() > size()) throw domain_error("extension argument refers forward");
        materialize_aux(def.deriv_template, arg);
        // Now every dependency exists; the new indeterminate sits at size().
        const int self_idx = size();
        const int arity = size() + 1;
        RatFunc tmpl = template_value(def.deriv_template, arg, self_idx, arity);
        Extension e;
        e.kind = ExtKind::special;
        e.name = name;
        e.argument = arg.resized(size());
        e.rule = derivative_of(arg, size()).resized(arity) * tmpl;
        e.nesting = nesting_of(arg) + 1;
        exts_.push_back(std::move(e));
        return size() - 1;
    }

    int add_extension(const std::string& fname, const RatFunc& arg) {
        if (fname == "log") return add_log(arg);
        if (fname == "exp") return add_exp(arg);
        if (fname == "tan") return add_tan(arg);
        if (SpecialRegistry::instance().has_special(fname)) return add_special(fname, arg);
        throw domain_error("unknown extension kind '" + fname + "'");
    }

    /// Structural validity diagnostics; empty result means the tower is ok.
    /// Algebraic independence is checked heuristically: distinct canonical
    /// (kind, argument) pairs.
    std::vector<std::string> validate() const {
        std::vector<std::string> diags;
        if (exts_.empty() || exts_[0].kind != ExtKind::base)
            diags.push_back("theta0 must be the base variable x");
        for (int i = 1; i < size(); ++i) {
            const Extension& e = exts_[static_cast<std::size_t>(i)];
            std::string label = "theta" + std::to_string(i);
            if (e.kind == ExtKind::base) {
                diags.push_back(label + ": duplicate base variable");
                continue;
            }
            if (e.kind == ExtKind::const_sym) {
                if (!SpecialRegistry::instance().has_constant(e.name))
                    diags.push_back(label + ": unknown constant symbol " + e.name);
                continue;
            }
            if (e.argument.nvars() > i)
                diags.push_back(label + ": argument refers to a later indeterminate");
            if (e.argument.is_constant())
                diags.push_back(label + ": malformed argument (constant)");
            if (e.argument.is_zero())
                diags.push_back(label + ": malformed argument (zero)");
            for (int j = 1; j < i; ++j) {
                const Extension& o = exts_[static_cast<std::size_t>(j)];
                if (o.kind != e.kind || o.name != e.name) continue;
                int w = std::max(o.argument.nvars(), e.argument.nvars());
                if (o.argument.resized(w) == e.argument.resized(w))
                    diags.push_back(label +
                                    ": duplicate extension (same kind and argument as theta" +
                                    std::to_string(j) + ")");
            }
        }
        return diags;
    }

    bool is_valid() const { return validate().empty(); }

    /// theta_i' as a rational function over the full tower arity.
    RatFunc rule_at(int i) const { return exts_[static_cast<std::size_t>(i)].rule.resized(size()); }

    std::string name_of(int i) const {
        const Extension& e = exts_[static_cast<std::size_t>(i)];
        if (e.kind == ExtKind::base) return "x";
        if (e.kind == ExtKind::const_sym) return e.name;
        return "theta" + std::to_string(i);
    }

    int index_of_name(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (name_of(i) == name) return i;
        return -1;
    }

    int nesting_of_ext(int i) const { return exts_[static_cast<std::size_t>(i)].nesting; }

    /// Numeric values of all indeterminates at x; NaN entries mark invalid
    /// evaluations (log of a nonpositive value, tan near a pole, overflow).
    std::vector<double> values_at(double x) const;

  private:
    int add_elementary(ExtKind kind, const char* name, const RatFunc& arg) {
        if (auto i = find(kind, name, arg)) return *i;
        if (arg.nvars() > size()) throw domain_error("extension argument refers forward");
        RatFunc a = arg.resized(size());
        const int arity = size() + 1;
        RatFunc da = derivative_of(a, size()).resized(arity);
        Extension e;
        e.kind = kind;
        e.name = name;
        e.argument = a;
        e.nesting = nesting_of(a) + 1;
        RatFunc self = RatFunc::variable(arity, size());
        switch (kind) {
            case ExtKind::log_k:
                if (a.is_zero()) throw domain_error("log of zero argument");
                e.rule = da / a.resized(arity);
                break;
            case ExtKind::exp_k:
                e.rule = da * self;
                break;
            case ExtKind::tan_k:
                e.rule = da * (RatFunc::constant(arity, Rat(1)) + self * self);
                break;
            default:
                throw domain_error("internal: bad elementary kind");
        }
        exts_.push_back(std::move(e));
        return size() - 1;
    }

    /// Derivative restricted to the first `upto` extensions (used while the
    /// tower is still being built).
    RatFunc derivative_of(const RatFunc& f, int upto) const {
        auto dpoly = [&](const MPoly& p) {
            RatFunc acc(upto);
            for (int i = 0; i < upto; ++i) {
                MPoly pi = p.resized(upto).derivative(i);
                if (pi.is_zero()) continue;
                acc += RatFunc(pi) * exts_[static_cast<std::size_t>(i)].rule.resized(upto);
            }
            return acc;
        };
        RatFunc n(f.num().resized(upto)), d(f.den().resized(upto));
        RatFunc dn = dpoly(f.num()), dd = dpoly(f.den());
        return (dn * d - n * dd) / (d * d);
    }

    int nesting_of(const RatFunc& f) const {
        int m = 0;
        auto scan = [&](const MPoly& p) {
            for (const auto& [e, c] : p.terms())
                for (int i = 0; i < p.nvars(); ++i)
                    if (e[i] > 0) m = std::max(m, exts_[static_cast<std::size_t>(i)].nesting);
        };
        scan(f.num());
        scan(f.den());
        return m;
    }

    /// Depth-first pass creating auxiliary extensions for template
    /// applications and constant symbols.
    void materialize_aux(const Expr& t, const RatFunc& u) {
        switch (t.kind()) {
            case Expr::Kind::constant:
                return;
            case Expr::Kind::variable:
                if (t.var_name() != "u" && t.var_name() != "self")
                    add_const_symbol(t.var_name());
                return;
            case Expr::Kind::apply: {
                materialize_aux(t.arg(), u);
                RatFunc a = template_value(t.arg(), u, -1, size());
                add_extension(t.fname(), a);
                return;
            }
            case Expr::Kind::pow:
                materialize_aux(t.base(), u);
                return;
            case Expr::Kind::add:
            case Expr::Kind::mul:
                for (const Expr& k : t.kids()) materialize_aux(k, u);
                return;
        }
    }

    RatFunc template_value(const Expr& t, const RatFunc& u, int self_idx,
                           int arity) const {
        switch (t.kind()) {
            case Expr::Kind::constant:
                return RatFunc::constant(arity, t.value());
            case Expr::Kind::variable: {
                const std::string& v = t.var_name();
                if (v == "u") return u.resized(arity);
                if (v == "self") {
                    if (self_idx < 0)
                        throw domain_error("'self' not allowed in this template position");
                    return RatFunc::variable(arity, self_idx);
                }
                if (auto i = find(ExtKind::const_sym, v, RatFunc(1)))
                    return RatFunc::variable(arity, *i);
                throw domain_error("template symbol '" + v + "' not materialized");
            }
            case Expr::Kind::apply: {
                RatFunc a = template_value(t.arg(), u, -1, arity);
                ExtKind k = t.fname() == "log"   ? ExtKind::log_k
                            : t.fname() == "exp" ? ExtKind::exp_k
                            : t.fname() == "tan" ? ExtKind::tan_k
                                                 : ExtKind::special;
                if (auto i = find(k, t.fname(), a)) return RatFunc::variable(arity, *i);
                throw domain_error("template application not materialized");
            }
            case Expr::Kind::pow:
                return template_value(t.base(), u, self_idx, arity).pow(t.exponent());
            case Expr::Kind::add:
            case Expr::Kind::mul: {
                bool is_add = t.kind() == Expr::Kind::add;
                RatFunc acc = RatFunc::constant(arity, is_add ? Rat(0) : Rat(1));
                for (const Expr& kk : t.kids()) {
                    RatFunc v = template_value(kk, u, self_idx, arity);
                    acc = is_add ? acc + v : acc * v;
                }
                return acc;
            }
        }
        throw domain_error("internal: bad template node");
    }

    std::vector<Extension> exts_;
};

/// Exact total derivative d/dx of a polynomial over the tower.
inline RatFunc derivative(const MPoly& p, const Tower& t) {
    if (p.nvars() > t.size())
        throw domain_error("polynomial references an indeterminate not in the tower");
    const int n = t.size();
    MPoly pp = p.resized(n);
    RatFunc acc(n);
    for (int i = 0; i < n; ++i) {
        MPoly pi = pp.derivative(i);
        if (pi.is_zero()) continue;
        acc += RatFunc(pi) * t.rule_at(i);
    }
    return acc;
}

/// Exact total derivative d/dx of a rational function over the tower.
inline RatFunc derivative(const RatFunc& f, const Tower& t) {
    if (f.nvars() > t.size())
        throw domain_error("expression references an indeterminate not in the tower");
    const int n = t.size();
    RatFunc num(f.num().resized(n)), den(f.den().resized(n));
    RatFunc dn = derivative(f.num().resized(n), t);
    RatFunc dd = derivative(f.den().resized(n), t);
    return (dn * den - num * dd) / (den * den);
}

inline std::vector<double> Tower::values_at(double x) const {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i) {
        const Extension& e = exts_[static_cast<std::size_t>(i)];
        double v = std::numeric_limits<double>::quiet_NaN();
        switch (e.kind) {
            case ExtKind::base:
                v = x;
                break;
            case ExtKind::const_sym:
                v = SpecialRegistry::instance().constant_value(e.name);
                break;
            default: {
                std::vector<double> lower(vals.begin(),
                                          vals.begin() + e.argument.nvars());
                double dn = e.argument.num().eval(lower);
                double dd = e.argument.den().eval(lower);
                double a = dn / dd;
                if (!std::isfinite(a)) break;
                if (e.kind == ExtKind::log_k) {
                    v = a > 1e-12 ? std::log(a) : std::numeric_limits<double>::quiet_NaN();
                } else if (e.kind == ExtKind::exp_k) {
                    v = a < 300.0 && a > -300.0 ? std::exp(a)
                                                : std::numeric_limits<double>::quiet_NaN();
                } else if (e.kind == ExtKind::tan_k) {
                    v = std::abs(std::cos(a)) > 1e-3
                            ? std::tan(a)
                            : std::numeric_limits<double>::quiet_NaN();
                } else {
                    const auto& def = SpecialRegistry::instance().special(e.name);
                    v = def.eval_fn ? def.eval_fn(a)
                                    : std::numeric_limits<double>::quiet_NaN();
                }
                break;
            }
        }
        vals.push_back(v);
    }
    return vals;
}

// ---------------------------------------------------------------------------
// Tower text form:  one extension per line, e.g.
//   theta1 = log(x)
//   theta2 = exp(theta1 + x)
// A bare "x" (or "theta0 = x") line is accepted and ignored. Constant symbols
// serialize as "thetaK = sqrt_pi". '#' starts a comment.

namespace detail {

/// Converts an expression over *named* indeterminates to a rational function
/// (no function applications allowed; those must be separate tower lines).
inline RatFunc expr_to_ratfunc_named(const Expr& e, const std::map<std::string, int>& idx,
                                     int arity) {
    switch (e.kind()) {
        case Expr::Kind::constant:
            return RatFunc::constant(arity, e.value());
        case Expr::Kind::variable: {
            auto it = idx.find(e.var_name());
            if (it == idx.end())
                throw conversion_error("unknown indeterminate '" + e.var_name() + "'");
            return RatFunc::variable(arity, it->second);
        }
        case Expr::Kind::apply:
            throw conversion_error(
                "function application not allowed inside a tower argument; "
                "declare it as its own extension line");
        case Expr::Kind::pow:
            return expr_to_ratfunc_named(e.base(), idx, arity).pow(e.exponent());
        case Expr::Kind::add:
        case Expr::Kind::mul: {
            bool is_add = e.kind() == Expr::Kind::add;
            RatFunc acc = RatFunc::constant(arity, is_add ? Rat(0) : Rat(1));
            for (const Expr& k : e.kids()) {
                RatFunc v = expr_to_ratfunc_named(k, idx, arity);
                acc = is_add ? acc + v : acc * v;
            }
            return acc;
        }
    }
    throw conversion_error("internal: bad expression node");
}

} // namespace detail

/// Parses the line-oriented tower description. Labels are remapped to actual
/// indices, so files without explicit auxiliary lines still resolve.
inline Tower parse_tower(const std::string& text) {
    Tower t;
    std::map<std::string, int> labels;
    labels["x"] = 0;
    // Split on newlines and semicolons.
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n' || c == ';') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    lines.push_back(cur);

    for (std::string line : lines) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line == "x") continue;
            throw parse_error("tower line must be 'label = extension': " + line, 0);
        }
        std::string label = line.substr(0, eq);
        label.erase(std::find_if(label.rbegin(), label.rend(), notspace).base(),
                    label.end());
        std::string rhs = line.substr(eq + 1);
        rhs.erase(rhs.begin(), std::find_if(rhs.begin(), rhs.end(), notspace));
        if (rhs == "x") {
            labels[label] = 0;
            continue;
        }
        Expr re = parse_infix(rhs);
        int idx;
        if (re.kind() == Expr::Kind::variable &&
            SpecialRegistry::instance().has_constant(re.var_name())) {
            idx = t.add_const_symbol(re.var_name());
            labels[re.var_name()] = idx;
        } else if (re.kind() == Expr::Kind::apply) {
            RatFunc arg = detail::expr_to_ratfunc_named(re.arg(), labels, t.size());
            idx = t.add_extension(re.fname(), arg);
        } else {
            throw parse_error("tower extension must be f(arg) or a constant symbol: " +
                                  rhs,
                              0);
        }
        labels[label] = idx;
    }
    return t;
}

namespace detail {

/// Inverse of expr_to_ratfunc_named: a polynomial over named indeterminates.
inline Expr mpoly_to_named_expr(const MPoly& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return Expr::constant(0);
    std::vector<Expr> terms;
    for (const auto& [e, c] : p.terms()) {
        std::vector<Expr> factors;
        factors.push_back(Expr::constant(c));
        for (int i = 0; i < p.nvars(); ++i)
            if (e[i] > 0)
                factors.push_back(
                    Expr::pow(Expr::variable(names[static_cast<std::size_t>(i)]), e[i]));
        terms.push_back(Expr::mul(std::move(factors)));
    }
    return canonical(Expr::add(std::move(terms)));
}

inline Expr ratfunc_to_named_expr(const RatFunc& f, const std::vector<std::string>& names) {
    Expr num = mpoly_to_named_expr(f.num(), names);
    if (f.is_polynomial() && f.den().constant_value() == 1) return num;
    return canonical(expr_div(num, mpoly_to_named_expr(f.den(), names)));
}

inline std::vector<std::string> tower_names(const Tower& t) {
    std::vector<std::string> names;
    for (int i = 0; i < t.size(); ++i) names.push_back(t.name_of(i));
    return names;
}

} // namespace detail

/// Line-oriented serialization; parse_tower(tower_to_text(t)) reproduces t.
inline std::string tower_to_text(const Tower& t) {
    std::ostringstream os;
    os << "x";
    std::vector<std::string> names = detail::tower_names(t);
    for (int i = 1; i < t.size(); ++i) {
        const Extension& e = t[i];
        os << "; theta" << i << " = ";
        if (e.kind == ExtKind::const_sym) {
            os << e.name;
        } else {
            std::vector<std::string> lower(names.begin(), names.begin() + e.argument.nvars());
            os << e.name << "("
               << to_infix(detail::ratfunc_to_named_expr(e.argument, lower)) << ")";
        }
    }
    return os.str();
}

} // namespace liouville
