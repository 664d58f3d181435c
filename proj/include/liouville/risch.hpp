#pragma once

#include <string>
#include <vector>

#include "liouville/convert.hpp"
#include "liouville/linsolve.hpp"
#include "liouville/verify.hpp"

namespace liouville {

namespace detail {

/// True when the factor is a single monomial in exponential indeterminates
/// (its degree does not drop under differentiation).
inline bool is_exp_monomial(const MPoly& f, const Tower& t) {
    if (f.terms().size() != 1) return false;
    const auto& [e, c] = *f.terms().begin();
    bool any = false;
    for (int i = 0; i < f.nvars(); ++i) {
        if (e[i] == 0) continue;
        if (i >= t.size() || t[i].kind != ExtKind::exp_k) return false;
        any = true;
    }
    return any;
}

/// True when the factor is theta^2 + 1 for a tangent indeterminate theta.
inline bool is_tan_kernel(const MPoly& f, const Tower& t) {
    if (f.terms().size() != 2) return false;
    int var = -1;
    for (const auto& [e, c] : f.terms()) {
        int nz = 0, v = -1;
        for (int i = 0; i < f.nvars(); ++i)
            if (e[i] != 0) {
                ++nz;
                v = i;
            }
        if (nz == 0) {
            if (c != 1) return false;
        } else if (nz == 1 && e[v] == 2 && c == 1) {
            var = v;
        } else {
            return false;
        }
    }
    return var >= 0 && var < t.size() && t[var].kind == ExtKind::tan_k;
}

} // namespace detail

/// Hypothesis structure U/D + sum c_i log(v_i) from Liouville's theorem.
struct RischCandidate {
    MPoly denom;                        // D from the d_i* rule
    std::vector<Exponents> u_support;   // monomial support of U
    std::vector<MPoly> log_args;        // the v_i
};

struct RischStats {
    std::size_t unknowns = 0;
    std::size_t equations = 0;
    int escalations = 0;
};

enum class IntegrateStatus { success, null, unsupported };

struct IntegrateResult {
    IntegrateStatus status = IntegrateStatus::null;
    Expr antiderivative;     // valid when status == success
    RischStats stats;
    std::string reason;      // why null/unsupported

    bool found() const { return status == IntegrateStatus::success; }
};

struct RischOptions {
    std::size_t support_cap = 500; // max monomials in U
    int escalations = 1;           // extra passes with +1 degree bounds
};

/// D = prod q_i^{d_i*}: multiplicity is kept for exponential monomials and
/// tangent kernels (their degree survives differentiation), dropped by one
/// otherwise.
inline MPoly candidate_denominator(const MPoly& q, const Tower& t) {
    SqfFactorization sqf = squarefree_factor(q.resized(t.size()), t.size() - 1);
    MPoly d = MPoly::one(t.size());
    for (const auto& [f, m] : sqf.factors) {
        int keep = (detail::is_exp_monomial(f, t) || detail::is_tan_kernel(f, t))
                       ? m
                       : m - 1;
        if (keep > 0) d *= f.pow(static_cast<unsigned>(keep));
    }
    return d;
}

/// Builds the hypothesis: the log part is formed from the square-free factors
/// of the denominator (exponential monomials and tangent kernels excluded —
/// their logs differentiate to polynomials) plus the tangent kernels of the
/// tower; U ranges over a per-variable degree box derived from f and D.
inline RischCandidate make_candidate(const RatFunc& f, const Tower& t, int extra_degree,
                                     const RischOptions& opts, bool& overflow) {
    const int n = t.size();
    RischCandidate cand;
    cand.denom = candidate_denominator(f.den(), t);

    SqfFactorization sqf = squarefree_factor(f.den().resized(n), n - 1);
    for (const auto& [fac, m] : sqf.factors) {
        if (detail::is_exp_monomial(fac, t)) continue;
        if (detail::is_tan_kernel(fac, t)) continue;
        cand.log_args.push_back(fac);
    }
    for (int i = 0; i < n; ++i) {
        if (t[i].kind != ExtKind::tan_k) continue;
        MPoly kernel = MPoly::variable(n, i, 2) + MPoly::one(n);
        bool seen = false;
        for (const MPoly& v : cand.log_args) seen = seen || v == kernel;
        if (!seen) cand.log_args.push_back(kernel);
    }

    std::vector<int> bounds(static_cast<std::size_t>(n), 0);
    std::size_t count = 1;
    for (int v = 0; v < n; ++v) {
        int b = std::max(f.num().resized(n).degree(v), cand.denom.degree(v)) + 1 +
                extra_degree;
        bounds[static_cast<std::size_t>(v)] = b;
        count *= static_cast<std::size_t>(b) + 1;
        if (count > 16 * opts.support_cap) break; // avoid pointless enumeration
    }
    if (count > opts.support_cap) {
        overflow = true;
        return cand;
    }
    overflow = false;
    Exponents e(static_cast<std::size_t>(n), 0);
    while (true) {
        cand.u_support.push_back(e);
        int v = 0;
        while (v < n && e[static_cast<std::size_t>(v)] ==
                            bounds[static_cast<std::size_t>(v)]) {
            e[static_cast<std::size_t>(v)] = 0;
            ++v;
        }
        if (v == n) break;
        ++e[static_cast<std::size_t>(v)];
    }
    return cand;
}

/// Differentiates the hypothesis with symbolic unknowns, clears denominators,
/// and equates monomial coefficients: one linear equation per monomial.
/// Column order: U coefficients (support order), then the c_i.
inline LinearSystem build_system(const RatFunc& f, const RischCandidate& cand,
                                 const Tower& t) {
    const int n = t.size();
    std::vector<RatFunc> cols;
    cols.reserve(cand.u_support.size() + cand.log_args.size());
    RatFunc dcap = RatFunc(cand.denom);
    for (const Exponents& m : cand.u_support) {
        RatFunc mono = RatFunc(MPoly::monomial(n, m, Rat(1)));
        cols.push_back(derivative(mono / dcap, t));
    }
    for (const MPoly& v : cand.log_args)
        cols.push_back(derivative(v.resized(n), t) / RatFunc(v.resized(n)));

    MPoly common = f.den().resized(n);
    for (const RatFunc& c : cols) common = mlcm(common, c.den());

    std::map<Exponents, std::size_t, GrlexGreater> row_of;
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    auto row_for = [&](const Exponents& e) {
        auto it = row_of.find(e);
        if (it != row_of.end()) return it->second;
        std::size_t idx = rows.size();
        row_of.emplace(e, idx);
        rows.emplace_back(cols.size(), Rat(0));
        rhs.emplace_back(0);
        return idx;
    };

    for (std::size_t j = 0; j < cols.size(); ++j) {
        MPoly cleared = cols[j].num() * exact_divide_checked(common, cols[j].den());
        for (const auto& [e, c] : cleared.terms()) rows[row_for(e)][j] = c;
    }
    MPoly cleared_rhs = f.num().resized(n) * exact_divide_checked(common, f.den().resized(n));
    for (const auto& [e, c] : cleared_rhs.terms()) rhs[row_for(e)] = c;

    LinearSystem sys;
    sys.unknowns = cols.size();
    sys.rows = std::move(rows);
    sys.rhs = std::move(rhs);
    return sys;
}

/// Algorithm 1 over log/exp/tan towers. Returns the antiderivative, NULL (no
/// certificate found — not a proof of non-integrability), or unsupported for
/// towers outside the algorithm's scope.
inline IntegrateResult integrate(const RatFunc& f_in, const Tower& t,
                                 const RischOptions& opts = {}) {
    IntegrateResult res;
    for (int i = 1; i < t.size(); ++i) {
        if (t[i].kind == ExtKind::log_k || t[i].kind == ExtKind::exp_k ||
            t[i].kind == ExtKind::tan_k)
            continue;
        res.status = IntegrateStatus::unsupported;
        res.reason = "tower extension theta" + std::to_string(i) + " (" + t[i].name +
                     ") is outside the log/exp/tan scope";
        return res;
    }
    RatFunc f = f_in.resized(t.size());
    if (f.is_zero()) {
        res.status = IntegrateStatus::success;
        res.antiderivative = Expr::constant(0);
        return res;
    }

    for (int pass = 0; pass <= opts.escalations; ++pass) {
        bool overflow = false;
        RischCandidate cand = make_candidate(f, t, pass, opts, overflow);
        if (overflow) {
            res.status = IntegrateStatus::null;
            res.reason = "candidate support exceeds the configured cap";
            res.stats.escalations = pass;
            return res;
        }
        LinearSystem sys = build_system(f, cand, t);
        res.stats.unknowns = sys.unknowns;
        res.stats.equations = sys.equations();
        res.stats.escalations = pass;
        SolveResult sol = solve_linear(sys);
        if (sol.status != SolveStatus::solved) continue;

        MPoly u = MPoly::zero(t.size());
        for (std::size_t i = 0; i < cand.u_support.size(); ++i)
            if (sol.solution[i] != 0)
                u += MPoly::monomial(t.size(), cand.u_support[i], sol.solution[i]);
        RatFunc core = RatFunc(u, cand.denom);
        std::vector<Expr> parts;
        if (!core.is_zero()) parts.push_back(ratfunc_to_expr(core, t));
        for (std::size_t i = 0; i < cand.log_args.size(); ++i) {
            const Rat& c = sol.solution[cand.u_support.size() + i];
            if (c == 0) continue;
            parts.push_back(canonical(Expr::constant(c) *
                                      Expr::apply("log", mpoly_to_expr(cand.log_args[i], t))));
        }
        Expr g = canonical(Expr::add(std::move(parts)));

        // No false positives: every returned antiderivative re-verifies.
        CheckOutcome chk = check_pair(ratfunc_to_expr(f, t), g, t);
        if (!chk.passed())
            throw domain_error("internal: solved candidate failed verification");
        res.status = IntegrateStatus::success;
        res.antiderivative = g;
        return res;
    }
    res.status = IntegrateStatus::null;
    res.reason = "linear system inconsistent at all configured support sizes";
    return res;
}

/// Convenience overload for x-form expressions.
inline IntegrateResult integrate(const Expr& e, const Tower& t,
                                 const RischOptions& opts = {}) {
    RatFunc f = expr_to_ratfunc(e, t);
    return integrate(f, t, opts);
}

} // namespace liouville
