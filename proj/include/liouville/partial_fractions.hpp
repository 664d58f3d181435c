#pragma once

#include <utility>
#include <vector>

#include "liouville/fpoly.hpp"

namespace liouville {

/// One fraction num / (lowden * factor^exp) with deg_main(num) < deg_main(factor)
/// and lowden free of the main variable.
struct PfTerm {
    MPoly num;
    MPoly lowden;
    MPoly factor;
    int exp;

    RatFunc value() const {
        return RatFunc(num, lowden * factor.pow(static_cast<unsigned>(exp)));
    }
};

/// Full decomposition in the main variable over the recursive coefficient
/// field: polynomial part (denominator free of the main variable) plus the
/// multiplicity ladder of proper fractions. Recombination is exact.
struct PartialFractionForm {
    int main_var = 0;
    RatFunc poly_part;
    std::vector<PfTerm> terms;

    RatFunc recombine() const {
        RatFunc acc = poly_part;
        for (const PfTerm& t : terms) acc += t.value();
        return acc;
    }
};

namespace detail {

/// Rewrites C / p_monic^exp (coefficients in the field) as a PfTerm over the
/// original prim-normalized factor P with lc = leading coeff of P in main.
inline PfTerm make_pf_term(const FPoly& C, const MPoly& P, const MPoly& lc, int exp,
                           int main) {
    const int n = P.nvars();
    // C / (P/lc)^exp == (C * lc^exp) / P^exp
    RatFunc w = C.to_ratfunc() * RatFunc(lc.pow(static_cast<unsigned>(exp)));
    PfTerm t;
    t.factor = P;
    t.exp = exp;
    t.num = w.num();
    t.lowden = w.den();
    (void)n;
    (void)main;
    return t;
}

} // namespace detail

/// Partial fraction decomposition of f w.r.t. `main` via square-free
/// factorization, per-factor extended Euclid, and the multiplicity ladder.
inline PartialFractionForm partial_fractions(const RatFunc& f, int main) {
    const int n = f.nvars();
    PartialFractionForm out;
    out.main_var = main;
    out.poly_part = RatFunc(n);
    if (f.is_zero()) return out;

    SqfFactorization sqf = squarefree_factor(f.den(), main);

    // Denominator content (factors free of the main variable) joins the
    // coefficient field; only main-variable factors get ladder terms.
    MPoly dlow = MPoly::constant(n, sqf.unit);
    std::vector<std::pair<MPoly, int>> mains;
    for (const auto& [q, m] : sqf.factors) {
        if (q.degree(main) > 0)
            mains.emplace_back(q, m);
        else
            dlow *= q.pow(static_cast<unsigned>(m));
    }

    if (mains.empty()) {
        out.poly_part = f;
        return out;
    }

    std::vector<FPoly> monic;
    monic.reserve(mains.size());
    FPoly total = FPoly::constant(n, main, RatFunc::constant(n, Rat(1)));
    MPoly lc_prod = MPoly::one(n); // den == dlow * lc_prod * total
    for (const auto& [P, m] : mains) {
        FPoly p = FPoly::from_mpoly(P, main).monic();
        total = total * p.pow(static_cast<unsigned>(m));
        lc_prod *= P.lead_coeff_in(main).pow(static_cast<unsigned>(m));
        monic.push_back(std::move(p));
    }

    FPoly numer =
        FPoly::from_mpoly(f.num(), main).scaled(RatFunc(MPoly::one(n), dlow * lc_prod));

    auto [quo, rem] = FPoly::divmod(numer, total);
    out.poly_part = quo.to_ratfunc();

    for (std::size_t i = 0; i < mains.size(); ++i) {
        const auto& [P, m] = mains[i];
        FPoly pm = monic[i].pow(static_cast<unsigned>(m));
        auto [cof, dummy] = FPoly::divmod(total, pm);
        (void)dummy;
        // rem/total == sum_i (rem * t_i mod p_i^m) / p_i^m  where
        // s*p_i^m + t*cof == 1.
        auto [g, s, t] = FPoly::ext_gcd(pm, cof);
        if (g.degree() != 0)
            throw domain_error("partial fractions: factors not coprime");
        FPoly ri = FPoly::divmod(rem * t, pm).second;

        // multiplicity ladder: p-adic digits of ri
        MPoly lc = P.lead_coeff_in(main);
        std::vector<FPoly> digits;
        FPoly cur = ri;
        for (int e = 0; e < m; ++e) {
            auto [q2, r2] = FPoly::divmod(cur, monic[i]);
            digits.push_back(std::move(r2));
            cur = std::move(q2);
        }
        for (int e = 1; e <= m; ++e) {
            const FPoly& C = digits[static_cast<std::size_t>(m - e)];
            if (C.is_zero()) continue;
            out.terms.push_back(detail::make_pf_term(C, P, lc, e, main));
        }
    }
    return out;
}

} // namespace liouville
