#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "liouville/mpoly.hpp"

namespace liouville {

/// Exact division a / b; nullopt if b does not divide a.
inline std::optional<MPoly> exact_divide(const MPoly& a, const MPoly& b) {
    assert(a.nvars() == b.nvars());
    if (b.is_zero()) return std::nullopt;
    if (b.is_constant()) {
        MPoly q = a;
        q.scale(Rat(1) / b.constant_value());
        return q;
    }
    const int n = a.nvars();
    MPoly r = a;
    MPoly q(n);
    const Exponents& lb = b.lead_monomial();
    const Rat& cb = b.lead_coeff();
    while (!r.is_zero()) {
        const Exponents& lr = r.lead_monomial();
        Exponents m(n);
        for (int i = 0; i < n; ++i) {
            m[i] = lr[i] - lb[i];
            if (m[i] < 0) return std::nullopt;
        }
        Rat c = r.lead_coeff() / cb;
        q += MPoly::monomial(n, m, c);
        r -= b.shifted(m, c);
    }
    return q;
}

inline MPoly exact_divide_checked(const MPoly& a, const MPoly& b) {
    auto q = exact_divide(a, b);
    if (!q) throw domain_error("exact division failed");
    return *std::move(q);
}

/// Pseudo-remainder of a by b w.r.t. `var` (scaled by a power of b's leading
/// coefficient; callers re-normalize, so the exact power is irrelevant).
inline MPoly prem(const MPoly& a, const MPoly& b, int var) {
    assert(!b.is_zero());
    const int db = b.degree(var);
    MPoly lb = b.lead_coeff_in(var);
    MPoly r = a;
    while (!r.is_zero() && r.degree(var) >= db && db > 0) {
        int dr = r.degree(var);
        MPoly lr = r.lead_coeff_in(var);
        Exponents shift(static_cast<std::size_t>(a.nvars()), 0);
        shift[var] = dr - db;
        r = r * lb - b * lr.shifted(shift, Rat(1));
    }
    return r;
}

/// Exact pseudo-remainder lc(b)^(delta+1) * a rem b w.r.t. `var`, the scaling
/// the subresultant algorithm requires (delta = deg a - deg b >= 0).
inline MPoly subres_prem(const MPoly& a, const MPoly& b, int var, int delta) {
    assert(!b.is_zero() && b.degree(var) > 0);
    const int db = b.degree(var);
    MPoly lb = b.lead_coeff_in(var);
    MPoly r = a;
    int e = delta + 1;
    while (!r.is_zero() && r.degree(var) >= db) {
        int dr = r.degree(var);
        MPoly lr = r.lead_coeff_in(var);
        Exponents shift(static_cast<std::size_t>(a.nvars()), 0);
        shift[var] = dr - db;
        r = r * lb - b * lr.shifted(shift, Rat(1));
        --e;
    }
    for (; e > 0; --e) r *= lb;
    return r;
}

MPoly mgcd(const MPoly& a, const MPoly& b);

/// Scales p to have coprime integer coefficients and positive leading
/// coefficient; returns the scaled polynomial (the canonical associate).
inline MPoly prim_normalized(const MPoly& p) {
    if (p.is_zero()) return p;
    Rat u = p.rational_content();
    MPoly q = p;
    q.scale(Rat(1) / u);
    return q;
}

/// Content of p w.r.t. var: gcd of its coefficients (polynomials in the
/// remaining variables), prim-normalized.
inline MPoly content_wrt(const MPoly& p, int var) {
    MPoly g(p.nvars());
    for (int k = p.degree(var); k >= 0; --k) {
        MPoly c = p.coeff_of(var, k);
        if (c.is_zero()) continue;
        g = g.is_zero() ? prim_normalized(c) : mgcd(g, c);
        if (g.is_constant()) return MPoly::one(p.nvars());
    }
    return g;
}

inline MPoly primitive_wrt(const MPoly& p, int var) {
    if (p.is_zero()) return p;
    return exact_divide_checked(p, content_wrt(p, var));
}

namespace detail {

/// Max |numerator| over the coefficients (inputs are integer-primitive).
inline Int height_of(const MPoly& p) {
    Int h(0);
    for (const auto& [e, c] : p.terms()) {
        Int a = rat_num(c);
        if (a < 0) a = -a;
        if (a > h) h = a;
    }
    return h;
}

/// Substitutes var := xi (exact integer point).
inline MPoly eval_at_int(const MPoly& p, int var, const Int& xi) {
    MPoly out(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        Exponents ee = e;
        int k = ee[var];
        ee[var] = 0;
        Rat v = c;
        for (int i = 0; i < k; ++i) v *= Rat(xi);
        out += MPoly::monomial(p.nvars(), ee, v);
    }
    return out;
}

/// Symmetric remainder in (-xi/2, xi/2].
inline Int smod(const Int& a, const Int& xi) {
    Int r = a % xi;
    if (r < 0) r += xi;
    if (2 * r > xi) r -= xi;
    return r;
}

/// Heuristic gcd (GCDHEU): evaluate the top variable at a large integer,
/// recurse, lift the result xi-adically and verify by trial division.
/// Inputs must have integer coefficients. nullopt = heuristic failed.
inline std::optional<MPoly> gcdheu(const MPoly& a, const MPoly& b, int tries = 8) {
    const int n = a.nvars();
    if (a.is_zero()) return prim_normalized(b);
    if (b.is_zero()) return prim_normalized(a);
    if (a.is_constant() || b.is_constant()) {
        // integer gcd of the integer contents
        auto icontent = [](const MPoly& p) {
            Int g(0);
            for (const auto& [e, c] : p.terms()) g = int_gcd(g, rat_num(c));
            return g;
        };
        Int g = int_gcd(icontent(a), icontent(b));
        if (g == 0) g = 1;
        return MPoly::constant(n, Rat(g));
    }
    int var = std::max(a.top_variable(), b.top_variable());
    Int ha = height_of(a), hb = height_of(b);
    Int xi = 2 * (ha < hb ? ha : hb) + 29;
    for (int t = 0; t < tries; ++t, xi = 2 * xi + 29) {
        MPoly ae = eval_at_int(a, var, xi);
        MPoly be = eval_at_int(b, var, xi);
        if (ae.is_zero() || be.is_zero()) continue;
        auto sub = gcdheu(ae, be, tries);
        if (!sub) continue;
        // xi-adic lift of `sub` into a polynomial in var
        MPoly g(n);
        MPoly gamma = *sub;
        int power = 0;
        bool bad = false;
        while (!gamma.is_zero()) {
            MPoly digit(n);
            for (const auto& [e, c] : gamma.terms()) {
                if (rat_den(c) != 1) {
                    bad = true;
                    break;
                }
                Int d = smod(rat_num(c), xi);
                if (d != 0) {
                    Exponents ee = e;
                    ee[var] = power;
                    digit += MPoly::monomial(n, ee, Rat(d));
                }
            }
            if (bad) break;
            g += digit;
            MPoly reduced(n);
            for (const auto& [e, c] : gamma.terms()) {
                Int d = smod(rat_num(c), xi);
                Int q = (rat_num(c) - d) / xi;
                if (q != 0) reduced += MPoly::monomial(n, e, Rat(q));
            }
            gamma = std::move(reduced);
            ++power;
            if (power > 512) {
                bad = true;
                break;
            }
        }
        if (bad || g.is_zero()) continue;
        g = prim_normalized(g);
        if (exact_divide(a, g) && exact_divide(b, g)) return g;
    }
    return std::nullopt;
}

} // namespace detail

/// Multivariate gcd over the rationals: contents split off recursively, the
/// heuristic integer-evaluation gcd handles the primitive parts, and a
/// subresultant pseudo-remainder sequence (Collins) is the deterministic
/// fallback. Result is prim-normalized; gcd with a nonzero constant is 1.
inline MPoly mgcd(const MPoly& a, const MPoly& b) {
    if (a.is_zero() && b.is_zero()) return MPoly::zero(a.nvars());
    if (a.is_zero()) return prim_normalized(b);
    if (b.is_zero()) return prim_normalized(a);
    if (a.is_constant() || b.is_constant()) return MPoly::one(a.nvars());
    if (a == b) return prim_normalized(a);

    const int n = a.nvars();
    int var = std::max(a.top_variable(), b.top_variable());
    MPoly ca = content_wrt(a, var);
    MPoly cb = content_wrt(b, var);
    MPoly cc = mgcd(ca, cb);
    MPoly A = prim_normalized(exact_divide_checked(a, ca));
    MPoly B = prim_normalized(exact_divide_checked(b, cb));
    if (auto heu = detail::gcdheu(A, B)) return prim_normalized(cc * *heu);
    if (A.degree(var) < B.degree(var)) std::swap(A, B);

    MPoly g = MPoly::one(n), h = MPoly::one(n);
    while (true) {
        if (B.is_zero()) break;
        if (B.degree(var) == 0) {
            A = MPoly::one(n); // primitive parts coprime in var
            break;
        }
        int delta = A.degree(var) - B.degree(var);
        MPoly R = subres_prem(A, B, var, delta);
        MPoly divisor = g * h.pow(static_cast<unsigned>(delta));
        A = std::move(B);
        B = R.is_zero() ? std::move(R) : exact_divide_checked(R, divisor);
        if (!A.is_zero() && !B.is_zero()) {
            g = A.lead_coeff_in(var);
            // h = g^delta * h^(1-delta)
            if (delta == 0) {
                // h unchanged
            } else if (delta == 1) {
                h = g;
            } else {
                h = exact_divide_checked(g.pow(static_cast<unsigned>(delta)),
                                         h.pow(static_cast<unsigned>(delta - 1)));
            }
        }
    }
    if (!A.is_constant()) A = primitive_wrt(A, var);
    return prim_normalized(cc * A);
}

inline MPoly mlcm(const MPoly& a, const MPoly& b) {
    if (a.is_zero() || b.is_zero()) return MPoly::zero(a.nvars());
    return prim_normalized(exact_divide_checked(a * b, mgcd(a, b)));
}

// ---------------------------------------------------------------------------
// Square-free factorization

/// unit * product(factor^multiplicity) == input. Factors are square-free,
/// pairwise coprime, prim-normalized, nonconstant; several factors may share
/// a multiplicity (they stay split rather than merged into one Q_i).
struct SqfFactorization {
    Rat unit{1};
    std::vector<std::pair<MPoly, int>> factors;

    MPoly recombine(int nvars) const {
        MPoly p = MPoly::constant(nvars, unit);
        for (const auto& [f, m] : factors) p *= f.pow(static_cast<unsigned>(m));
        return p;
    }

    int max_multiplicity() const {
        int s = 0;
        for (const auto& [f, m] : factors) s = std::max(s, m);
        return s;
    }
};

namespace detail {

/// Yun's algorithm on a polynomial that is primitive w.r.t. `var`.
inline void yun(const MPoly& f, int var, std::vector<std::pair<MPoly, int>>& out) {
    MPoly fp = f.derivative(var);
    MPoly a = mgcd(f, fp);
    MPoly b = exact_divide_checked(f, a);
    MPoly c = exact_divide_checked(fp, a);
    MPoly d = c - b.derivative(var);
    for (int i = 1; b.degree(var) > 0; ++i) {
        MPoly g = mgcd(b, d);
        if (!g.is_constant()) out.emplace_back(g, i);
        b = exact_divide_checked(b, g);
        c = exact_divide_checked(d, g);
        d = c - b.derivative(var);
    }
}

} // namespace detail

/// Square-free factorization of q (Yun w.r.t. `main`, then recursively on the
/// content over the lower variables).
inline SqfFactorization squarefree_factor(const MPoly& q, int main) {
    if (q.is_zero()) throw domain_error("square-free factorization of zero");
    SqfFactorization out;
    Rat u = q.rational_content();
    out.unit = u;
    MPoly p = q;
    p.scale(Rat(1) / u);
    if (p.is_constant()) return out;

    int var = p.degree(main) > 0 ? main : p.top_variable();
    while (true) {
        MPoly cont = content_wrt(p, var);
        MPoly pp = exact_divide_checked(p, cont);
        if (pp.degree(var) > 0) detail::yun(pp, var, out.factors);
        if (cont.is_constant()) break;
        p = std::move(cont);
        var = p.top_variable();
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& x, const auto& y) {
                  if (x.second != y.second) return x.second < y.second;
                  return x.first.cmp(y.first) < 0;
              });
    return out;
}

} // namespace liouville
