#pragma once

#include <utility>
#include <vector>

#include "liouville/ratfunc.hpp"

namespace liouville {

/// Dense univariate polynomial in a designated main variable, with
/// coefficients that are rational functions of the remaining indeterminates
/// (the "recursive field" view used by division and partial fractions).
class FPoly {
  public:
    FPoly(int nvars, int var) : nvars_(nvars), var_(var) {}

    static FPoly from_mpoly(const MPoly& p, int var) {
        FPoly f(p.nvars(), var);
        for (MPoly& c : p.coeffs_in(var)) f.c_.emplace_back(std::move(c));
        f.trim();
        return f;
    }

    static FPoly zero(int nvars, int var) { return FPoly(nvars, var); }

    static FPoly constant(int nvars, int var, RatFunc c) {
        FPoly f(nvars, var);
        if (!c.is_zero()) f.c_.push_back(std::move(c));
        f.trim();
        return f;
    }

    int nvars() const { return nvars_; }
    int var() const { return var_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    const RatFunc& coeff(std::size_t i) const { return c_[i]; }
    const RatFunc& lead() const { return c_.back(); }

    /// Value as a rational function (recombines coefficients with var powers).
    RatFunc to_ratfunc() const {
        RatFunc acc(nvars_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            RatFunc v = RatFunc::variable(nvars_, var_, static_cast<int>(i));
            acc += c_[i] * v;
        }
        return acc;
    }

    friend FPoly operator+(const FPoly& a, const FPoly& b) {
        FPoly r(a.nvars_, a.var_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), RatFunc(a.nvars_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
        r.trim();
        return r;
    }

    friend FPoly operator-(const FPoly& a, const FPoly& b) {
        FPoly r(a.nvars_, a.var_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), RatFunc(a.nvars_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] -= b.c_[i];
        r.trim();
        return r;
    }

    friend FPoly operator*(const FPoly& a, const FPoly& b) {
        FPoly r(a.nvars_, a.var_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, RatFunc(a.nvars_));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }

    FPoly scaled(const RatFunc& s) const {
        FPoly r(nvars_, var_);
        if (s.is_zero()) return r;
        r.c_ = c_;
        for (RatFunc& x : r.c_) x *= s;
        return r;
    }

    FPoly pow(unsigned k) const {
        FPoly acc = constant(nvars_, var_, RatFunc::constant(nvars_, Rat(1)));
        FPoly base = *this;
        while (k) {
            if (k & 1) acc = acc * base;
            if (k >>= 1) base = base * base;
        }
        return acc;
    }

    FPoly monic() const {
        assert(!is_zero());
        return scaled(RatFunc::constant(nvars_, Rat(1)) / lead());
    }

    /// Field division: a = q*b + r with deg r < deg b.
    static std::pair<FPoly, FPoly> divmod(const FPoly& a, const FPoly& b) {
        if (b.is_zero()) throw domain_error("polynomial division by zero");
        FPoly q(a.nvars_, a.var_);
        FPoly r = a;
        const int db = b.degree();
        if (a.degree() >= db) q.c_.assign(static_cast<std::size_t>(a.degree() - db) + 1,
                                          RatFunc(a.nvars_));
        while (!r.is_zero() && r.degree() >= db) {
            std::size_t shift = static_cast<std::size_t>(r.degree() - db);
            RatFunc f = r.lead() / b.lead();
            q.c_[shift] += f;
            // r -= f * x^shift * b
            for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[shift + i] -= f * b.c_[i];
            r.trim();
        }
        q.trim();
        return {std::move(q), std::move(r)};
    }

    /// Extended Euclid: returns (g, s, t) with s*a + t*b == g, g monic.
    static std::tuple<FPoly, FPoly, FPoly> ext_gcd(const FPoly& a, const FPoly& b) {
        const int n = a.nvars_, v = a.var_;
        RatFunc one_c = RatFunc::constant(n, Rat(1));
        FPoly r0 = a, r1 = b;
        FPoly s0 = constant(n, v, one_c), s1 = zero(n, v);
        FPoly t0 = zero(n, v), t1 = constant(n, v, one_c);
        while (!r1.is_zero()) {
            auto [q, r] = divmod(r0, r1);
            FPoly s2 = s0 - q * s1;
            FPoly t2 = t0 - q * t1;
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (r0.is_zero()) return {r0, s0, t0};
        RatFunc inv = one_c / r0.lead();
        return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
    }

    bool operator==(const FPoly& o) const {
        return var_ == o.var_ && c_ == o.c_;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    int nvars_;
    int var_;
    std::vector<RatFunc> c_; // c_[i] multiplies var^i; invariant: no var dependence
};

} // namespace liouville
