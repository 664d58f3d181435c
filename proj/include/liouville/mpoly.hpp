#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/rational.hpp"

namespace liouville {

/// Exponent vector; arity = number of tower indeterminates theta_0..theta_n.
using Exponents = std::vector<int>;

/// Graded lexicographic order with the highest indeterminate most significant,
/// descending (so map iteration starts at the leading term).
struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const {
        assert(a.size() == b.size());
        long ta = std::accumulate(a.begin(), a.end(), 0L);
        long tb = std::accumulate(b.begin(), b.end(), 0L);
        if (ta != tb) return ta > tb;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] > b[i];
        return false;
    }
};

/// Sparse multivariate polynomial over exact rationals. No zero coefficients
/// are stored; the zero polynomial is the empty map.
class MPoly {
  public:
    using Terms = std::map<Exponents, Rat, GrlexGreater>;

    explicit MPoly(int nvars = 1) : nvars_(nvars) { assert(nvars >= 1); }

    static MPoly constant(int nvars, Rat c) {
        MPoly p(nvars);
        if (c != 0) p.t_.emplace(Exponents(nvars, 0), std::move(c));
        return p;
    }
    static MPoly zero(int nvars) { return MPoly(nvars); }
    static MPoly one(int nvars) { return constant(nvars, Rat(1)); }

    static MPoly variable(int nvars, int idx, int exp = 1) {
        assert(idx >= 0 && idx < nvars && exp >= 0);
        MPoly p(nvars);
        if (exp == 0) return one(nvars);
        Exponents e(nvars, 0);
        e[idx] = exp;
        p.t_.emplace(std::move(e), Rat(1));
        return p;
    }

    static MPoly monomial(int nvars, Exponents e, Rat c) {
        assert(static_cast<int>(e.size()) == nvars);
        MPoly p(nvars);
        if (c != 0) p.t_.emplace(std::move(e), std::move(c));
        return p;
    }

    int nvars() const { return nvars_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    bool is_constant() const {
        if (t_.empty()) return true;
        if (t_.size() > 1) return false;
        const Exponents& e = t_.begin()->first;
        return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    }

    Rat constant_value() const {
        if (t_.empty()) return Rat(0);
        assert(is_constant());
        return t_.begin()->second;
    }

    /// Widens the exponent vectors to a larger arity (new variables appended).
    MPoly resized(int nvars) const {
        assert(nvars >= nvars_);
        if (nvars == nvars_) return *this;
        MPoly p(nvars);
        for (const auto& [e, c] : t_) {
            Exponents ee = e;
            ee.resize(nvars, 0);
            p.t_.emplace(std::move(ee), c);
        }
        return p;
    }

    int degree(int var) const {
        int d = -1;
        for (const auto& [e, c] : t_) d = std::max(d, e[var]);
        return d; // -1 for the zero polynomial
    }

    long total_degree() const {
        long d = -1;
        for (const auto& [e, c] : t_)
            d = std::max(d, std::accumulate(e.begin(), e.end(), 0L));
        return d;
    }

    /// Largest index of a variable with positive degree, or -1 if constant.
    int top_variable() const {
        int top = -1;
        for (const auto& [e, c] : t_)
            for (int i = nvars_; i-- > 0;) {
                if (e[i] > 0) {
                    top = std::max(top, i);
                    break;
                }
            }
        return top;
    }

    const Exponents& lead_monomial() const {
        assert(!t_.empty());
        return t_.begin()->first;
    }
    const Rat& lead_coeff() const {
        assert(!t_.empty());
        return t_.begin()->second;
    }

    /// Coefficient of var^k, with var's exponent zeroed out.
    MPoly coeff_of(int var, int k) const {
        MPoly p(nvars_);
        for (const auto& [e, c] : t_) {
            if (e[var] != k) continue;
            Exponents ee = e;
            ee[var] = 0;
            p.t_.emplace(std::move(ee), c);
        }
        return p;
    }

    /// Dense univariate view in `var`: index i holds the coefficient of var^i.
    std::vector<MPoly> coeffs_in(int var) const {
        int d = degree(var);
        std::vector<MPoly> out(static_cast<std::size_t>(std::max(d, 0)) + 1,
                               MPoly(nvars_));
        for (const auto& [e, c] : t_) {
            Exponents ee = e;
            int k = ee[var];
            ee[var] = 0;
            out[static_cast<std::size_t>(k)].t_[std::move(ee)] = c;
        }
        return out;
    }

    /// Leading coefficient w.r.t. a single variable (polynomial in the rest).
    MPoly lead_coeff_in(int var) const { return coeff_of(var, std::max(degree(var), 0)); }

    MPoly derivative(int var) const {
        MPoly p(nvars_);
        for (const auto& [e, c] : t_) {
            if (e[var] == 0) continue;
            Exponents ee = e;
            ee[var] -= 1;
            p.t_[std::move(ee)] = c * e[var];
        }
        return p;
    }

    MPoly operator-() const {
        MPoly p(nvars_);
        for (const auto& [e, c] : t_) p.t_.emplace(e, -c);
        return p;
    }

    MPoly& operator+=(const MPoly& o) {
        assert(nvars_ == o.nvars_);
        for (const auto& [e, c] : o.t_) {
            auto it = t_.find(e);
            if (it == t_.end()) {
                t_.emplace(e, c);
            } else {
                it->second += c;
                if (it->second == 0) t_.erase(it);
            }
        }
        return *this;
    }

    MPoly& operator-=(const MPoly& o) {
        assert(nvars_ == o.nvars_);
        for (const auto& [e, c] : o.t_) {
            auto it = t_.find(e);
            if (it == t_.end()) {
                t_.emplace(e, -c);
            } else {
                it->second -= c;
                if (it->second == 0) t_.erase(it);
            }
        }
        return *this;
    }

    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        assert(a.nvars_ == b.nvars_);
        MPoly p(a.nvars_);
        for (const auto& [ea, ca] : a.t_) {
            for (const auto& [eb, cb] : b.t_) {
                Exponents e(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
                auto it = p.t_.find(e);
                if (it == p.t_.end()) {
                    p.t_.emplace(std::move(e), ca * cb);
                } else {
                    it->second += ca * cb;
                    if (it->second == 0) p.t_.erase(it);
                }
            }
        }
        return p;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    MPoly& scale(const Rat& c) {
        if (c == 0) {
            t_.clear();
            return *this;
        }
        for (auto& [e, v] : t_) v *= c;
        return *this;
    }
    friend MPoly operator*(MPoly a, const Rat& c) { return a.scale(c); }
    friend MPoly operator*(const Rat& c, MPoly a) { return a.scale(c); }

    MPoly pow(unsigned k) const {
        MPoly acc = one(nvars_);
        MPoly base = *this;
        while (k) {
            if (k & 1) acc *= base;
            if (k >>= 1) base *= base;
        }
        return acc;
    }

    /// Multiplies by a single monomial (cheap shift).
    MPoly shifted(const Exponents& m, const Rat& c) const {
        MPoly p(nvars_);
        if (c == 0) return p;
        for (const auto& [e, v] : t_) {
            Exponents ee(nvars_);
            for (int i = 0; i < nvars_; ++i) ee[i] = e[i] + m[i];
            p.t_.emplace(std::move(ee), v * c);
        }
        return p;
    }

    bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && t_ == o.t_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    /// Deterministic total order (for canonical sorting of factor lists).
    int cmp(const MPoly& o) const {
        if (nvars_ != o.nvars_) return nvars_ < o.nvars_ ? -1 : 1;
        auto a = t_.begin();
        auto b = o.t_.begin();
        GrlexGreater gt;
        for (; a != t_.end() && b != o.t_.end(); ++a, ++b) {
            if (a->first != b->first) return gt(a->first, b->first) ? 1 : -1;
            if (a->second != b->second) return a->second < b->second ? -1 : 1;
        }
        if (a != t_.end()) return 1;
        if (b != o.t_.end()) return -1;
        return 0;
    }

    /// The positive rational u with p == u * q, q having coprime integer
    /// coefficients; sign chosen so q's leading coefficient is positive.
    Rat rational_content() const {
        if (t_.empty()) return Rat(0);
        Int g(0), l(1);
        for (const auto& [e, c] : t_) {
            g = int_gcd(g, rat_num(c));
            l = int_lcm(l, rat_den(c));
        }
        Rat u(g, l);
        if (lead_coeff() < 0) u = -u;
        return u;
    }

    double eval(const std::vector<double>& x) const {
        double acc = 0.0;
        for (const auto& [e, c] : t_) {
            double m = rat_to_double(c);
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < e[i]; ++k) m *= x[static_cast<std::size_t>(i)];
            acc += m;
        }
        return acc;
    }

    /// Debug form like "3*v1^2*v0 - 1/2"; real printing goes through Expr.
    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : t_) {
            if (!first) os << (c > 0 ? " + " : " - ");
            Rat a = (!first && c < 0) ? Rat(-c) : c;
            bool any = false;
            std::ostringstream vars;
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                if (any) vars << "*";
                vars << "v" << i;
                if (e[i] > 1) vars << "^" << e[i];
                any = true;
            }
            if (!any || a != 1) {
                os << rat_to_string(a);
                if (any) os << "*";
            }
            os << vars.str();
            first = false;
        }
        return os.str();
    }

  private:
    int nvars_;
    Terms t_;
};

} // namespace liouville
