#pragma once

#include <utility>
#include <vector>

#include "liouville/polyops.hpp"

namespace liouville {

/// Rational function num/den over the tower indeterminates, kept in canonical
/// form: gcd(num, den) == 1 and den monic under the grlex order. Equality of
/// values is syntactic equality of this form.
class RatFunc {
  public:
    explicit RatFunc(int nvars = 1)
        : num_(MPoly::zero(nvars)), den_(MPoly::one(nvars)) {}

    RatFunc(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
        assert(num_.nvars() == den_.nvars());
        normalize();
    }

    /* implicit */ RatFunc(const MPoly& p) : num_(p), den_(MPoly::one(p.nvars())) {}

    static RatFunc constant(int nvars, Rat c) {
        return RatFunc(MPoly::constant(nvars, std::move(c)));
    }
    static RatFunc variable(int nvars, int idx, int exp = 1) {
        return RatFunc(MPoly::variable(nvars, idx, exp));
    }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }
    int nvars() const { return num_.nvars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rat constant_value() const { return num_.constant_value() / den_.constant_value(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RatFunc resized(int nvars) const {
        RatFunc f(nvars);
        f.num_ = num_.resized(nvars);
        f.den_ = den_.resized(nvars);
        return f;
    }

    RatFunc operator-() const {
        RatFunc f = *this;
        f.num_ = -f.num_;
        return f;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw domain_error("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc& scale(const Rat& c) {
        num_.scale(c);
        return *this;
    }
    friend RatFunc operator*(RatFunc a, const Rat& c) { return a.scale(c); }
    friend RatFunc operator*(const Rat& c, RatFunc a) { return a.scale(c); }

    RatFunc pow(long long k) const {
        if (k == 0) return constant(nvars(), Rat(1));
        if (k < 0) {
            if (is_zero()) throw domain_error("inverse of zero rational function");
            RatFunc inv(den_, num_);
            return inv.pow(-k);
        }
        RatFunc r(num_.pow(static_cast<unsigned>(k)), den_.pow(static_cast<unsigned>(k)));
        return r;
    }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    int cmp(const RatFunc& o) const {
        int c = num_.cmp(o.num_);
        if (c != 0) return c;
        return den_.cmp(o.den_);
    }

    std::string str() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = MPoly::one(num_.nvars());
            return;
        }
        if (!den_.is_constant() && !num_.is_constant()) {
            MPoly g = mgcd(num_, den_);
            if (!g.is_constant()) {
                num_ = exact_divide_checked(num_, g);
                den_ = exact_divide_checked(den_, g);
            }
        }
        const Rat lc = den_.lead_coeff();
        if (lc != 1) {
            num_.scale(Rat(1) / lc);
            den_.scale(Rat(1) / lc);
        }
    }

    MPoly num_, den_;
};

/// Single canonical fraction from a sum of fractions (gcd-cancelled, monic
/// denominator). Idempotent.
inline RatFunc normalise(const std::vector<RatFunc>& summands) {
    if (summands.empty()) return RatFunc(1);
    RatFunc acc = summands.front();
    for (std::size_t i = 1; i < summands.size(); ++i) acc += summands[i];
    return acc;
}

} // namespace liouville
