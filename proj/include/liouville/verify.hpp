#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "liouville/generator.hpp"

namespace liouville {

enum class CheckStatus { pass, fail, conversion_error };

struct CheckOutcome {
    CheckStatus status = CheckStatus::pass;
    std::string message;
    std::optional<Expr> witness; // nonzero residue for failures

    bool passed() const { return status == CheckStatus::pass; }
};

/// Derivative round-trip: derivative(integral) - integrand must normalise to
/// zero. The integral may live in a larger tower than the integrand (extra
/// log(v_i) atoms and friends); both sides are converted over a shared,
/// auto-extended copy of the tower. Expressions outside the tower model give
/// a conversion error, which is distinct from a failed check.
inline CheckOutcome check_pair(const Expr& integrand, const Expr& integral,
                               const Tower& tower) {
    Tower t = tower;
    RatFunc g(1), f(1);
    try {
        g = expr_to_ratfunc(integral, t, /*extend=*/true);
        f = expr_to_ratfunc(integrand, t, /*extend=*/true);
        g = g.resized(t.size());
        f = f.resized(t.size());
    } catch (const conversion_error& e) {
        return CheckOutcome{CheckStatus::conversion_error, e.what(), std::nullopt};
    } catch (const domain_error& e) {
        return CheckOutcome{CheckStatus::conversion_error, e.what(), std::nullopt};
    }
    RatFunc resid = derivative(g, t) - f;
    if (resid.is_zero()) return CheckOutcome{};
    return CheckOutcome{CheckStatus::fail, "derivative(integral) != integrand",
                        ratfunc_to_expr(resid, t)};
}

inline CheckOutcome check_pair(const GeneratedPair& p) {
    return check_pair(p.integrand, p.integral, p.tower);
}

/// True iff g1 - g2 both differentiates to zero and normalises to a constant.
inline bool equal_up_to_constant(const Expr& g1, const Expr& g2, const Tower& tower) {
    Tower t = tower;
    RatFunc a = expr_to_ratfunc(g1, t, true);
    RatFunc b = expr_to_ratfunc(g2, t, true);
    RatFunc diff = a.resized(t.size()) - b.resized(t.size());
    return derivative(diff, t).is_zero() && diff.is_constant();
}

// ---------------------------------------------------------------------------
// Numeric evaluation and finite-difference spot checks

/// Evaluates an x-form expression at a point; NaN marks an invalid evaluation
/// (log of a nonpositive value, tan near a pole, overflow, ...).
inline double eval_expr(const Expr& e, double x) {
    constexpr double kBig = 1e100;
    switch (e.kind()) {
        case Expr::Kind::constant:
            return rat_to_double(e.value());
        case Expr::Kind::variable: {
            if (e.var_name() == "x") return x;
            if (SpecialRegistry::instance().has_constant(e.var_name()))
                return SpecialRegistry::instance().constant_value(e.var_name());
            return std::numeric_limits<double>::quiet_NaN();
        }
        case Expr::Kind::add: {
            double s = 0;
            for (const Expr& k : e.kids()) s += eval_expr(k, x);
            return std::abs(s) > kBig ? std::numeric_limits<double>::quiet_NaN() : s;
        }
        case Expr::Kind::mul: {
            double s = 1;
            for (const Expr& k : e.kids()) s *= eval_expr(k, x);
            return std::abs(s) > kBig ? std::numeric_limits<double>::quiet_NaN() : s;
        }
        case Expr::Kind::pow: {
            double b = eval_expr(e.base(), x);
            long long k = e.exponent();
            if (!std::isfinite(b)) return std::numeric_limits<double>::quiet_NaN();
            if (k < 0 && std::abs(b) < 1e-12)
                return std::numeric_limits<double>::quiet_NaN();
            double r = std::pow(b, static_cast<double>(k));
            return std::abs(r) > kBig ? std::numeric_limits<double>::quiet_NaN() : r;
        }
        case Expr::Kind::apply: {
            double a = eval_expr(e.arg(), x);
            if (!std::isfinite(a)) return std::numeric_limits<double>::quiet_NaN();
            const std::string& f = e.fname();
            if (f == "log")
                return a > 1e-12 ? std::log(a) : std::numeric_limits<double>::quiet_NaN();
            if (f == "exp")
                return a < 200.0 ? std::exp(a) : std::numeric_limits<double>::quiet_NaN();
            if (f == "tan")
                return std::abs(std::cos(a)) > 1e-3
                           ? std::tan(a)
                           : std::numeric_limits<double>::quiet_NaN();
            const auto& def = SpecialRegistry::instance().special(f);
            return def.eval_fn ? def.eval_fn(a)
                               : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

enum class SpotStatus { pass, fail, skipped };

struct SpotOutcome {
    SpotStatus status = SpotStatus::skipped;
    int points_checked = 0;
    std::string message;
};

/// Central finite differences of the integral vs. the integrand at random
/// points of a safe domain (found by rejection sampling on x in (0.1, 10)).
/// Advisory only; the symbolic check is the source of truth.
inline SpotOutcome numeric_spotcheck(const Expr& integrand, const Expr& integral,
                                     int points = 5, std::uint64_t seed = 12345,
                                     double rel_tol = 1e-5) {
    Rng rng(seed);
    int checked = 0;
    for (int attempt = 0; attempt < 100 && checked < points; ++attempt) {
        double x = 0.1 + 9.9 * (static_cast<double>(rng.u64() >> 11) * 0x1.0p-53);
        double h = 1e-5 * std::max(1.0, std::abs(x));
        double fp = eval_expr(integral, x + h);
        double fm = eval_expr(integral, x - h);
        double fv = eval_expr(integrand, x);
        if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(fv)) continue;
        // Guard ill-conditioned points: cancellation in (fp-fm) swamps the
        // tolerance when |F| >> h*|f|.
        double scale = std::max(1.0, std::abs(fv));
        if (std::max(std::abs(fp), std::abs(fm)) > 1e6 * scale) continue;
        if (std::abs(fv) > 1e12) continue;
        double fd = (fp - fm) / (2 * h);
        if (std::abs(fd - fv) > rel_tol * scale)
            return SpotOutcome{SpotStatus::fail, checked,
                               "finite difference mismatch at x=" + std::to_string(x)};
        ++checked;
    }
    if (checked == 0)
        return SpotOutcome{SpotStatus::skipped, 0, "no safe evaluation points found"};
    return SpotOutcome{SpotStatus::pass, checked, ""};
}

inline SpotOutcome numeric_spotcheck(const GeneratedPair& p, int points = 5,
                                     std::uint64_t seed = 12345) {
    return numeric_spotcheck(p.integrand, p.integral, points, seed);
}

} // namespace liouville
