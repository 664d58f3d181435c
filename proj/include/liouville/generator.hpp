#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/convert.hpp"
#include "liouville/partial_fractions.hpp"
#include "liouville/prefix.hpp"
#include "liouville/prng.hpp"

namespace liouville {

/// Sampling policy for the pair generator. Every knob is overridable from the
/// config file and CLI; identical (config, seed) gives bit-identical output.
struct GeneratorConfig {
    // tower policy
    std::optional<Tower> fixed_tower;
    int tower_depth_min = 1;
    int tower_depth_max = 3;
    int nesting_max = 2;            // hard cap on extension nesting depth
    double deep_nesting_prob = 0.02; // rare-tail option: one extra level
    bool enable_specials = false;   // sample atan/erf extensions
    double special_prob = 0.05;

    // denominator (Step 1): q_1..q_r, multiplicities 1..r
    int r = 2;
    int q_deg_max = 2;
    double q_const_prob = 0.25;     // chance an individual q_i collapses to 1
    double coeff_const_prob = 0.45; // coefficient of a q power is plain rational
    double coeff_extra_var_prob = 0.05; // "very rarely more than one" lower var
    int coeff_deg_max = 2;
    int const_abs_max = 10;         // numerators/denominators of sampled rationals

    // numerator (Step 3)
    double proper_prob = 0.9;

    // logs from the denominator factors (Step 4) and free logs (Step 5)
    int j_max = 3;
    int k_max = 3;
    double k_zero_prob = 0.25;
    int b_deg_max = 1;
    int b_terms_max = 3;

    bool normal = true;
    int retry_budget = 25;
};

/// c * log(arg) summand of A or B.
struct LogPart {
    Rat coeff;
    MPoly arg;
};

/// Everything Algorithm 2 samples before the closed-form step.
struct GeneratorDraft {
    Tower tower;
    std::vector<MPoly> qs;   // q_1..q_r (multiplicity = position)
    MPoly D;                 // expanded q_1^1 ... q_r^r
    SqfFactorization sqf;    // D = unit * prod Q_i^i
    MPoly N;
    std::vector<LogPart> A;  // args drawn from sqf factors
    std::vector<LogPart> B;  // args free over the whole tower

    GeneratorDraft() : D(1), N(1) {}
};

/// All four output shapes of one draft (both branches of Steps 6-10).
struct DraftForms {
    Expr integrand_norm, integral_norm;
    Expr integrand_pf, integral_pf;
};

struct GeneratedPair {
    Expr integrand, integral;
    Tower tower;
    bool normal = true;
    std::uint64_t seed = 0;
    std::string generator = "liouville";
    std::string provenance;
    TokenSeq integrand_prefix, integral_prefix;

    std::size_t integrand_tokens() const { return integrand_prefix.size(); }
    std::size_t integral_tokens() const { return integral_prefix.size(); }
};

// ---------------------------------------------------------------------------
// Draft realization (deterministic closed forms; no randomness)

namespace detail {

inline std::string draft_provenance(const GeneratorDraft& d) {
    std::ostringstream os;
    os << "T=[" << tower_to_text(d.tower) << "]";
    for (std::size_t i = 0; i < d.qs.size(); ++i)
        os << "; q" << i + 1 << "=" << mpoly_to_theta_string(d.qs[i], d.tower);
    os << "; N=" << mpoly_to_theta_string(d.N, d.tower);
    os << "; A=";
    for (std::size_t i = 0; i < d.A.size(); ++i)
        os << (i ? " + " : "") << rat_to_string(d.A[i].coeff) << "*log("
           << mpoly_to_theta_string(d.A[i].arg, d.tower) << ")";
    if (d.A.empty()) os << "0";
    os << "; B=";
    for (std::size_t i = 0; i < d.B.size(); ++i)
        os << (i ? " + " : "") << rat_to_string(d.B[i].coeff) << "*log("
           << mpoly_to_theta_string(d.B[i].arg, d.tower) << ")";
    if (d.B.empty()) os << "0";
    return os.str();
}

} // namespace detail

/// Executes Steps 6-10 of the generator on a fixed draft, producing both the
/// normalised and the partial-fraction shapes. The integral differentiates to
/// the integrand by construction in either branch.
inline DraftForms draft_forms(const GeneratorDraft& d) {
    const Tower& t = d.tower;
    const int n = t.size();
    const int main = n - 1;

    RatFunc fhat = RatFunc(d.N.resized(n), d.D.resized(n));
    RatFunc fhat_p = derivative(fhat, t);

    // A' and B' pieces: c * arg'/arg, each a single reduced fraction.
    std::vector<RatFunc> a_primes, b_primes;
    for (const LogPart& lp : d.A)
        a_primes.push_back(lp.coeff *
                           (derivative(lp.arg.resized(n), t) / RatFunc(lp.arg.resized(n))));
    for (const LogPart& lp : d.B)
        b_primes.push_back(lp.coeff *
                           (derivative(lp.arg.resized(n), t) / RatFunc(lp.arg.resized(n))));

    auto plus_terms = [](std::vector<Expr> parts) {
        std::vector<Expr> nonzero;
        for (Expr& e : parts)
            if (!e.is_constant(Rat(0))) nonzero.push_back(std::move(e));
        return canonical(Expr::add(std::move(nonzero)));
    };

    DraftForms out;

    // --- normal branch: Normalise(F^' + A') + B',  Normalise(F^ + A) + B
    {
        std::vector<RatFunc> summands{fhat_p};
        summands.insert(summands.end(), a_primes.begin(), a_primes.end());
        RatFunc integrand_core = normalise(summands);
        std::vector<Expr> parts{ratfunc_to_expr(integrand_core, t)};
        for (const RatFunc& bp : b_primes) parts.push_back(ratfunc_to_expr(bp, t));
        out.integrand_norm = plus_terms(std::move(parts));

        // Integral: fold A into one fraction with log(a_i) treated as extra
        // indeterminates of an extended tower, then unfold back to x-form.
        Tower t2 = t;
        std::vector<int> log_idx;
        for (const LogPart& lp : d.A)
            log_idx.push_back(t2.add_log(RatFunc(lp.arg.resized(t2.size()))));
        RatFunc core = fhat.resized(t2.size());
        for (std::size_t i = 0; i < d.A.size(); ++i)
            core += d.A[i].coeff * RatFunc::variable(t2.size(), log_idx[i]);
        std::vector<Expr> iparts{ratfunc_to_expr(core, t2)};
        for (const LogPart& lp : d.B)
            iparts.push_back(canonical(
                Expr::constant(lp.coeff) *
                Expr::apply("log", mpoly_to_expr(lp.arg.resized(n), t))));
        out.integral_norm = plus_terms(std::move(iparts));
    }

    // --- partial fraction branch: G = PartialFraction(N/D) + A + B,  G'
    {
        PartialFractionForm pf = partial_fractions(fhat, main);
        std::vector<Expr> iparts;
        iparts.push_back(ratfunc_to_expr(pf.poly_part, t));
        for (const PfTerm& term : pf.terms)
            iparts.push_back(ratfunc_to_expr(term.value(), t));
        for (const LogPart& lp : d.A)
            iparts.push_back(canonical(
                Expr::constant(lp.coeff) *
                Expr::apply("log", mpoly_to_expr(lp.arg.resized(n), t))));
        for (const LogPart& lp : d.B)
            iparts.push_back(canonical(
                Expr::constant(lp.coeff) *
                Expr::apply("log", mpoly_to_expr(lp.arg.resized(n), t))));
        out.integral_pf = plus_terms(std::move(iparts));

        std::vector<Expr> dparts;
        dparts.push_back(ratfunc_to_expr(derivative(pf.poly_part, t), t));
        for (const PfTerm& term : pf.terms)
            dparts.push_back(ratfunc_to_expr(derivative(term.value(), t), t));
        for (const RatFunc& ap : a_primes) dparts.push_back(ratfunc_to_expr(ap, t));
        for (const RatFunc& bp : b_primes) dparts.push_back(ratfunc_to_expr(bp, t));
        out.integrand_pf = plus_terms(std::move(dparts));
    }

    return out;
}

/// Packages one branch of a realized draft as a GeneratedPair.
inline GeneratedPair realize_draft(const GeneratorDraft& d, bool normal,
                                   std::uint64_t seed) {
    DraftForms forms = draft_forms(d);
    GeneratedPair p;
    p.integrand = normal ? forms.integrand_norm : forms.integrand_pf;
    p.integral = normal ? forms.integral_norm : forms.integral_pf;
    p.tower = d.tower;
    p.normal = normal;
    p.seed = seed;
    p.provenance = detail::draft_provenance(d);
    p.integrand_prefix = to_prefix(p.integrand);
    p.integral_prefix = to_prefix(p.integral);
    return p;
}

// ---------------------------------------------------------------------------
// Sampling

namespace detail {

inline Rat sample_rat(Rng& rng, int abs_max, bool nonzero = true) {
    long long lo = nonzero ? 1 : 0;
    long long num = rng.range(lo, abs_max);
    if (rng.chance(0.5)) num = -num;
    long long den = rng.chance(0.3) ? rng.range(2, abs_max) : 1;
    if (nonzero && num == 0) num = 1;
    return Rat(num, den);
}

/// Coefficient of one q power: usually rational or involving a single lower
/// indeterminate, very rarely two.
inline MPoly sample_coeff(const GeneratorConfig& cfg, int arity, int lower_count,
                          Rng& rng, bool allow_zero) {
    if (allow_zero && rng.chance(0.25)) return MPoly::zero(arity);
    Rat c = sample_rat(rng, cfg.const_abs_max);
    if (lower_count == 0 || rng.chance(cfg.coeff_const_prob))
        return MPoly::constant(arity, c);
    int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(lower_count)));
    int e = static_cast<int>(rng.range(1, cfg.coeff_deg_max));
    MPoly m = MPoly::variable(arity, v, e) * c;
    if (rng.chance(0.4)) m += MPoly::constant(arity, sample_rat(rng, cfg.const_abs_max));
    if (lower_count >= 2 && rng.chance(cfg.coeff_extra_var_prob)) {
        int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(lower_count)));
        if (w == v) w = (w + 1) % lower_count;
        m *= MPoly::variable(arity, w, 1);
    }
    return m;
}

inline MPoly sample_q(const GeneratorConfig& cfg, int arity, int main, Rng& rng) {
    if (rng.chance(cfg.q_const_prob)) return MPoly::one(arity);
    int deg = static_cast<int>(rng.range(1, cfg.q_deg_max));
    MPoly q = MPoly::zero(arity);
    for (int d = 0; d < deg; ++d) {
        MPoly c = sample_coeff(cfg, arity, main, rng, /*allow_zero=*/true);
        q += c * MPoly::variable(arity, main, d);
    }
    MPoly lead = sample_coeff(cfg, arity, main, rng, /*allow_zero=*/false);
    q += lead * MPoly::variable(arity, main, deg);
    return q;
}

inline MPoly sample_numerator(const GeneratorConfig& cfg, const MPoly& D, int main,
                              Rng& rng) {
    const int arity = D.nvars();
    const int deg_d = std::max(D.degree(main), 0);
    const long tot_d = std::max(D.total_degree(), 0L);
    if (deg_d == 0) return MPoly::constant(arity, sample_rat(rng, cfg.const_abs_max));

    bool proper = rng.chance(cfg.proper_prob);
    int deg_n = proper ? static_cast<int>(rng.range(0, deg_d - 1)) : deg_d;
    MPoly nn = MPoly::zero(arity);
    for (int d = 0; d < deg_n; ++d)
        nn += sample_coeff(cfg, arity, main, rng, true) *
              MPoly::variable(arity, main, d);
    nn += sample_coeff(cfg, arity, main, rng, false) *
          MPoly::variable(arity, main, deg_n);

    // Enforce totaldeg(N) <= totaldeg(D) by dropping offending monomials.
    MPoly filtered = MPoly::zero(arity);
    for (const auto& [e, c] : nn.terms()) {
        long td = 0;
        for (int v : e) td += v;
        if (td <= tot_d) filtered += MPoly::monomial(arity, e, c);
    }
    if (filtered.is_zero())
        filtered = MPoly::constant(arity, sample_rat(rng, cfg.const_abs_max));
    return filtered;
}

/// Random rational-function argument for a new extension, built from the
/// indeterminates whose nesting stays under the cap.
inline RatFunc sample_ext_argument(const GeneratorConfig& cfg, const Tower& t, Rng& rng) {
    int cap = cfg.nesting_max + (rng.chance(cfg.deep_nesting_prob) ? 1 : 0);
    std::vector<int> allowed;
    for (int i = 0; i < t.size(); ++i) {
        if (t[i].kind == ExtKind::const_sym) continue;
        if (t.nesting_of_ext(i) < cap) allowed.push_back(i);
    }
    if (allowed.empty()) allowed.push_back(0);
    int arity = t.size();
    int v = allowed[static_cast<std::size_t>(rng.below(allowed.size()))];
    MPoly var = MPoly::variable(arity, v, 1);
    MPoly poly = var;
    switch (rng.below(5)) {
        case 0: break;                                     // v
        case 1: poly = var * sample_rat(rng, 4); break;    // c*v
        case 2: poly = var + MPoly::constant(arity, sample_rat(rng, 6)); break;
        case 3: poly = var * var + MPoly::constant(arity, sample_rat(rng, 6)); break;
        case 4: {                                          // c2*v^2 + c1*v + c0
            poly = var * var * sample_rat(rng, 4) + var * sample_rat(rng, 4);
            if (rng.chance(0.5))
                poly += MPoly::constant(arity, sample_rat(rng, 6));
            break;
        }
    }
    if (poly.is_zero() || poly.is_constant()) poly = var;
    if (rng.chance(0.1)) return RatFunc(MPoly::one(arity), poly); // 1/poly
    return RatFunc(poly);
}

inline Tower sample_tower(const GeneratorConfig& cfg, Rng& rng) {
    Tower t;
    int depth = static_cast<int>(rng.range(cfg.tower_depth_min, cfg.tower_depth_max));
    for (int i = 0; i < depth; ++i) {
        bool added = false;
        for (int attempt = 0; attempt < 8 && !added; ++attempt) {
            RatFunc arg = sample_ext_argument(cfg, t, rng);
            std::string kind;
            if (cfg.enable_specials && rng.chance(cfg.special_prob)) {
                kind = rng.chance(0.5) ? "atan" : "erf";
            } else {
                std::uint64_t pickv = rng.below(100);
                kind = pickv < 40 ? "log" : pickv < 75 ? "exp" : "tan";
            }
            ExtKind ek = kind == "log"   ? ExtKind::log_k
                         : kind == "exp" ? ExtKind::exp_k
                         : kind == "tan" ? ExtKind::tan_k
                                         : ExtKind::special;
            if (t.find(ek, kind, arg)) continue; // duplicate, resample
            t.add_extension(kind, arg);
            added = true;
        }
        if (!added) break;
    }
    return t;
}

inline MPoly sample_b_poly(const GeneratorConfig& cfg, const GeneratorDraft& d,
                           Rng& rng) {
    const int arity = d.tower.size();
    for (int attempt = 0; attempt < 12; ++attempt) {
        int nterms = static_cast<int>(rng.range(1, cfg.b_terms_max));
        MPoly b = MPoly::zero(arity);
        for (int i = 0; i < nterms; ++i) {
            Exponents e(static_cast<std::size_t>(arity), 0);
            long budget = cfg.b_deg_max;
            for (int v = 0; v < arity && budget > 0; ++v) {
                if (!rng.chance(0.35)) continue;
                int ev = static_cast<int>(rng.range(1, std::min<long>(budget, 2)));
                e[static_cast<std::size_t>(v)] = ev;
                budget -= ev;
            }
            b += MPoly::monomial(arity, e, sample_rat(rng, cfg.const_abs_max));
        }
        b += MPoly::constant(arity, sample_rat(rng, cfg.const_abs_max, false));
        if (b.is_zero() || b.is_constant()) continue;
        MPoly bp = prim_normalized(b);
        bool clash = false;
        for (const auto& [q, m] : d.sqf.factors)
            if (bp == q) clash = true; // must stay distinct from the Q_i
        for (const LogPart& prev : d.B)
            if (bp == prim_normalized(prev.arg)) clash = true;
        if (!clash) return b;
    }
    // fall back to something guaranteed fresh: x + distinct constant
    MPoly x = MPoly::variable(arity, 0, 1);
    return x + MPoly::constant(arity, Rat(997) + Rat(static_cast<long long>(rng.below(97))));
}

inline GeneratorDraft sample_draft(const GeneratorConfig& cfg, Rng& rng) {
    GeneratorDraft d;
    d.tower = cfg.fixed_tower ? *cfg.fixed_tower : sample_tower(cfg, rng);
    const int arity = d.tower.size();
    const int main = arity - 1;

    // Step 1: q_1..q_r; the top-multiplicity one stays nonconstant so the
    // factorization keeps s >= r.
    d.D = MPoly::one(arity);
    for (int i = 1; i <= cfg.r; ++i) {
        MPoly q = sample_q(cfg, arity, main, rng);
        if (i == cfg.r) {
            int guard = 0;
            while (q.is_constant() && guard++ < 16) q = sample_q(cfg, arity, main, rng);
            if (q.is_constant())
                q = MPoly::variable(arity, main, 1) + MPoly::one(arity);
        }
        d.qs.push_back(q);
        d.D *= q.pow(static_cast<unsigned>(i));
    }

    // Step 2: square-free factorization of the assembled denominator.
    d.sqf = squarefree_factor(d.D, main);

    // Step 3: numerator.
    d.N = sample_numerator(cfg, d.D, main, rng);

    // Step 4: A-logs from the factors of D (distinct factors, no replacement).
    const auto& facs = d.sqf.factors;
    int s = static_cast<int>(facs.size());
    int j = static_cast<int>(rng.range(0, std::min(s, cfg.j_max)));
    std::vector<std::size_t> order(facs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    for (int i = 0; i < j; ++i)
        d.A.push_back(LogPart{sample_rat(rng, cfg.const_abs_max),
                              facs[order[static_cast<std::size_t>(i)]].first});

    // Step 5: B-logs over the whole tower.
    int k = rng.chance(cfg.k_zero_prob) ? 0 : static_cast<int>(rng.range(1, cfg.k_max));
    for (int i = 0; i < k; ++i)
        d.B.push_back(LogPart{sample_rat(rng, cfg.const_abs_max), sample_b_poly(cfg, d, rng)});

    return d;
}

} // namespace detail

/// Algorithm 2: samples a draft and realizes the configured branch; resamples
/// degenerate drafts (zero integrand) up to the retry budget.
inline GeneratedPair generate_pair(const GeneratorConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt <= cfg.retry_budget; ++attempt) {
        GeneratorDraft d = detail::sample_draft(cfg, rng);
        GeneratedPair p = realize_draft(d, cfg.normal, seed);
        if (p.integrand.is_constant(Rat(0))) continue;
        return p;
    }
    throw generation_error("no nondegenerate draft within the retry budget");
}

// ---------------------------------------------------------------------------
// BWD baseline: differentiate a random expression

struct BwdConfig {
    int min_internal = 3;
    int max_internal = 9;
    int max_depth = 6;
    int const_abs_max = 5;
};

/// d/dx on plain expression trees (used by the BWD baseline only).
inline Expr diff_expr(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::constant:
            return Expr::constant(0);
        case Expr::Kind::variable:
            return e.var_name() == "x" ? Expr::constant(1) : Expr::constant(0);
        case Expr::Kind::add: {
            std::vector<Expr> kids;
            for (const Expr& k : e.kids()) kids.push_back(diff_expr(k));
            return Expr::add(std::move(kids));
        }
        case Expr::Kind::mul: {
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < e.kids().size(); ++i) {
                std::vector<Expr> fs;
                for (std::size_t l = 0; l < e.kids().size(); ++l)
                    fs.push_back(l == i ? diff_expr(e.kids()[l]) : e.kids()[l]);
                terms.push_back(Expr::mul(std::move(fs)));
            }
            return Expr::add(std::move(terms));
        }
        case Expr::Kind::pow:
            return Expr::mul({Expr::constant(e.exponent()),
                              Expr::pow(e.base(), e.exponent() - 1), diff_expr(e.base())});
        case Expr::Kind::apply: {
            Expr da = diff_expr(e.arg());
            const std::string& f = e.fname();
            if (f == "log") return expr_div(da, e.arg());
            if (f == "exp") return Expr::mul({da, e});
            if (f == "tan")
                return Expr::mul({da, Expr::add({Expr::constant(1), Expr::pow(e, 2)})});
            if (f == "atan")
                return expr_div(da, Expr::add({Expr::constant(1), Expr::pow(e.arg(), 2)}));
            if (f == "erf")
                return Expr::mul({da, Expr::constant(2),
                                  Expr::pow(Expr::variable("sqrt_pi"), -1),
                                  Expr::apply("exp", -Expr::pow(e.arg(), 2))});
            throw domain_error("no derivative rule for '" + f + "'");
        }
    }
    throw domain_error("internal: bad expression node");
}

namespace detail {

inline bool contains_x(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::constant:
            return false;
        case Expr::Kind::variable:
            return e.var_name() == "x";
        default:
            for (const Expr& k : e.kids())
                if (contains_x(k)) return true;
            return false;
    }
}

inline Expr sample_bwd_tree(const BwdConfig& cfg, Rng& rng, int budget, int depth) {
    if (budget <= 0 || depth >= cfg.max_depth) {
        if (rng.chance(0.6)) return Expr::variable("x");
        Rat c(rng.range(1, cfg.const_abs_max));
        if (rng.chance(0.4)) c = -c;
        return Expr::constant(c);
    }
    std::uint64_t pick = rng.below(100);
    if (pick < 28) { // add
        return Expr::add({sample_bwd_tree(cfg, rng, budget / 2, depth + 1),
                          sample_bwd_tree(cfg, rng, (budget - 1) / 2, depth + 1)});
    }
    if (pick < 52) { // mul
        return Expr::mul({sample_bwd_tree(cfg, rng, budget / 2, depth + 1),
                          sample_bwd_tree(cfg, rng, (budget - 1) / 2, depth + 1)});
    }
    if (pick < 64) { // div
        Expr a = sample_bwd_tree(cfg, rng, budget / 2, depth + 1);
        Expr b = sample_bwd_tree(cfg, rng, (budget - 1) / 2, depth + 1);
        if (b.is_constant() && b.value() == 0) b = Expr::variable("x");
        return expr_div(a, b);
    }
    if (pick < 78) { // pow with small integer exponent
        static const long long exps[] = {2, 3, -1, -2};
        Expr b = sample_bwd_tree(cfg, rng, budget - 1, depth + 1);
        long long k = exps[rng.below(4)];
        if (b.is_constant() && b.value() == 0 && k < 0) b = Expr::variable("x");
        return Expr::pow(b, k);
    }
    // unary function; argument must involve x so towers stay nondegenerate
    Expr a = sample_bwd_tree(cfg, rng, budget - 1, depth + 1);
    if (!contains_x(a)) a = Expr::add({a, Expr::variable("x")});
    std::uint64_t f = rng.below(100);
    const char* name = f < 45 ? "log" : f < 80 ? "exp" : "tan";
    return Expr::apply(name, a);
}

} // namespace detail

/// BWD method: sample a random expression f, return (f', f).
inline GeneratedPair bwd_baseline(const BwdConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        int budget = static_cast<int>(rng.range(cfg.min_internal, cfg.max_internal));
        Expr f;
        try {
            f = canonical(detail::sample_bwd_tree(cfg, rng, budget, 0));
        } catch (const domain_error&) {
            continue; // folded into 0^-k somewhere; resample
        }
        if (!detail::contains_x(f)) continue;
        Expr fp;
        try {
            fp = canonical(diff_expr(f));
        } catch (const domain_error&) {
            continue;
        }
        if (fp.is_constant(Rat(0))) continue;
        GeneratedPair p;
        p.integrand = fp;
        p.integral = f;
        p.tower = Tower{};
        p.normal = false;
        p.seed = seed;
        p.generator = "bwd";
        p.provenance = "bwd tree";
        p.integrand_prefix = to_prefix(p.integrand);
        p.integral_prefix = to_prefix(p.integral);
        return p;
    }
    // guaranteed fallback
    GeneratedPair p;
    p.integral = Expr::apply("log", Expr::variable("x"));
    p.integrand = canonical(diff_expr(p.integral));
    p.tower = Tower{};
    p.normal = false;
    p.seed = seed;
    p.generator = "bwd";
    p.provenance = "bwd tree (fallback)";
    p.integrand_prefix = to_prefix(p.integrand);
    p.integral_prefix = to_prefix(p.integral);
    return p;
}

} // namespace liouville
