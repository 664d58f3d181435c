#pragma once

#include <sstream>
#include <string>

#include "liouville/generator.hpp"

namespace liouville {

/// The worked example: T = [x, log(x)], r = 2, q1 = 1, q2 = theta1,
/// N = theta1 + 1, A = log(theta1), B = 0.
inline GeneratorDraft walkthrough_draft() {
    GeneratorDraft d;
    d.tower = Tower{};
    int th = d.tower.add_log(RatFunc::variable(1, 0));
    const int n = d.tower.size();
    MPoly theta = MPoly::variable(n, th);
    d.qs = {MPoly::one(n), theta};
    d.D = theta * theta;
    d.sqf = squarefree_factor(d.D, th);
    d.N = theta + MPoly::one(n);
    d.A = {LogPart{Rat(1), theta}};
    d.B = {};
    return d;
}

/// Renders the full derivation of the worked example (both branches).
inline std::string walkthrough_report() {
    GeneratorDraft d = walkthrough_draft();
    const Tower& t = d.tower;
    const int n = t.size();
    DraftForms forms = draft_forms(d);

    RatFunc fhat(d.N, d.D);
    RatFunc fhat_p = derivative(fhat, t);
    RatFunc a_prime =
        d.A[0].coeff * (derivative(d.A[0].arg, t) / RatFunc(d.A[0].arg.resized(n)));

    std::ostringstream os;
    os << "worked example (forced draft)\n";
    os << "  tower   : " << tower_to_text(t) << "\n";
    os << "  r = 2, q1 = " << mpoly_to_theta_string(d.qs[0], t)
       << ", q2 = " << mpoly_to_theta_string(d.qs[1], t) << "\n";
    os << "  D = SquareFreeFactor(q1^1 * q2^2) = "
       << mpoly_to_theta_string(d.D, t) << "\n";
    os << "  N = " << mpoly_to_theta_string(d.N, t) << "\n";
    os << "  A = " << rat_to_string(d.A[0].coeff) << "*log("
       << mpoly_to_theta_string(d.A[0].arg, t) << "),  B = 0\n";
    os << "  F^  = N/D = " << ratfunc_to_theta_string(fhat, t) << "\n";
    os << "  F^' = " << ratfunc_to_theta_string(fhat_p, t) << "\n";
    os << "  A'  = " << ratfunc_to_theta_string(a_prime, t) << "\n";
    os << "normal = true:\n";
    os << "  integrand = " << to_infix(forms.integrand_norm) << "\n";
    os << "  integral  = " << to_infix(forms.integral_norm) << "\n";
    os << "normal = false:\n";
    os << "  integrand = " << to_infix(forms.integrand_pf) << "\n";
    os << "  integral  = " << to_infix(forms.integral_pf) << "\n";
    return os.str();
}

} // namespace liouville
