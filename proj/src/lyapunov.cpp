#include "tcurve/lyapunov.hpp"

#include <stdexcept>

namespace tcurve {

Rational kappa_quadratic(const QuadraticSignature& sig)
{
    Rational s = 0;
    for (int d : sig.orders) {
        if (d == -2)
            throw std::invalid_argument("order -2 in a quadratic signature");
        s += Rational(d * (d + 4), d + 2);
    }
    return s / 24;
}

Rational kappa_abelian(const AbelianSignature& sig)
{
    Rational s = 0;
    for (int m : sig.orders)
        s += Rational(m * (m + 2), m + 1);
    return s / 12;
}

Rational lyapunov_sum(const OrbitSummary& orbit, const AbelianSignature& cover)
{
    if (!orbit.complete)
        throw std::invalid_argument("Lyapunov sum needs a complete orbit");
    return kappa_abelian(cover) + orbit.moduli_sum / Rational(BigInt(orbit.index));
}

Rational odd_correction(const QuadraticSignature& sig)
{
    Rational s = 0;
    for (int d : sig.orders)
        if (d % 2 != 0)
            s += Rational(1, d + 2);
    return s / 4;
}

LSplit split_L(const Rational& L, const QuadraticSignature& sig)
{
    Rational delta = odd_correction(sig);
    return {(L - delta) / 2, (L + delta) / 2};
}

Rational join_L(const Rational& L_plus, const QuadraticSignature& sig)
{
    return 2 * L_plus + odd_correction(sig);
}

Rational siegel_veech(const Rational& L_plus, const QuadraticSignature& sig)
{
    return L_plus - kappa_quadratic(sig);
}

Rational slope(const Rational& L_plus, const QuadraticSignature& sig)
{
    if (L_plus == 0)
        throw std::invalid_argument("slope undefined for L+ = 0");
    return 12 * siegel_veech(L_plus, sig) / L_plus;
}

Intersections teich_intersections(const Rational& chi, const QuadraticSignature& sig, const Rational& L_plus)
{
    if (chi <= 0)
        throw std::invalid_argument("chi must be positive");
    Intersections x;
    x.chi = chi;
    for (int d : sig.orders) {
        x.self.push_back(-chi / (d + 2));
        x.omega.push_back(chi / (d + 2));
    }
    x.C_lambda = chi / 2 * L_plus;
    x.C_delta = 6 * chi * siegel_veech(L_plus, sig);
    return x;
}

Rational noether_defect(const Intersections& x, const QuadraticSignature& sig)
{
    return 12 * x.C_lambda - x.C_delta - 6 * x.chi * kappa_quadratic(sig);
}

void HyperellipticComponentSpec::validate() const
{
    bool ok = g >= 1;
    switch (type) {
    case 1: ok = ok && k >= -1 && g - k >= 1; break;
    case 2: ok = ok && k >= 0 && g - k >= 1; break;
    case 3: ok = ok && k >= 0 && k <= g - 2; break;
    default: ok = false;
    }
    if (!ok)
        throw std::invalid_argument("(type, g, k) = (" + std::to_string(type) + ", " + std::to_string(g) +
                                    ", " + std::to_string(k) + ") is outside the hyperelliptic families");
}

QuadraticSignature HyperellipticComponentSpec::base_signature() const
{
    validate();
    std::vector<int> d;
    int poles = 0;
    if (type == 1) {
        d = {2 * (g - k) - 3, 2 * k + 1};
        poles = 2 * g + 2;
    } else if (type == 2) {
        d = {2 * (g - k) - 3, 2 * k};
        poles = 2 * g + 1;
    } else {
        d = {2 * (g - k) - 4, 2 * k};
        poles = 2 * g;
    }
    d.insert(d.end(), poles, -1);
    return QuadraticSignature(d);
}

QuadraticSignature HyperellipticComponentSpec::cover_signature() const
{
    validate();
    int a = 2 * (g - k) - 3;
    if (type == 1)
        return QuadraticSignature({a, a, 2 * k + 1, 2 * k + 1});
    if (type == 2)
        return QuadraticSignature({a, a, 4 * k + 2});
    return QuadraticSignature({4 * (g - k) - 6, 4 * k + 2});
}

Rational hyperelliptic_Lplus(const HyperellipticComponentSpec& s)
{
    s.validate();
    int g = s.g, k = s.k;
    if (s.type == 1)
        return Rational(g + 1, 2) - Rational(g + 1, 2 * (2 * g - 2 * k - 1) * (2 * k + 3));
    if (s.type == 2)
        return Rational(2 * g + 1, 4) - Rational(1, 4 * (2 * g - 2 * k - 1));
    return Rational(g, 2);
}

TeichCurveReport teich_report(const OrbitSummary& orbit, const QuadraticSignature& quotient)
{
    TeichCurveReport t;
    t.quotient = quotient;
    t.cover = orbit.stratum;
    t.index = orbit.index;
    t.cusps = orbit.cusp_count;
    t.chi = Rational(BigInt(orbit.index), BigInt(6));
    t.kappa_cover = kappa_abelian(orbit.stratum);
    t.kappa_quotient = kappa_quadratic(quotient);
    t.L = lyapunov_sum(orbit, orbit.stratum);
    auto split = split_L(t.L, quotient);
    t.L_plus = split.plus;
    t.L_minus = split.minus;
    t.c = siegel_veech(t.L_plus, quotient);
    if (t.L_plus > 0)
        t.slope = slope(t.L_plus, quotient);
    t.intersections = teich_intersections(t.chi, quotient, t.L_plus);
    return t;
}

}  // namespace tcurve
