#pragma once

#include "tcurve/orbit.hpp"
#include "tcurve/quotient.hpp"
#include "tcurve/rational.hpp"

#include <optional>
#include <vector>

namespace tcurve {

Rational kappa_quadratic(const QuadraticSignature& sig);
Rational kappa_abelian(const AbelianSignature& sig);

// L = kappa_abelian + moduli_sum / index. Throws on an incomplete orbit.
Rational lyapunov_sum(const OrbitSummary& orbit, const AbelianSignature& cover);

// (1/4) * sum over odd d_j of 1/(d_j + 2)
Rational odd_correction(const QuadraticSignature& sig);

struct LSplit {
    Rational plus, minus;
};
LSplit split_L(const Rational& L, const QuadraticSignature& sig);
Rational join_L(const Rational& L_plus, const QuadraticSignature& sig);

Rational siegel_veech(const Rational& L_plus, const QuadraticSignature& sig);
Rational slope(const Rational& L_plus, const QuadraticSignature& sig);  // throws if L_plus = 0

struct Intersections {
    Rational chi;
    Rational C_lambda, C_delta;
    std::vector<Rational> self;   // S_j^2
    std::vector<Rational> omega;  // S_j . omega
};
Intersections teich_intersections(const Rational& chi, const QuadraticSignature& sig, const Rational& L_plus);
// 12 C.lambda - C.delta - 6 chi kappa; zero for consistent data
Rational noether_defect(const Intersections& x, const QuadraticSignature& sig);

struct HyperellipticComponentSpec {
    int type = 1;
    int g = 0;
    int k = 0;
    void validate() const;  // throws std::invalid_argument
    QuadraticSignature base_signature() const;   // genus 0 stratum
    QuadraticSignature cover_signature() const;  // genus g stratum
};
Rational hyperelliptic_Lplus(const HyperellipticComponentSpec& spec);

struct TeichCurveReport {
    QuadraticSignature quotient;
    AbelianSignature cover;
    std::uint64_t index = 0;
    std::uint64_t cusps = 0;
    Rational chi, kappa_cover, kappa_quotient;
    Rational L, L_plus, L_minus, c;
    std::optional<Rational> slope;
    Intersections intersections;
};

TeichCurveReport teich_report(const OrbitSummary& orbit, const QuadraticSignature& quotient);

}  // namespace tcurve
