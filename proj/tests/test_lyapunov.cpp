#include "support.hpp"

#include "tcurve/lyapunov.hpp"

#include <doctest.h>

#include <optional>
#include <random>

using namespace tcurve;
using testing::surface;

namespace {

QuadraticSignature sig(std::vector<int> d) { return QuadraticSignature(std::move(d)); }

// (1/24) sum d(d+4)/(d+2), evaluated term by term here
Rational kappa_ref(const std::vector<int>& d)
{
    Rational k = 0;
    for (int x : d)
        k += Rational(x * (x + 4), 24 * (x + 2));
    return k;
}

// search for a surface in a given abelian stratum with the requested spin parity
std::optional<Origami> find_surface(int n, const std::string& stratum, Parity parity, std::optional<bool> want_hyp_quotient,
                                    unsigned seed)
{
    std::mt19937 rng(seed);
    for (int t = 0; t < 200000; ++t) {
        Origami o = testing::from_pair(oracle::random_connected(n, rng));
        if (stratum_of(o).label() != stratum || spin_parity(o) != parity)
            continue;
        bool hyp = false;
        for (const auto& q : quotient_structures(o))
            hyp |= q.base_genus == 0;
        if (!want_hyp_quotient || hyp == *want_hyp_quotient)
            return o;
    }
    return std::nullopt;
}

}  // namespace

TEST_SUITE("lyapunov-invariants") {

TEST_CASE("kappa")
{
    CHECK(kappa_quadratic(sig({6, 3, -1})) == frac(29, 80));
    CHECK(kappa_quadratic(sig({6, 3, -1})) == kappa_ref({6, 3, -1}));
    CHECK(kappa_quadratic(sig({2, 2, 2, 2})) == frac(1, 2));
    CHECK(kappa_quadratic(sig({0, 0, 0, 0, -1, -1, -1, -1})) == kappa_quadratic(sig({-1, -1, -1, -1})));
    CHECK(kappa_abelian(AbelianSignature{{2}, 0}) == frac(2, 9));
    CHECK(kappa_abelian(AbelianSignature{{4, 2}, 0}) == frac(1, 12) * (frac(24, 5) + frac(8, 3)));
    CHECK(kappa_abelian(AbelianSignature{{}, 1}) == 0);
}

TEST_CASE("L of the L-shaped surface")
{
    OrbitSummary orb = enumerate_orbit(surface("(1,2)", "(1,3)"));
    CHECK(lyapunov_sum(orb, orb.stratum) == frac(4, 3));
}

TEST_CASE("L from the brute-force oracle on dataset rows")
{
    for (const char* id : {"c17", "c18", "c04", "c11", "c12", "c22"}) {
        CAPTURE(id);
        oracle::Pair p = testing::to_pair(surface(testing::row(id)));
        auto ref = oracle::orbit(p);
        Rational L_ref = oracle::kappa_from_commutator(p) + ref.moduli_sum / ref.members.size();
        OrbitSummary orb = enumerate_orbit(surface(testing::row(id)));
        CHECK(lyapunov_sum(orb, orb.stratum) == L_ref);
        CHECK(to_string(L_ref) == to_string(parse_rational(testing::row(id).L)));
    }
}

TEST_CASE("incomplete orbits have no L")
{
    OrbitOptions o;
    o.limits.max_size = 5;
    OrbitSummary orb = enumerate_orbit(surface(testing::row("c17")), o);
    CHECK_FALSE(orb.complete);
    CHECK_THROWS(lyapunov_sum(orb, orb.stratum));
}

TEST_CASE("splitting L")
{
    CHECK(split_L(3, sig({3, 3, 3, -1})).plus == frac(13, 10));
    CHECK(split_L(frac(7, 2), sig({6, 6})).plus == frac(7, 4));
    CHECK(split_L(frac(6388, 2457), sig({11, -1, -1, -1})).plus == frac(173, 189));
    auto s = split_L(frac(6388, 2457), sig({11, -1, -1, -1}));
    CHECK(s.plus + s.minus == frac(6388, 2457));
    CHECK(join_L(s.plus, sig({11, -1, -1, -1})) == frac(6388, 2457));
    CHECK(odd_correction(sig({6, 6})) == 0);
    CHECK(odd_correction(sig({1, -1})) == frac(1, 4) * (frac(1, 3) + 1));
}

TEST_CASE("Siegel-Veech constant and slope")
{
    CHECK(siegel_veech(frac(6, 7), sig({5, -1})) == frac(5, 7));
    CHECK(slope(frac(6, 7), sig({5, -1})) == 10);
    CHECK(siegel_veech(frac(7, 5), sig({6, 3, -1})) == frac(83, 80));
    CHECK(kappa_quadratic(sig({0})) == 0);
    CHECK(slope(frac(1, 3), sig({0})) == 12);
    CHECK_THROWS(slope(0, sig({5, -1})));
}

TEST_CASE("intersection numbers")
{
    auto x = teich_intersections(1, sig({5, -1}), frac(6, 7));
    CHECK(x.C_lambda == frac(3, 7));
    CHECK(x.C_delta == frac(30, 7));
    auto y = teich_intersections(8, sig({6, 3, -1}), frac(7, 5));
    CHECK(y.self[0] == -1);
    CHECK(noether_defect(x, sig({5, -1})) == 0);
    CHECK(noether_defect(y, sig({6, 3, -1})) == 0);
}

TEST_CASE("Noether identity on every report from random surfaces")
{
    std::mt19937 rng(8);
    int reports = 0;
    for (int t = 0; t < 60; ++t) {
        Origami o = testing::from_pair(oracle::random_connected(2 + t % 8, rng));
        OrbitSummary orb = enumerate_orbit(o);
        for (const auto& q : quotient_structures(o)) {
            TeichCurveReport r = teich_report(orb, q.signature);
            CHECK(noether_defect(r.intersections, q.signature) == 0);
            CHECK(12 * r.intersections.C_lambda - r.intersections.C_delta == 6 * r.chi * r.kappa_quotient);
            CHECK(r.L_plus + r.L_minus == r.L);
            ++reports;
        }
    }
    CHECK(reports > 0);
}

TEST_CASE("reports on dataset rows")
{
    Origami o = surface(testing::row("c17"));
    OrbitSummary orb = enumerate_orbit(o);
    TeichCurveReport r = teich_report(orb, sig({2, 2, 2, 2}));
    CHECK(r.index == 24);
    CHECK(r.L == frac(5, 2));
    CHECK(r.L_plus == frac(5, 4));
    CHECK(r.chi == frac(orb.index, 6));
    CHECK(noether_defect(r.intersections, r.quotient) == 0);
}

TEST_CASE("hyperelliptic closed forms")
{
    CHECK(hyperelliptic_Lplus({3, 4, 1}) == 2);
    CHECK(hyperelliptic_Lplus({2, 4, 1}) == frac(11, 5));
    CHECK(hyperelliptic_Lplus({1, 4, 1}) == frac(12, 5));
    CHECK(HyperellipticComponentSpec{1, 4, 1}.cover_signature().label() == "Q(3,3,3,3)");
    CHECK(HyperellipticComponentSpec{3, 4, 1}.cover_signature().label() == "Q(6,6)");
    CHECK(HyperellipticComponentSpec{2, 4, 1}.cover_signature().label() == "Q(6,3,3)");
    CHECK_THROWS_AS(HyperellipticComponentSpec({4, 4, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(HyperellipticComponentSpec({3, 4, 3}).validate(), std::invalid_argument);
}

TEST_CASE("spin components of H(4) and H(4,2)")
{
    // H(4): the hyperelliptic component is even, the other one is odd
    auto hyp = find_surface(5, "H(4)", Parity::Even, true, 1);
    auto odd = find_surface(5, "H(4)", Parity::Odd, false, 2);
    REQUIRE(hyp);
    REQUIRE(odd);
    CHECK(stratum_of(*hyp).genus() == 3);

    // H(4,2) at 8 squares: the two spin components give different L
    auto o8 = find_surface(8, "H(4,2)", Parity::Odd, std::nullopt, 3);
    auto e8 = find_surface(8, "H(4,2)", Parity::Even, std::nullopt, 4);
    REQUIRE(o8);
    REQUIRE(e8);
    OrbitSummary a = enumerate_orbit(*o8), b = enumerate_orbit(*e8);
    CHECK(lyapunov_sum(a, a.stratum) == frac(29, 15));
    CHECK(lyapunov_sum(b, b.stratum) == frac(32, 15));
}

}  // TEST_SUITE
