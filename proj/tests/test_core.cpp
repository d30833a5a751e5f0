#include "support.hpp"

#include "tcurve/origami.hpp"
#include "tcurve/permutation.hpp"
#include "tcurve/rational.hpp"

#include <doctest.h>

#include <random>

using namespace tcurve;
using testing::surface;

TEST_SUITE("flatsurf-core") {

TEST_CASE("rationals print as p/q and parse back")
{
    CHECK(to_string(frac(6, 4)) == "3/2");
    CHECK(to_string(Rational(3)) == "3/1");
    CHECK(to_string(frac(-7, 21)) == "-1/3");
    CHECK(parse_rational("328/235") == frac(328, 235));
    CHECK(parse_rational("-2") == Rational(-2));
    CHECK(parse_rational("4/6") == frac(2, 3));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK(is_integer(frac(8, 4)));
    CHECK_FALSE(is_integer(frac(1, 2)));
}

TEST_CASE("cycle parsing fixes unmentioned symbols")
{
    Permutation p = parse_cycles("(2,3,4,5)(8,9,10,11)", 16);
    CHECK(p.size() == 16);
    std::vector<int> fixed;
    for (int i = 0; i < 16; ++i)
        if (p(i) == i)
            fixed.push_back(i + 1);
    CHECK(fixed == std::vector<int>{1, 6, 7, 12, 13, 14, 15, 16});
    CHECK(p(1) == 2);
    CHECK(p(4) == 1);

    CHECK(parse_cycles("", 3).is_identity());
    CHECK(parse_cycles("", 3).size() == 3);
    CHECK(print_cycles(parse_cycles("(1,2)(3)")) == "(1,2)");
    CHECK(print_cycles(parse_cycles("(3,1,2)")) == "(1,2,3)");
    CHECK(print_cycles(Permutation(4)) == "()");
    CHECK(max_symbol("(1,7)(2,3)") == 7);
}

TEST_CASE("malformed cycle strings are rejected")
{
    CHECK_THROWS_AS(parse_cycles("(1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_cycles("(1,1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_cycles("(1,2)(2,3)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_cycles("(0,1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_cycles("(1,5)", 3), std::invalid_argument);
}

TEST_CASE("composition acts on the left")
{
    Permutation a = parse_cycles("(1,2)", 3), b = parse_cycles("(2,3)", 3);
    // (a*b)(3) = a(b(3)) = a(2) = 1
    CHECK((a * b)(2) == 0);
    CHECK(print_cycles(a * b) == "(1,2,3)");
    CHECK((a * a.inverse()).is_identity());
    CHECK(parse_cycles("(1,2,3)(4,5)").order() == 6);
    CHECK(parse_cycles("(1,2,3)(4,5)").pow(6).is_identity());
}

TEST_CASE("commutator of small surfaces")
{
    CHECK(vertex_permutation(surface("()", "()", 1)).is_identity());
    Origami L = surface("(1,2)", "(1,3)");
    CHECK(vertex_permutation(L).cycle_lengths() == std::vector<int>{3});

    Origami o = surface(testing::row("c17"));
    int excess = 0;
    for (int len : vertex_permutation(o).cycle_lengths())
        excess += len - 1;
    CHECK(excess == 8);
    CHECK(genus_of(o) == 5);
}

TEST_CASE("strata of small surfaces")
{
    CHECK(stratum_of(surface("()", "()", 1)).label() == "H()");
    CHECK(stratum_of(surface("()", "()", 1)).genus() == 1);
    CHECK(stratum_of(surface("(1,2)", "(1,3)")).label() == "H(2)");
    CHECK(stratum_of(surface(testing::row("c23"))).orders == std::vector<int>{8, 8});
    CHECK(genus_of(surface(testing::row("c23"))) == 9);
}

TEST_CASE("genus of the dataset surfaces agrees with the commutator oracle")
{
    for (const auto& r : testing::dataset()) {
        CAPTURE(r.id);
        Origami o = surface(r);
        CHECK(is_connected(o));
        CHECK(genus_of(o) == testing::oracle_genus(testing::to_pair(o)));
    }
    // the four-pole row sits over a genus-2 base with 4 branch points
    CHECK(genus_of(surface(testing::row("c11"))) == 5);
}

TEST_CASE("horizontal cylinders")
{
    auto cyl = horizontal_cylinders(surface("()", "()", 1));
    REQUIRE(cyl.size() == 1);
    CHECK(cyl[0] == Cylinder{1, 1});

    CHECK(horizontal_cylinders(surface("(1,2)", "(1,3)")) == std::vector<Cylinder>{{2, 1}, {1, 1}});
    CHECK(horizontal_cylinders(surface("(1,2,3)", "(1,2,3)")) == std::vector<Cylinder>{{3, 1}});
    // stacked rows with no singularity between them form one taller cylinder
    CHECK(horizontal_cylinders(surface("(1,2)(3,4)", "(1,3)(2,4)")) == std::vector<Cylinder>{{2, 2}});
}

TEST_CASE("cylinder area and Euler characteristic identities on random surfaces")
{
    std::mt19937 rng(7);
    for (int t = 0; t < 100; ++t) {
        int n = 1 + t % 12;
        Origami o = testing::from_pair(oracle::random_connected(n, rng));
        int area = 0;
        for (const auto& c : horizontal_cylinders(o))
            area += c.width * c.height;
        CHECK(area == n);
        // V - E + F with E = 2n, F = n
        auto s = stratum_of(o);
        int vertices = static_cast<int>(s.orders.size()) + s.regular_points;
        CHECK(vertices - n == 2 - 2 * s.genus());
        int total = 0;
        for (int m : s.orders)
            total += m;
        CHECK(total == 2 * s.genus() - 2);
    }
}

TEST_CASE("connectivity")
{
    CHECK_FALSE(is_connected(surface("()", "()", 2)));
    CHECK(is_connected(surface("(1,2)", "()", 2)));
    CHECK(is_connected(surface("()", "(1,2)", 2)));
}

TEST_CASE("surface files")
{
    Origami o = parse_surface("# comment\nn = 4\nr = (1,2)\nu = (1,3)(2,4)\n");
    CHECK(o.size() == 4);
    CHECK(parse_surface(print_surface(o)) == o);
    CHECK_THROWS(parse_surface("r = (1,2)\n"));
    CHECK_THROWS(parse_surface("n = 2\nr = (1,3)\nu = ()\n"));
}

TEST_CASE("period lattice index")
{
    CHECK(period_lattice_index(surface("()", "()", 1)) == 1);
    CHECK(period_lattice_index(surface("(1,2)", "(1,3)")) == 1);
    // two-square torus: horizontal period 2 only
    CHECK(period_lattice_index(surface("(1,2)", "()", 2)) == 2);
}

}  // TEST_SUITE
