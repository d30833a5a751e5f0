#include "support.hpp"

#include "tcurve/canonical.hpp"
#include "tcurve/orbit.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace tcurve;
using testing::surface;
namespace fs = std::filesystem;

namespace {

Origami random_relabel(const Origami& o, std::mt19937& rng)
{
    return relabel(o, Permutation(oracle::random_perm(o.size(), rng)));
}

Origami apply(const Origami& o, const std::string& word)
{
    Origami x = o;
    for (char c : word)
        x = c == 'S' ? act_S(x) : act_T(x);
    return x;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
    {
        path = fs::temp_directory_path() / ("tcurve-test-" + tag + "-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void same_orbit(const OrbitSummary& a, const OrbitSummary& b)
{
    CHECK(a.complete == b.complete);
    CHECK(a.index == b.index);
    CHECK(a.cusp_widths == b.cusp_widths);
    CHECK(a.height_sums == b.height_sums);
    CHECK(a.moduli_sum == b.moduli_sum);
    CHECK(a.representative.key == b.representative.key);
}

}  // namespace

TEST_SUITE("orbit-engine") {

TEST_CASE("canonical form is invariant under 200 random relabelings")
{
    std::mt19937 rng(2024);
    for (int t = 0; t < 200; ++t) {
        Origami o = testing::from_pair(oracle::random_connected(1 + t % 14, rng));
        CHECK(canonical_form(random_relabel(o, rng)).key == canonical_form(o).key);
    }
}

TEST_CASE("canonical form separates non-isomorphic surfaces")
{
    std::mt19937 rng(99);
    for (int t = 0; t < 200; ++t) {
        int n = 2 + t % 7;
        oracle::Pair a = oracle::random_connected(n, rng), b = oracle::random_connected(n, rng);
        bool iso = oracle::canonical(a) == oracle::canonical(b);
        CHECK((canonical_form(testing::from_pair(a)).key == canonical_form(testing::from_pair(b)).key) == iso);
    }
    CHECK(canonical_form(surface(testing::row("c17"))).key != canonical_form(surface(testing::row("c18"))).key);
}

TEST_CASE("canonical form round trip")
{
    Origami o = surface(testing::row("c04"));
    CanonicalForm c = canonical_form(o);
    CHECK(canonical_form(c.origami()).key == c.key);
    CHECK(c.key.size() == key_bytes(o.size()));
    std::vector<int> r(o.size()), u(o.size());
    decode_key(reinterpret_cast<const std::uint8_t*>(c.key.data()), o.size(), r.data(), u.data());
    CHECK(r == c.r);
    CHECK(u == c.u);
}

TEST_CASE("generator actions")
{
    Origami t = surface("()", "()", 1);
    CHECK(canonical_form(act_T(t)) == canonical_form(t));
    CHECK(canonical_form(act_S(t)) == canonical_form(t));

    // T of the L shape is a one-cylinder surface
    Origami L = surface("(1,2)", "(1,3)");
    Origami TL = act_T(L);
    CHECK(TL.r == L.r);
    CHECK(TL.u == L.u * L.r.inverse());
    CHECK(horizontal_cylinders(act_S(TL)).size() == 1);
}

TEST_CASE("SL(2,Z) relation words act trivially on 100 random surfaces")
{
    std::mt19937 rng(31337);
    for (int t = 0; t < 100; ++t) {
        Origami o = testing::from_pair(oracle::random_connected(1 + t % 12, rng));
        const std::string key = canonical_form(o).key;
        CHECK(canonical_form(apply(o, "SSSS")).key == key);
        // (ST)^3 S^-2, with S^-1 = S^3
        CHECK(canonical_form(apply(o, "STSTSTSSSSSS")).key == key);
    }
}

TEST_CASE("L-shaped surface orbit by hand")
{
    Origami L = surface("(1,2)", "(1,3)");
    OrbitSummary orb = enumerate_orbit(L);
    CHECK(orb.complete);
    CHECK(orb.index == 3);
    CHECK(orb.moduli_sum == frac(3, 2) + frac(3, 2) + frac(1, 3));
    CHECK(orb.cusp_count == 2);
    CHECK(orb.stratum.label() == "H(2)");
}

TEST_CASE("dataset indices at small size")
{
    CHECK(enumerate_orbit(surface(testing::row("c17"))).index == 24);
    CHECK(enumerate_orbit(surface(testing::row("c04"))).index == 48);
}

TEST_CASE("orbit engine agrees with the brute-force oracle")
{
    std::mt19937 rng(404);
    for (int t = 0; t < 40; ++t) {
        oracle::Pair p = oracle::random_connected(2 + t % 7, rng);
        auto ref = oracle::orbit(p);
        OrbitSummary orb = enumerate_orbit(testing::from_pair(p));
        CAPTURE(t);
        CHECK(orb.index == ref.members.size());
        CHECK(orb.cusp_count == ref.cusps);
        CHECK(orb.moduli_sum == ref.moduli_sum);
    }
    for (const char* id : {"c17", "c18", "c04", "c12"}) {
        CAPTURE(id);
        auto ref = oracle::orbit(testing::to_pair(surface(testing::row(id))));
        OrbitSummary orb = enumerate_orbit(surface(testing::row(id)));
        CHECK(orb.index == ref.members.size());
        CHECK(orb.index == testing::row(id).index);
        CHECK(orb.cusp_count == ref.cusps);
        CHECK(orb.moduli_sum == ref.moduli_sum);
    }
}

TEST_CASE("serial and parallel enumeration agree on 20 seeds")
{
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937 rng(seed);
        Origami o = testing::from_pair(oracle::random_connected(4 + seed % 6, rng));
        OrbitOptions serial, parallel;
        parallel.jobs = 4;
        CAPTURE(seed);
        same_orbit(enumerate_orbit(o, serial), enumerate_orbit(o, parallel));
    }
    OrbitOptions many;
    many.jobs = 8;
    same_orbit(enumerate_orbit(surface(testing::row("c12"))), enumerate_orbit(surface(testing::row("c12")), many));
}

TEST_CASE("spilling the visited set to disk does not change the result")
{
    TempDir spill("spill");
    Origami o = surface(testing::row("c11"));
    OrbitOptions tight;
    tight.limits.max_memory = 1;
    tight.spill_dir = spill.path;
    tight.jobs = 2;
    OrbitSummary spilled = enumerate_orbit(o, tight);
    CHECK(spilled.spilled_runs > 0);
    same_orbit(spilled, enumerate_orbit(o));
}

TEST_CASE("cache hit and resume")
{
    TempDir cache("cache");
    Origami o = surface(testing::row("c01"));
    OrbitOptions opts;
    opts.cache_dir = cache.path;
    opts.limits.max_size = 50;
    OrbitSummary partial = enumerate_orbit(o, opts);
    CHECK_FALSE(partial.complete);
    CHECK(partial.index > 50);
    CHECK(fs::exists(orbit_cache_file(cache.path, canonical_form(o))));

    opts.limits.max_size = 0;
    OrbitSummary resumed = enumerate_orbit(o, opts);
    CHECK(resumed.resumed);
    CHECK(resumed.complete);
    CHECK(resumed.index == 200);

    OrbitSummary hit = enumerate_orbit(relabel(o, parse_cycles("(1,5,9)", o.size())), opts);
    CHECK(hit.cache_hit);
    CHECK_FALSE(hit.resumed);
    same_orbit(hit, resumed);
    same_orbit(hit, enumerate_orbit(o));
}

TEST_CASE("a corrupt cache file is ignored")
{
    TempDir cache("corrupt");
    Origami o = surface("(1,2)", "(1,3)");
    OrbitOptions opts;
    opts.cache_dir = cache.path;
    enumerate_orbit(o, opts);
    fs::path file = orbit_cache_file(cache.path, canonical_form(o));
    REQUIRE(fs::exists(file));
    fs::resize_file(file, 3);
    OrbitSummary again;
    CHECK_NOTHROW(again = enumerate_orbit(o, opts));
    CHECK(again.index == 3);
}

}  // TEST_SUITE
