#pragma once

#include "tcurve/canonical.hpp"
#include "tcurve/rational.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tcurve {

struct OrbitLimits {
    std::uint64_t max_size = 0;    // 0: unlimited
    std::uint64_t max_memory = 0;  // bytes held by the in-memory visited store, 0: unlimited
};

struct OrbitOptions {
    OrbitLimits limits;
    int jobs = 1;
    std::filesystem::path cache_dir;  // empty: no cache
    std::filesystem::path spill_dir;  // empty: system temp directory
};

struct OrbitSummary {
    bool complete = false;
    std::uint64_t index = 0;      // closure size; a lower bound when incomplete
    std::uint64_t processed = 0;  // elements whose images were expanded
    std::uint64_t cusp_count = 0;
    std::map<std::uint64_t, std::uint64_t> cusp_widths;  // width -> number of cusps
    std::vector<std::uint64_t> height_sums;  // [w] = sum of heights of width-w cylinders
    Rational moduli_sum;                     // sum over processed elements of sum h/w
    CanonicalForm representative;
    AbelianSignature stratum;
    std::uint64_t lattice_index = 1;
    bool cache_hit = false;
    bool resumed = false;
    std::uint64_t spilled_runs = 0;
};

extern const char* const kGeneratorConvention;
constexpr std::uint32_t kOrbitCodeVersion = 1;

OrbitSummary enumerate_orbit(const Origami& o, const OrbitOptions& options = {});

std::filesystem::path orbit_cache_file(const std::filesystem::path& dir, const CanonicalForm& seed);

// Cylinder data for 0-based arrays, without building Permutation objects.
void accumulate_cylinders(int n, const int* r, const int* u, std::vector<std::uint64_t>& height_sums,
                          std::vector<int>& scratch);

}  // namespace tcurve
