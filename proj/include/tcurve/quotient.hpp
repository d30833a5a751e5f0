#pragma once

#include "tcurve/origami.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tcurve {

struct QuadraticSignature {
    std::vector<int> orders;  // d_j >= -1, descending
    QuadraticSignature() = default;
    explicit QuadraticSignature(std::vector<int> d);
    int sum() const;
    int genus() const;  // throws unless sum = 4g - 4 with g >= 0
    int odd_count() const;
    std::string label() const;  // "Q(6,3,-1)", poles as -1^k when k > 1
    friend bool operator==(const QuadraticSignature&, const QuadraticSignature&) = default;
};

struct StratumLabel {
    QuadraticSignature signature;
    std::string component;  // "irr", "reg", "hyp", "nh", ... or empty
};

// "Q(2^2,1^2,-1^2)", "Q(3,3,3,-1)^irr", "(6,3,-1)". Throws std::invalid_argument.
StratumLabel parse_stratum_label(std::string_view text);

struct FixedCensus {
    int vertices = 0;  // fixed vertices, regular or not
    int regular_vertices = 0;
    int edge_midpoints = 0;
    int square_centers = 0;
    int total() const { return vertices + edge_midpoints + square_centers; }
};

struct QuotientStructure {
    Permutation sigma;
    QuadraticSignature signature;
    int base_genus = 0;
    FixedCensus census;
};

// All sigma with sigma^2 = id, sigma r sigma = r^-1, sigma u sigma = u^-1,
// ordered by sigma(1).
std::vector<Permutation> find_neg_involutions(const Origami& o);

// Throws std::logic_error when the census is inconsistent.
QuotientStructure quotient_signature(const Origami& o, const Permutation& sigma);

std::vector<QuotientStructure> quotient_structures(const Origami& o);

enum class Parity { Even, Odd };
std::string to_string(Parity p);

// Arf invariant of ind + 1 mod 2 on a symplectic basis. Requires every zero
// of even order; throws std::invalid_argument otherwise.
Parity spin_parity(const Origami& o);

}  // namespace tcurve
