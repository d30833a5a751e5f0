#pragma once

#include "tcurve/permutation.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tcurve {

// r(i) is the square to the right of i, u(i) the square above i.
struct Origami {
    Permutation r;
    Permutation u;

    Origami() = default;
    Origami(Permutation r_, Permutation u_);

    int size() const { return r.size(); }
    friend bool operator==(const Origami&, const Origami&) = default;
};

struct AbelianSignature {
    std::vector<int> orders;  // zero orders m_i >= 1, descending
    int regular_points = 0;   // vertices of cone angle 2*pi
    int genus() const;
    std::string label() const;  // e.g. "H(4,2)", torus "H()"
    friend bool operator==(const AbelianSignature&, const AbelianSignature&) = default;
};

struct Cylinder {
    int width;
    int height;
    friend auto operator<=>(const Cylinder&, const Cylinder&) = default;
};

// Corner c of square i has id 4*i + c.
enum Corner : int { BL = 0, BR = 1, TR = 2, TL = 3 };

struct VertexStructure {
    std::vector<int> vertex_of_corner;  // size 4n, vertex ids 0..V-1
    std::vector<int> angle;             // per vertex: number of corners (4 * (m+1))
    int count() const { return static_cast<int>(angle.size()); }
    int order(int v) const { return angle[v] / 4 - 1; }
};

Origami parse_surface(std::string_view text);
std::string print_surface(const Origami& o);

bool is_connected(const Origami& o);

// v = r u r^-1 u^-1. The vertex at the top-right corner of square i is the
// v-cycle containing u(r(i)).
Permutation vertex_permutation(const Origami& o);
VertexStructure vertex_structure(const Origami& o);

AbelianSignature stratum_of(const Origami& o);
int genus_of(const Origami& o);

std::vector<Cylinder> horizontal_cylinders(const Origami& o);  // sorted descending

// Index in Z^2 of the lattice spanned by absolute periods and by the
// relative periods between zeros. 1 means the origami is reduced.
std::uint64_t period_lattice_index(const Origami& o);

Origami relabel(const Origami& o, const Permutation& pi);  // (pi r pi^-1, pi u pi^-1)

}  // namespace tcurve
