#pragma once

#include "tcurve/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tcurve {

// Marked-point sets are bitmasks: bit j-1 stands for point j.
using PointSet = std::uint32_t;

struct Label {
    enum Kind : int { Lambda = 0, Omega = 1, Psi = 2, DeltaIrr = 3, Delta = 4 };
    Kind kind = Lambda;
    int index = 0;  // point for Omega/Psi, component genus for Delta
    PointSet set = 0;

    static Label lambda() { return {Lambda, 0, 0}; }
    static Label omega(int i) { return {Omega, i, 0}; }
    static Label psi(int i) { return {Psi, i, 0}; }
    static Label delta_irr() { return {DeltaIrr, 0, 0}; }
    static Label delta(int i, PointSet s) { return {Delta, i, s}; }

    bool is_boundary() const { return kind == DeltaIrr || kind == Delta; }
    friend auto operator<=>(const Label&, const Label&) = default;
};

std::string to_string(const Label& l);
// "lambda", "omega_2", "psi_1", "delta_irr" (alias "delta_0"),
// "delta_{1;{}}", "delta_{0;{1,2}}", and "delta_i" for delta_{i;{}}.
Label parse_label(std::string_view text);
PointSet point_set(std::initializer_list<int> points);

// Basis of Pic(Mbar_{g,n}) in the lambda, omega, delta convention.
class PicBasis {
public:
    PicBasis(int g, int n);
    int g() const { return g_; }
    int n() const { return n_; }
    PointSet all_points() const { return n_ == 0 ? 0 : ((PointSet(1) << n_) - 1); }

    // delta_{i;S} = delta_{g-i;S^c}: prefer i < g/2, and 1 in S when i = g/2.
    // Throws std::invalid_argument for labels naming no boundary divisor.
    Label canonical(const Label& l) const;
    bool is_canonical(const Label& l) const;
    std::vector<Label> labels() const;           // lambda, omega_i, delta_irr, delta_{i;S}
    std::vector<Label> boundary_labels() const;  // delta_irr and delta_{i;S}
    friend bool operator==(const PicBasis&, const PicBasis&) = default;

private:
    int g_, n_;
};

class DivisorClass {
public:
    DivisorClass(int g, int n) : basis_(g, n) {}
    explicit DivisorClass(PicBasis b) : basis_(b) {}

    const PicBasis& basis() const { return basis_; }
    int g() const { return basis_.g(); }
    int n() const { return basis_.n(); }

    // adds c * label, canonicalising delta labels
    DivisorClass& add(const Label& l, const Rational& c);
    Rational operator[](const Label& l) const;
    const std::map<Label, Rational>& coords() const& { return coords_; }
    // by value on temporaries, so range-for over f().coords() stays valid
    std::map<Label, Rational> coords() && { return std::move(coords_); }

    DivisorClass operator+(const DivisorClass& o) const;
    DivisorClass operator-(const DivisorClass& o) const;
    DivisorClass operator*(const Rational& c) const;
    bool operator==(const DivisorClass& o) const;

    // psi_i -> omega_i + sum_{i in S} delta_{0;S} and back
    DivisorClass to_omega_basis() const;
    DivisorClass to_psi_basis() const;

    std::string str() const;  // "-lambda + 3 omega_1 - delta_{1;{1}}"

private:
    PicBasis basis_;
    std::map<Label, Rational> coords_;
};

// "g = .." and "n = .." headers, then one "label coefficient" pair per line.
DivisorClass parse_class_text(std::string_view text);
std::string print_class_text(const DivisorClass& d);

std::vector<std::string> class_library_names();
// n is ignored for names that fix their own marked points.
DivisorClass class_library(const std::string& name, int g, int n);

// pi_{n*}(D . delta_{0;{a,n}}) on Mbar_{g,n-1}
DivisorClass pushforward_boundary(const DivisorClass& d, int a, int b);

struct Relation {
    std::string name;
    DivisorClass cls;
};
std::vector<Relation> expand_relations(int g, int n);

}  // namespace tcurve
