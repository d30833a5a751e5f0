#include "tcurve/pic.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace tcurve {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

int parse_small_int(std::string_view s, std::string_view whole)
{
    s = trim(s);
    if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw std::invalid_argument("malformed divisor label: '" + std::string(whole) + "'");
    return std::stoi(std::string(s));
}

std::string set_string(PointSet s)
{
    std::string out = "{";
    bool first = true;
    for (int j = 1; s != 0; ++j, s >>= 1) {
        if (s & 1) {
            if (!first)
                out += ",";
            out += std::to_string(j);
            first = false;
        }
    }
    return out + "}";
}

std::string coefficient_prefix(const Rational& c, bool leading)
{
    std::string sign = c < 0 ? (leading ? "-" : " - ") : (leading ? "" : " + ");
    Rational a = c < 0 ? Rational(-c) : c;
    if (a == 1)
        return sign;
    std::string mag = denominator(a) == 1 ? numerator(a).str() : to_string(a);
    return sign + mag + " ";
}

Rational binom2(int k) { return Rational(k * (k - 1), 2); }
Rational tri(int k) { return Rational(k * (k + 1), 2); }

}  // namespace

PointSet point_set(std::initializer_list<int> points)
{
    PointSet s = 0;
    for (int p : points) {
        if (p < 1 || p > 32)
            throw std::invalid_argument("marked point out of range");
        s |= PointSet(1) << (p - 1);
    }
    return s;
}

std::string to_string(const Label& l)
{
    switch (l.kind) {
    case Label::Lambda: return "lambda";
    case Label::Omega: return "omega_" + std::to_string(l.index);
    case Label::Psi: return "psi_" + std::to_string(l.index);
    case Label::DeltaIrr: return "delta_irr";
    case Label::Delta: return "delta_{" + std::to_string(l.index) + ";" + set_string(l.set) + "}";
    }
    return "?";
}

Label parse_label(std::string_view text)
{
    std::string_view t = trim(text);
    if (t == "lambda")
        return Label::lambda();
    if (t == "delta_irr" || t == "delta_0")
        return Label::delta_irr();
    if (t.starts_with("omega_"))
        return Label::omega(parse_small_int(t.substr(6), text));
    if (t.starts_with("psi_"))
        return Label::psi(parse_small_int(t.substr(4), text));
    if (t.starts_with("delta_{")) {
        if (!t.ends_with("}}"))
            throw std::invalid_argument("malformed divisor label: '" + std::string(text) + "'");
        std::string_view body = t.substr(7, t.size() - 9);  // "i;{a,b"
        auto semi = body.find(';');
        if (semi == std::string_view::npos || semi + 1 >= body.size() || body[semi + 1] != '{')
            throw std::invalid_argument("malformed divisor label: '" + std::string(text) + "'");
        int i = parse_small_int(body.substr(0, semi), text);
        std::string_view pts = body.substr(semi + 2);
        PointSet s = 0;
        while (!trim(pts).empty()) {
            auto comma = pts.find(',');
            int p = parse_small_int(pts.substr(0, comma), text);
            if (p < 1 || p > 32)
                throw std::invalid_argument("marked point out of range in '" + std::string(text) + "'");
            if (s & (PointSet(1) << (p - 1)))
                throw std::invalid_argument("repeated marked point in '" + std::string(text) + "'");
            s |= PointSet(1) << (p - 1);
            if (comma == std::string_view::npos)
                break;
            pts.remove_prefix(comma + 1);
        }
        return Label::delta(i, s);
    }
    if (t.starts_with("delta_")) {
        int i = parse_small_int(t.substr(6), text);
        return Label::delta(i, 0);
    }
    throw std::invalid_argument("unknown divisor label: '" + std::string(text) + "'");
}

PicBasis::PicBasis(int g, int n) : g_(g), n_(n)
{
    if (g < 0 || n < 0 || n > 20)
        throw std::invalid_argument("unsupported moduli space Mbar_{" + std::to_string(g) + "," + std::to_string(n) + "}");
    if (2 * g - 2 + n <= 0)
        throw std::invalid_argument("Mbar_{" + std::to_string(g) + "," + std::to_string(n) + "} is not stable");
}

Label PicBasis::canonical(const Label& l) const
{
    auto bad = [&](const char* why) {
        return std::invalid_argument(to_string(l) + " " + why + " on Mbar_{" + std::to_string(g_) + "," +
                                     std::to_string(n_) + "}");
    };
    switch (l.kind) {
    case Label::Lambda:
        return Label::lambda();
    case Label::Omega:
    case Label::Psi:
        if (l.index < 1 || l.index > n_)
            throw bad("names no marked point");
        return Label{l.kind, l.index, 0};
    case Label::DeltaIrr:
        if (g_ < 1)
            throw bad("does not exist");
        return Label::delta_irr();
    case Label::Delta: {
        if ((l.set & ~all_points()) != 0)
            throw bad("names a missing marked point");
        if (l.index < 0 || l.index > g_)
            throw bad("has a component genus out of range");
        int i = l.index;
        PointSet s = l.set;
        if (2 * i > g_ || (2 * i == g_ && n_ >= 1 && !(s & 1))) {
            i = g_ - i;
            s = all_points() & ~s;
        }
        // a rational component needs two marked points besides the node
        if (i == 0 && std::popcount(s) < 2)
            throw bad("is not a boundary divisor");
        return Label::delta(i, s);
    }
    }
    throw bad("is unknown");
}

bool PicBasis::is_canonical(const Label& l) const
{
    try {
        return canonical(l) == l;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

std::vector<Label> PicBasis::boundary_labels() const
{
    std::vector<Label> out;
    if (g_ >= 1)
        out.push_back(Label::delta_irr());
    for (int i = 0; 2 * i <= g_; ++i)
        for (PointSet s = 0; s <= all_points(); ++s) {
            Label l = Label::delta(i, s);
            if (is_canonical(l))
                out.push_back(l);
            if (s == all_points())
                break;
        }
    return out;
}

std::vector<Label> PicBasis::labels() const
{
    std::vector<Label> out{Label::lambda()};
    for (int i = 1; i <= n_; ++i)
        out.push_back(Label::omega(i));
    auto b = boundary_labels();
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

DivisorClass& DivisorClass::add(const Label& l, const Rational& c)
{
    Label k = basis_.canonical(l);
    if (c == 0)
        return *this;
    auto it = coords_.find(k);
    if (it == coords_.end())
        coords_.emplace(k, c);
    else if ((it->second += c) == 0)
        coords_.erase(it);
    return *this;
}

Rational DivisorClass::operator[](const Label& l) const
{
    auto it = coords_.find(basis_.canonical(l));
    return it == coords_.end() ? Rational(0) : it->second;
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const
{
    if (!(basis_ == o.basis_))
        throw std::invalid_argument("adding classes on different moduli spaces");
    DivisorClass r = *this;
    for (const auto& [l, c] : o.coords_)
        r.add(l, c);
    return r;
}

DivisorClass DivisorClass::operator*(const Rational& c) const
{
    DivisorClass r(basis_);
    for (const auto& [l, v] : coords_)
        r.add(l, v * c);
    return r;
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const { return *this + o * Rational(-1); }

bool DivisorClass::operator==(const DivisorClass& o) const
{
    return basis_ == o.basis_ && to_omega_basis().coords_ == o.to_omega_basis().coords_;
}

DivisorClass DivisorClass::to_omega_basis() const
{
    DivisorClass r(basis_);
    for (const auto& [l, c] : coords_) {
        if (l.kind != Label::Psi) {
            r.add(l, c);
            continue;
        }
        r.add(Label::omega(l.index), c);
        PointSet bit = PointSet(1) << (l.index - 1);
        for (PointSet s = 0; s <= basis_.all_points(); ++s) {
            if ((s & bit) && std::popcount(s) >= 2)
                r.add(Label::delta(0, s), c);
            if (s == basis_.all_points())
                break;
        }
    }
    return r;
}

DivisorClass DivisorClass::to_psi_basis() const
{
    DivisorClass w = to_omega_basis();
    DivisorClass r(basis_);
    for (const auto& [l, c] : w.coords_) {
        if (l.kind != Label::Omega) {
            r.add(l, c);
            continue;
        }
        r.add(Label::psi(l.index), c);
        PointSet bit = PointSet(1) << (l.index - 1);
        for (PointSet s = 0; s <= basis_.all_points(); ++s) {
            if ((s & bit) && std::popcount(s) >= 2)
                r.add(Label::delta(0, s), -c);
            if (s == basis_.all_points())
                break;
        }
    }
    return r;
}

std::string DivisorClass::str() const
{
    if (coords_.empty())
        return "0";
    std::string out;
    bool leading = true;
    for (const auto& [l, c] : coords_) {
        out += coefficient_prefix(c, leading) + to_string(l);
        leading = false;
    }
    return out;
}

DivisorClass parse_class_text(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int g = -1, n = -1, lineno = 0;
    std::vector<std::pair<Label, Rational>> terms;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        std::string_view t = trim(std::string_view(line).substr(0, hash));
        if (t.empty())
            continue;
        auto where = [&] { return "class text line " + std::to_string(lineno) + ": "; };
        auto eq = t.find('=');
        if (eq != std::string_view::npos) {
            std::string_view key = trim(t.substr(0, eq));
            std::string_view val = trim(t.substr(eq + 1));
            int v = 0;
            try {
                v = parse_small_int(val, t);
            } catch (const std::invalid_argument&) {
                throw std::invalid_argument(where() + "bad value '" + std::string(val) + "'");
            }
            if (key == "g")
                g = v;
            else if (key == "n")
                n = v;
            else
                throw std::invalid_argument(where() + "unknown header '" + std::string(key) + "'");
            continue;
        }
        auto sp = t.find_last_of(" \t");
        if (sp == std::string_view::npos)
            throw std::invalid_argument(where() + "expected 'label coefficient'");
        try {
            terms.emplace_back(parse_label(t.substr(0, sp)), parse_rational(trim(t.substr(sp + 1))));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where() + e.what());
        }
    }
    if (g < 0 || n < 0)
        throw std::invalid_argument("class text needs 'g = ' and 'n = ' headers");
    DivisorClass d(g, n);
    for (const auto& [l, c] : terms)
        d.add(l, c);
    return d;
}

std::string print_class_text(const DivisorClass& d)
{
    std::string out = "g = " + std::to_string(d.g()) + "\nn = " + std::to_string(d.n()) + "\n";
    for (const auto& [l, c] : d.coords())
        out += to_string(l) + " " + to_string(c) + "\n";
    return out;
}

namespace {

DivisorClass weierstrass_class(int g)
{
    if (g < 1)
        throw std::invalid_argument("W needs genus >= 1");
    DivisorClass d(g, 1);
    d.add(Label::lambda(), -1);
    d.add(Label::omega(1), Rational(g * (g + 1), 2));
    for (int i = 1; i <= g - 1; ++i)
        d.add(Label::delta(i, 1), -tri(g - i));
    return d;
}

DivisorClass bn4_1111()
{
    DivisorClass d(4, 4);
    d.add(Label::lambda(), -1);
    for (int i = 1; i <= 4; ++i)
        d.add(Label::omega(i), 1);
    // every subset S contributes, so delta_{i;S} and its complement add up
    for (PointSet s = 0; s < 16; ++s) {
        int k = std::popcount(s);
        if (k >= 2)
            d.add(Label::delta(0, s), -binom2(k));
        if (k != 1)
            d.add(Label::delta(1, s), -tri(std::abs(k - 1)));
        if (k != 2)
            d.add(Label::delta(2, s), -tri(std::abs(k - 2)));
    }
    return d;
}

struct Term {
    const char* label;
    int coefficient;
};

DivisorClass from_terms(int g, int n, std::initializer_list<Term> terms)
{
    DivisorClass d(g, n);
    for (const auto& t : terms)
        d.add(parse_label(t.label), t.coefficient);
    return d;
}

}  // namespace

std::vector<std::string> class_library_names()
{
    return {"W", "H_3", "BN_2_11", "BN_3_111", "BN_3_21", "BN_4_1111", "BN_4_211", "BN_4_31", "BN_4_22",
            "psi1_minus_lambda", "relg2"};
}

DivisorClass class_library(const std::string& name, int g, int n)
{
    if (name == "W")
        return weierstrass_class(g);
    if (name == "H_3")
        return from_terms(3, 0, {{"lambda", 9}, {"delta_irr", -1}, {"delta_{1;{}}", -3}});
    if (name == "BN_2_11")
        return from_terms(2, 2, {{"lambda", -1}, {"omega_1", 1}, {"omega_2", 1}, {"delta_{0;{1,2}}", -1},
                                 {"delta_{1;{}}", -1}});
    if (name == "BN_3_21")
        return from_terms(3, 2, {{"lambda", -1}, {"omega_1", 3}, {"omega_2", 1}, {"delta_{0;{1,2}}", -2},
                                 {"delta_{1;{}}", -1}, {"delta_{1;{1}}", -1}, {"delta_{1;{1,2}}", -3}});
    if (name == "BN_3_111") {
        DivisorClass d(3, 3);
        d.add(Label::lambda(), -1);
        for (int i = 1; i <= 3; ++i)
            d.add(Label::omega(i), 1);
        for (PointSet s : {point_set({1, 2}), point_set({1, 3}), point_set({2, 3})}) {
            d.add(Label::delta(0, s), -1);
            d.add(Label::delta(1, s), -1);
        }
        d.add(Label::delta(0, 7), -3);
        d.add(Label::delta(1, 0), -1);
        d.add(Label::delta(1, 7), -3);
        return d;
    }
    if (name == "BN_4_1111")
        return bn4_1111();
    if (name == "BN_4_211")
        return from_terms(4, 3,
                          {{"lambda", -1}, {"omega_1", 3}, {"omega_2", 1}, {"omega_3", 1},
                           {"delta_{0;{1,2}}", -2}, {"delta_{0;{1,3}}", -2}, {"delta_{0;{2,3}}", -1},
                           {"delta_{0;{1,2,3}}", -5}, {"delta_{1;{}}", -1}, {"delta_{1;{1}}", -1},
                           {"delta_{1;{2,3}}", -1}, {"delta_{1;{1,3}}", -3}, {"delta_{1;{1,2}}", -3},
                           {"delta_{1;{1,2,3}}", -6}, {"delta_{2;{}}", -6}, {"delta_{2;{2}}", -2},
                           {"delta_{2;{3}}", -2}});
    if (name == "BN_4_31")
        return from_terms(4, 2, {{"lambda", -1}, {"omega_1", 6}, {"omega_2", 1}, {"delta_{0;{1,2}}", -3},
                                 {"delta_{1;{}}", -1}, {"delta_{1;{1}}", -3}, {"delta_{1;{1,2}}", -6},
                                 {"delta_{2;{}}", -6}, {"delta_{2;{1}}", -2}});
    if (name == "BN_4_22")
        return from_terms(4, 2, {{"lambda", -1}, {"omega_1", 3}, {"omega_2", 3}, {"delta_{0;{1,2}}", -4},
                                 {"delta_{1;{}}", -1}, {"delta_{1;{1}}", -1}, {"delta_{1;{2}}", -1},
                                 {"delta_{1;{1,2}}", -6}, {"delta_{2;{}}", -6}});
    if (name == "psi1_minus_lambda") {
        DivisorClass d(1, n);
        d.add(Label::psi(1), 1);
        d.add(Label::lambda(), -1);
        return d.to_omega_basis();
    }
    if (name == "relg2") {
        DivisorClass d(2, n);
        d.add(Label::lambda(), 1);
        d.add(Label::delta_irr(), Rational(-1, 10));
        for (const Label& l : d.basis().boundary_labels())
            if (l.kind == Label::Delta && l.index == 1)
                d.add(l, Rational(-1, 5));
        return d;
    }
    throw std::invalid_argument("unknown divisor class '" + name + "'");
}

DivisorClass pushforward_boundary(const DivisorClass& d, int a, int b)
{
    int n = d.n();
    if (b != n)
        throw std::invalid_argument("pushforward forgets the last marked point; got " + std::to_string(b));
    if (a < 1 || a >= n)
        throw std::invalid_argument("pushforward needs 1 <= a < n");
    PicBasis target(d.g(), n - 1);
    DivisorClass out(target);
    const PointSet abit = PointSet(1) << (a - 1);
    const PointSet nbit = PointSet(1) << (n - 1);
    const Label self = d.basis().canonical(Label::delta(0, abit | nbit));

    const DivisorClass w = d.to_omega_basis();
    for (const auto& [l, c] : w.coords()) {
        switch (l.kind) {
        case Label::Lambda:
        case Label::DeltaIrr:
            out.add(l, c);
            break;
        case Label::Omega:
            out.add(Label::omega(l.index == n ? a : l.index), c);
            break;
        case Label::Psi:
            break;  // removed by to_omega_basis
        case Label::Delta: {
            if (l == self) {
                // self-intersection: -psi_a
                out.add(Label::omega(a), -c);
                for (PointSet s = 0; s <= target.all_points(); ++s) {
                    if ((s & abit) && std::popcount(s) >= 2)
                        out.add(Label::delta(0, s), -c);
                    if (s == target.all_points())
                        break;
                }
                break;
            }
            bool has_a = l.set & abit, has_n = l.set & nbit;
            if (has_a != has_n)
                break;
            Label img = Label::delta(l.index, l.set & ~nbit);
            out.add(img, c);
            break;
        }
        }
    }
    return out;
}

std::vector<Relation> expand_relations(int g, int n)
{
    PicBasis basis(g, n);
    std::vector<Relation> out;
    if (g == 2) {
        out.push_back({"relg2", class_library("relg2", 2, n)});
    } else if (g == 1) {
        DivisorClass r(basis);
        r.add(Label::delta_irr(), 1).add(Label::lambda(), -12);
        out.push_back({"delta_irr = 12 lambda", r});
        for (int i = 1; i <= n; ++i) {
            DivisorClass p(basis);
            p.add(Label::psi(i), 1).add(Label::lambda(), -1);
            for (PointSet s = 0; s <= basis.all_points(); ++s) {
                if ((s >> (i - 1) & 1) && std::popcount(s) >= 2)
                    p.add(Label::delta(0, s), -1);
                if (s == basis.all_points())
                    break;
            }
            out.push_back({"psi_" + std::to_string(i) + " relation", p.to_omega_basis()});
        }
    } else if (g == 0) {
        throw std::invalid_argument("genus 0 relations are not supported");
    }
    return out;
}

}  // namespace tcurve
