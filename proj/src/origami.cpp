#include "tcurve/origami.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tcurve {

Origami::Origami(Permutation r_, Permutation u_) : r(std::move(r_)), u(std::move(u_))
{
    if (r.size() != u.size())
        throw std::invalid_argument("r and u act on different square counts");
    if (r.size() == 0)
        throw std::invalid_argument("empty origami");
}

int AbelianSignature::genus() const
{
    int s = 0;
    for (int m : orders)
        s += m;
    return s / 2 + 1;
}

std::string AbelianSignature::label() const
{
    std::string s = "H(";
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(orders[i]);
    }
    return s + ")";
}

namespace {

std::string trim(std::string s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool all_integer_tokens(const std::string& text)
{
    for (char c : text)
        if (!std::isdigit(static_cast<unsigned char>(c)) && !std::isspace(static_cast<unsigned char>(c)))
            return false;
    return true;
}

Origami parse_compact(const std::string& text)
{
    std::istringstream in(text);
    std::vector<long long> v;
    long long x;
    while (in >> x)
        v.push_back(x);
    if (v.empty())
        throw std::invalid_argument("empty surface");
    long long n = v[0];
    if (n < 1 || static_cast<long long>(v.size()) != 1 + 2 * n)
        throw std::invalid_argument("compact format needs n followed by 2n images");
    std::vector<int> r(v.begin() + 1, v.begin() + 1 + n);
    std::vector<int> u(v.begin() + 1 + n, v.end());
    return Origami(Permutation::from_one_line(r), Permutation::from_one_line(u));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Origami parse_surface(std::string_view text_view)
{
    std::string text(text_view);
    // strip comments
    std::string clean;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto h = line.find('#');
        if (h != std::string::npos)
            line.erase(h);
        clean += line + "\n";
    }
    if (all_integer_tokens(clean))
        return parse_compact(clean);

    std::map<std::string, std::string> fields;
    std::string key;
    std::istringstream in(clean);
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq != std::string::npos) {
            key = trim(line.substr(0, eq));
            if (key != "n" && key != "r" && key != "u")
                throw std::invalid_argument("unknown field '" + key + "'");
            if (fields.count(key))
                throw std::invalid_argument("field '" + key + "' given twice");
            fields[key] = trim(line.substr(eq + 1));
        } else {
            if (key.empty())
                throw std::invalid_argument("text before first field");
            fields[key] += line;
        }
    }
    if (!fields.count("r") || !fields.count("u"))
        throw std::invalid_argument("surface needs both r and u");
    int n = std::max(max_symbol(fields["r"]), max_symbol(fields["u"]));
    if (fields.count("n")) {
        int declared = std::stoi(fields["n"]);
        if (declared < n)
            throw std::invalid_argument("symbol exceeds declared n");
        n = declared;
    }
    if (n < 1)
        throw std::invalid_argument("cannot infer n from an empty surface; give 'n = ...'");
    return Origami(parse_cycles(fields["r"], n), parse_cycles(fields["u"], n));
}

std::string print_surface(const Origami& o)
{
    return "n = " + std::to_string(o.size()) + "\nr = " + print_cycles(o.r) +
           "\nu = " + print_cycles(o.u) + "\n";
}

bool is_connected(const Origami& o)
{
    int n = o.size();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : {o.r(x), o.u(x)}) {
            if (!seen[y]) {
                seen[y] = 1;
                ++count;
                stack.push_back(y);
            }
        }
    }
    return count == n;
}

Permutation vertex_permutation(const Origami& o)
{
    return o.r * o.u * o.r.inverse() * o.u.inverse();
}

VertexStructure vertex_structure(const Origami& o)
{
    int n = o.size();
    UnionFind uf(4 * n);
    for (int i = 0; i < n; ++i) {
        int ri = o.r(i), ui = o.u(i);
        uf.unite(4 * i + BR, 4 * ri + BL);
        uf.unite(4 * i + TR, 4 * ri + TL);
        uf.unite(4 * i + TL, 4 * ui + BL);
        uf.unite(4 * i + TR, 4 * ui + BR);
    }
    VertexStructure vs;
    vs.vertex_of_corner.assign(4 * n, -1);
    std::vector<int> id(4 * n, -1);
    for (int c = 0; c < 4 * n; ++c) {
        int root = uf.find(c);
        if (id[root] < 0) {
            id[root] = vs.count();
            vs.angle.push_back(0);
        }
        vs.vertex_of_corner[c] = id[root];
        ++vs.angle[id[root]];
    }
    return vs;
}

AbelianSignature stratum_of(const Origami& o)
{
    AbelianSignature s;
    for (int len : vertex_permutation(o).cycle_lengths()) {
        if (len > 1)
            s.orders.push_back(len - 1);
        else
            ++s.regular_points;
    }
    return s;
}

int genus_of(const Origami& o) { return stratum_of(o).genus(); }

std::vector<Cylinder> horizontal_cylinders(const Origami& o)
{
    int n = o.size();
    auto v = vertex_permutation(o);
    std::vector<int> row(n, -1);
    std::vector<int> width;
    std::vector<int> first;
    for (const auto& c : o.r.cycles()) {
        for (int x : c)
            row[x] = static_cast<int>(width.size());
        width.push_back(static_cast<int>(c.size()));
        first.push_back(c.front());
    }
    int rows = static_cast<int>(width.size());
    UnionFind uf(rows);
    for (int k = 0; k < rows; ++k) {
        bool regular = true;
        int x = first[k];
        do {
            int tr = o.u(o.r(x));
            if (v(tr) != tr) {
                regular = false;
                break;
            }
            x = o.r(x);
        } while (x != first[k]);
        if (regular)
            uf.unite(k, row[o.u(first[k])]);
    }
    std::map<int, Cylinder> cyl;
    for (int k = 0; k < rows; ++k) {
        auto [it, fresh] = cyl.try_emplace(uf.find(k), Cylinder{width[k], 0});
        if (it->second.width != width[k])
            throw std::logic_error("merged rows of different widths");
        ++it->second.height;
    }
    std::vector<Cylinder> out;
    for (auto& [k, c] : cyl)
        out.push_back(c);
    std::sort(out.rbegin(), out.rend());
    return out;
}

std::uint64_t period_lattice_index(const Origami& o)
{
    int n = o.size();
    // position of the bottom-left corner of every square along a spanning tree
    std::vector<std::pair<long long, long long>> pos(n);
    std::vector<char> seen(n, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    auto rinv = o.r.inverse(), uinv = o.u.inverse();
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int x = queue[h];
        auto [px, py] = pos[x];
        std::pair<int, std::pair<long long, long long>> steps[] = {
            {o.r(x), {px + 1, py}},
            {o.u(x), {px, py + 1}},
            {rinv(x), {px - 1, py}},
            {uinv(x), {px, py - 1}},
        };
        for (auto& [y, p] : steps) {
            if (!seen[y]) {
                seen[y] = 1;
                pos[y] = p;
                queue.push_back(y);
            }
        }
    }
    auto vs = vertex_structure(o);
    std::set<std::pair<long long, long long>> vecs;
    std::vector<std::pair<long long, long long>> vpos(vs.count());
    std::vector<char> placed(vs.count(), 0);
    static const int dx[4] = {0, 1, 1, 0};
    static const int dy[4] = {0, 0, 1, 1};
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < 4; ++c) {
            int v = vs.vertex_of_corner[4 * i + c];
            std::pair<long long, long long> p{pos[i].first + dx[c], pos[i].second + dy[c]};
            if (!placed[v]) {
                placed[v] = 1;
                vpos[v] = p;
            } else {
                vecs.insert({p.first - vpos[v].first, p.second - vpos[v].second});
            }
        }
    }
    int z0 = -1;
    for (int v = 0; v < vs.count(); ++v) {
        if (vs.angle[v] <= 4)
            continue;
        if (z0 < 0)
            z0 = v;
        else
            vecs.insert({vpos[v].first - vpos[z0].first, vpos[v].second - vpos[z0].second});
    }
    std::vector<std::pair<long long, long long>> list(vecs.begin(), vecs.end());
    long long g = 0;
    for (std::size_t a = 0; a < list.size(); ++a)
        for (std::size_t b = a + 1; b < list.size(); ++b)
            g = std::gcd(g, list[a].first * list[b].second - list[a].second * list[b].first);
    if (g == 0)
        throw std::logic_error("period lattice has rank < 2");
    return static_cast<std::uint64_t>(std::llabs(g));
}

Origami relabel(const Origami& o, const Permutation& pi)
{
    auto inv = pi.inverse();
    return Origami(pi * o.r * inv, pi * o.u * inv);
}

}  // namespace tcurve
