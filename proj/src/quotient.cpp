#include "tcurve/quotient.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace tcurve {

QuadraticSignature::QuadraticSignature(std::vector<int> d) : orders(std::move(d))
{
    for (int x : orders)
        if (x < -1)
            throw std::invalid_argument("quadratic orders are >= -1");
    std::sort(orders.rbegin(), orders.rend());
}

int QuadraticSignature::sum() const
{
    int s = 0;
    for (int d : orders)
        s += d;
    return s;
}

int QuadraticSignature::genus() const
{
    int s = sum() + 4;
    if (s < 0 || s % 4 != 0)
        throw std::invalid_argument("orders " + label() + " do not sum to 4g-4");
    return s / 4;
}

int QuadraticSignature::odd_count() const
{
    int c = 0;
    for (int d : orders)
        c += (d % 2 != 0);
    return c;
}

std::string QuadraticSignature::label() const
{
    std::string s = "Q(";
    bool first = true;
    std::size_t i = 0;
    while (i < orders.size()) {
        std::size_t j = i;
        while (j < orders.size() && orders[j] == orders[i])
            ++j;
        int d = orders[i];
        auto emit = [&](const std::string& t) {
            if (!first)
                s += ',';
            s += t;
            first = false;
        };
        if (d == -1 && j - i > 1)
            emit("-1^" + std::to_string(j - i));
        else
            for (std::size_t k = i; k < j; ++k)
                emit(std::to_string(d));
        i = j;
    }
    return s + ")";
}

StratumLabel parse_stratum_label(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    if (!s.empty() && (s[0] == 'Q' || s[0] == 'q'))
        s.erase(0, 1);
    if (s.empty() || s[0] != '(')
        throw std::invalid_argument("stratum label must look like Q(...): '" + std::string(text) + "'");
    auto close = s.find(')');
    if (close == std::string::npos)
        throw std::invalid_argument("unterminated stratum label");
    StratumLabel out;
    std::string tail = s.substr(close + 1);
    if (!tail.empty()) {
        if (tail[0] != '^' || tail.size() < 2)
            throw std::invalid_argument("bad component tag in '" + std::string(text) + "'");
        out.component = tail.substr(1);
    }
    std::string body = s.substr(1, close - 1);
    std::vector<int> d;
    std::size_t pos = 0;
    while (pos <= body.size() && !body.empty()) {
        auto comma = body.find(',', pos);
        std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty())
            throw std::invalid_argument("empty entry in stratum label");
        int mult = 1;
        auto caret = item.find('^');
        if (caret != std::string::npos) {
            mult = std::stoi(item.substr(caret + 1));
            item = item.substr(0, caret);
        }
        std::size_t used = 0;
        int value = std::stoi(item, &used);
        if (used != item.size() || mult < 1)
            throw std::invalid_argument("bad entry '" + item + "' in stratum label");
        for (int k = 0; k < mult; ++k)
            d.push_back(value);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    out.signature = QuadraticSignature(std::move(d));
    return out;
}

std::vector<Permutation> find_neg_involutions(const Origami& o)
{
    int n = o.size();
    auto rinv = o.r.inverse(), uinv = o.u.inverse();
    std::vector<Permutation> out;
    std::vector<int> sigma(n);
    std::vector<int> stack;
    for (int j = 0; j < n; ++j) {
        std::fill(sigma.begin(), sigma.end(), -1);
        sigma[0] = j;
        stack.assign(1, 0);
        bool ok = true;
        while (ok && !stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            int y = sigma[x];
            std::pair<int, int> forced[] = {
                {o.r(x), rinv(y)}, {rinv(x), o.r(y)}, {o.u(x), uinv(y)}, {uinv(x), o.u(y)}};
            for (auto [a, b] : forced) {
                if (sigma[a] < 0) {
                    sigma[a] = b;
                    stack.push_back(a);
                } else if (sigma[a] != b) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok || std::find(sigma.begin(), sigma.end(), -1) != sigma.end())
            continue;
        std::vector<char> hit(n, 0);
        for (int x : sigma) {
            if (hit[x])
                ok = false;
            hit[x] = 1;
        }
        for (int x = 0; ok && x < n; ++x)
            ok = sigma[sigma[x]] == x;
        if (ok)
            out.emplace_back(sigma);
    }
    return out;
}

QuotientStructure quotient_signature(const Origami& o, const Permutation& sigma)
{
    int n = o.size();
    if (sigma.size() != n)
        throw std::invalid_argument("sigma has the wrong size");
    if (!(sigma * sigma).is_identity() || !(sigma * o.r * sigma == o.r.inverse()) ||
        !(sigma * o.u * sigma == o.u.inverse()))
        throw std::invalid_argument("sigma is not a (-1)-involution of this origami");

    QuotientStructure q;
    q.sigma = sigma;
    for (int i = 0; i < n; ++i) {
        q.census.square_centers += sigma(i) == i;
        q.census.edge_midpoints += (sigma(i) == o.r(i)) + (sigma(i) == o.u(i));
    }

    auto vs = vertex_structure(o);
    // rotation by pi swaps opposite corners
    static const int opposite[4] = {TR, TL, BL, BR};
    std::vector<int> image(vs.count(), -1);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < 4; ++c) {
            int v = vs.vertex_of_corner[4 * i + c];
            int w = vs.vertex_of_corner[4 * sigma(i) + opposite[c]];
            if (image[v] >= 0 && image[v] != w)
                throw std::logic_error("sigma does not induce a map on vertices");
            image[v] = w;
        }
    }

    std::vector<int> d;
    for (int v = 0; v < vs.count(); ++v) {
        int m = vs.order(v);
        if (image[v] == v) {
            if (m % 2 != 0)
                throw std::logic_error("fixed zero of odd order " + std::to_string(m) +
                                       ": corner convention is inconsistent");
            ++q.census.vertices;
            q.census.regular_vertices += m == 0;
            d.push_back(m - 1);
        } else if (v < image[v]) {
            if (vs.order(image[v]) != m)
                throw std::logic_error("sigma pairs vertices of different orders");
            if (m > 0)
                d.push_back(2 * m);
        }
    }
    for (int k = 0; k < q.census.edge_midpoints + q.census.square_centers; ++k)
        d.push_back(-1);
    q.signature = QuadraticSignature(std::move(d));

    int cover_genus = stratum_of(o).genus();
    int s = q.signature.sum();
    if (s != 2 * cover_genus - 2 - q.census.total() || (s + 4) % 4 != 0 || s < -4)
        throw std::logic_error("quotient census violates Riemann-Hurwitz");
    q.base_genus = (s + 4) / 4;
    if (2 * cover_genus - 2 != 2 * (2 * q.base_genus - 2) + q.signature.odd_count())
        throw std::logic_error("quotient census violates Riemann-Hurwitz");
    return q;
}

std::vector<QuotientStructure> quotient_structures(const Origami& o)
{
    std::vector<QuotientStructure> out;
    for (const auto& s : find_neg_involutions(o))
        out.push_back(quotient_signature(o, s));
    return out;
}

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

namespace {

enum Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct Step {
    int from, to;
    Side exit, entry;
};

// boundary parameter of the point at offset s (1 or 2, in thirds) on a side,
// running counterclockwise from the bottom-left corner
int boundary_point(Side side, int s)
{
    switch (side) {
    case Bottom: return s;
    case Right: return 3 + s;
    case Top: return 6 + (3 - s);
    case Left: return 9 + (3 - s);
    }
    return -1;
}

struct Visit {
    Side entry, exit;
};

using Loop = std::vector<std::pair<int, Visit>>;  // (square, sides)

bool chords_cross(int a1, int a2, int b1, int b2)
{
    if (a1 > a2)
        std::swap(a1, a2);
    bool in1 = a1 < b1 && b1 < a2;
    bool in2 = a1 < b2 && b2 < a2;
    return in1 != in2;
}

}  // namespace

Parity spin_parity(const Origami& o)
{
    auto sig = stratum_of(o);
    for (int m : sig.orders)
        if (m % 2 != 0)
            throw std::invalid_argument("spin parity needs all zeros of even order");
    int n = o.size();
    if (!is_connected(o))
        throw std::invalid_argument("disconnected surface");

    // dual graph: edge 2i crosses the right side of i, edge 2i+1 the top side
    auto src = [&](int e) { return e / 2; };
    auto dst = [&](int e) { return e % 2 == 0 ? o.r(e / 2) : o.u(e / 2); };
    auto rinv = o.r.inverse(), uinv = o.u.inverse();

    std::vector<int> parent(n, -1), parent_edge(n, -1), depth(n, 0);
    std::vector<char> tree_edge(2 * n, 0), seen(n, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int x = queue[h];
        int incident[4] = {2 * x, 2 * x + 1, 2 * rinv(x), 2 * uinv(x) + 1};
        for (int e : incident) {
            int y = src(e) == x ? dst(e) : src(e);
            if (!seen[y]) {
                seen[y] = 1;
                parent[y] = x;
                parent_edge[y] = e;
                depth[y] = depth[x] + 1;
                tree_edge[e] = 1;
                queue.push_back(y);
            }
        }
    }

    auto traverse = [&](int e, int from) {
        bool forward = src(e) == from;
        bool horizontal = e % 2 == 0;
        Step s;
        s.from = from;
        s.to = forward ? dst(e) : src(e);
        if (horizontal) {
            s.exit = forward ? Right : Left;
            s.entry = forward ? Left : Right;
        } else {
            s.exit = forward ? Top : Bottom;
            s.entry = forward ? Bottom : Top;
        }
        return s;
    };

    std::vector<Loop> loops;
    std::vector<int> qv;
    for (int e = 0; e < 2 * n; ++e) {
        if (tree_edge[e])
            continue;
        int a = src(e), b = dst(e);
        std::vector<Step> steps{traverse(e, a)};
        // tree path b -> a through the lowest common ancestor
        std::vector<int> up_b, up_a;
        int x = b, y = a;
        while (x != y) {
            if (depth[x] >= depth[y]) {
                up_b.push_back(x);
                x = parent[x];
            } else {
                up_a.push_back(y);
                y = parent[y];
            }
        }
        for (int z : up_b)
            steps.push_back(traverse(parent_edge[z], z));
        for (auto it = up_a.rbegin(); it != up_a.rend(); ++it)
            steps.push_back(traverse(parent_edge[*it], parent[*it]));

        Loop loop;
        int turning = 0;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const Step& in = steps[k];
            const Step& out = steps[(k + 1) % steps.size()];
            if (in.to != out.from)
                throw std::logic_error("broken loop in spin computation");
            int in_dir = (in.entry + 1) % 4;
            int out_dir = (out.exit + 3) % 4;
            int t = ((out_dir - in_dir) % 4 + 4) % 4;
            if (t == 2)
                throw std::logic_error("loop reverses inside a square");
            turning += t == 1 ? 1 : (t == 3 ? -1 : 0);
            loop.push_back({in.to, Visit{in.entry, out.exit}});
        }
        if (turning % 4 != 0)
            throw std::logic_error("loop turning is not a multiple of a full turn");
        int ind = turning / 4;
        qv.push_back(((ind + 1) % 2 + 2) % 2);
        loops.push_back(std::move(loop));
    }

    int k = static_cast<int>(loops.size());
    std::vector<std::vector<int>> at(n);  // loop visits per square
    std::vector<std::vector<Visit>> visit_of(k, std::vector<Visit>(n));
    std::vector<std::vector<char>> visits(k, std::vector<char>(n, 0));
    for (int a = 0; a < k; ++a)
        for (auto& [sq, v] : loops[a]) {
            visits[a][sq] = 1;
            visit_of[a][sq] = v;
        }
    std::vector<std::vector<int>> M(k, std::vector<int>(k, 0));
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            int c = 0;
            for (auto& [sq, va] : loops[a]) {
                if (!visits[b][sq])
                    continue;
                const Visit& vb = visit_of[b][sq];
                c += chords_cross(boundary_point(va.entry, 1), boundary_point(va.exit, 1),
                                  boundary_point(vb.entry, 2), boundary_point(vb.exit, 2));
            }
            M[a][b] = M[b][a] = c % 2;
        }
    }

    using Vec = std::vector<char>;
    auto dot = [&](const Vec& x, const Vec& y) {
        int s = 0;
        for (int i = 0; i < k; ++i)
            if (x[i])
                for (int j = 0; j < k; ++j)
                    s ^= (y[j] & M[i][j]);
        return s;
    };
    auto quad = [&](const Vec& x) {
        int s = 0;
        for (int i = 0; i < k; ++i) {
            if (!x[i])
                continue;
            s ^= qv[i];
            for (int j = i + 1; j < k; ++j)
                s ^= (x[j] & M[i][j]);
        }
        return s;
    };

    std::vector<Vec> pool;
    for (int i = 0; i < k; ++i) {
        Vec e(k, 0);
        e[i] = 1;
        pool.push_back(std::move(e));
    }
    int arf = 0, pairs = 0;
    while (true) {
        int ia = -1, ib = -1;
        for (int i = 0; i < static_cast<int>(pool.size()) && ia < 0; ++i)
            for (int j = i + 1; j < static_cast<int>(pool.size()); ++j)
                if (dot(pool[i], pool[j])) {
                    ia = i;
                    ib = j;
                    break;
                }
        if (ia < 0)
            break;
        Vec a = pool[ia], b = pool[ib];
        pool.erase(pool.begin() + ib);
        pool.erase(pool.begin() + ia);
        arf ^= quad(a) & quad(b);
        ++pairs;
        for (auto& c : pool) {
            int cb = dot(c, b), ca = dot(c, a);
            for (int i = 0; i < k; ++i)
                c[i] ^= (cb & a[i]) ^ (ca & b[i]);
        }
    }
    for (const auto& c : pool)
        if (quad(c))
            throw std::logic_error("quadratic form does not vanish on the radical");
    if (pairs != sig.genus())
        throw std::logic_error("symplectic rank differs from twice the genus");
    return arf ? Parity::Odd : Parity::Even;
}

}  // namespace tcurve
