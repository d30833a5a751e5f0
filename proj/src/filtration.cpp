#include "tcurve/filtration.hpp"

#include "tcurve/lyapunov.hpp"
#include "tcurve/quotient.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace tcurve {

BigInt telescoping_sum(int a, int b)
{
    if (a < 1 || a > b)
        throw std::invalid_argument("telescoping(" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") needs 1 <= a <= b");
    BigInt s = 0;
    for (int i = 0; i < a; ++i)
        s += b - i;
    return s;
}

Rational section_self_intersection(FiltrationKind kind, int order)
{
    if (kind == FiltrationKind::Quadratic) {
        if (order == -2)
            throw std::invalid_argument("order -2 has no section self-intersection");
        return Rational(-1, order + 2);
    }
    if (order < 0)
        throw std::invalid_argument("abelian zero orders are non-negative");
    return Rational(-1, 2 * (order + 1));
}

void ReductionSchedule::validate() const
{
    auto fail = [&](const std::string& why) { return std::invalid_argument("schedule '" + id + "': " + why); };
    if (orders.empty())
        throw fail("no singularity orders");
    if (kind == FiltrationKind::Quadratic) {
        if (QuadraticSignature(orders).genus() != genus)
            throw fail("orders do not have genus " + std::to_string(genus));
    } else {
        int sum = 0;
        for (int m : orders) {
            if (m < 0)
                throw fail("negative abelian order");
            sum += m;
        }
        if (sum != 2 * genus - 2)
            throw fail("orders do not have genus " + std::to_string(genus));
    }
    if (steps.empty())
        throw fail("no steps");
    for (const auto& st : steps) {
        if (st.base_trivial)
            continue;
        if (st.section < 1 || st.section > static_cast<int>(orders.size()))
            throw fail("section S" + std::to_string(st.section) + " out of range");
        if (st.a < 1 || st.a > st.b)
            throw fail("telescoping(" + std::to_string(st.a) + ", " + std::to_string(st.b) + ") needs 1 <= a <= b");
    }
}

Rational filtration_c1(const ReductionSchedule& s)
{
    s.validate();
    Rational c1 = 0;
    for (const auto& st : s.steps)
        if (!st.base_trivial)
            c1 += Rational(telescoping_sum(st.a, st.b)) * section_self_intersection(s.kind, s.orders[st.section - 1]);
    return c1;
}

Rational L_from_c1(const Rational& c1, const ReductionSchedule& s)
{
    if (s.kind == FiltrationKind::Abelian)
        return s.genus + 2 * c1;
    return 6 * s.genus - 6 + 2 * c1 - 12 * kappa_quadratic(QuadraticSignature(s.orders));
}

namespace {

std::string trim(std::string s)
{
    auto sp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && sp(s.back()))
        s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && sp(s[i]))
        ++i;
    return s.substr(i);
}

std::vector<int> parse_int_list(const std::string& v)
{
    std::vector<int> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        std::size_t used = 0;
        int x = std::stoi(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument("bad integer '" + tok + "'");
        out.push_back(x);
    }
    return out;
}

ScheduleStep parse_step(const std::string& v)
{
    std::istringstream in(v);
    std::string kind;
    in >> kind;
    ScheduleStep st;
    if (kind == "base-trivial") {
        st.base_trivial = true;
        return st;
    }
    std::string sec;
    if (kind != "telescoping" || !(in >> st.a >> st.b >> sec) || sec.size() < 2 || sec[0] != 'S')
        throw std::invalid_argument("malformed step '" + v + "'");
    st.section = std::stoi(sec.substr(1));
    std::string extra;
    if (in >> extra)
        throw std::invalid_argument("malformed step '" + v + "'");
    return st;
}

}  // namespace

std::vector<ReductionSchedule> parse_schedules(std::string_view text)
{
    std::vector<ReductionSchedule> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        auto where = [&] { return "schedule line " + std::to_string(lineno) + ": "; };
        if (line.front() == '[') {
            if (line.back() != ']' || line.rfind("[case ", 0) != 0)
                throw std::invalid_argument(where() + "expected '[case <id>]'");
            out.emplace_back();
            out.back().id = trim(line.substr(6, line.size() - 7));
            continue;
        }
        if (out.empty())
            throw std::invalid_argument(where() + "key outside a case block");
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(where() + "expected 'key = value'");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        auto& s = out.back();
        try {
            if (key == "label")
                s.label = val;
            else if (key == "kind") {
                if (val == "quadratic")
                    s.kind = FiltrationKind::Quadratic;
                else if (val == "abelian")
                    s.kind = FiltrationKind::Abelian;
                else
                    throw std::invalid_argument("kind must be quadratic or abelian");
            } else if (key == "genus")
                s.genus = std::stoi(val);
            else if (key == "orders")
                s.orders = parse_int_list(val);
            else if (key == "step")
                s.steps.push_back(parse_step(val));
            else if (key == "c1")
                s.expected_c1 = parse_rational(val);
            else if (key == "L")
                s.expected_L = parse_rational(val);
            else
                throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where() + e.what());
        } catch (const std::out_of_range&) {
            throw std::invalid_argument(where() + "number out of range");
        }
    }
    for (const auto& s : out)
        s.validate();
    return out;
}

}  // namespace tcurve
