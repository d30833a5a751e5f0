#include "tcurve/nonvarying.hpp"

#include "tcurve/lyapunov.hpp"
#include "tcurve/quotient.hpp"

#include <bit>
#include <map>
#include <stdexcept>

namespace tcurve {

std::string to_string(SolverMode m) { return m == SolverMode::A ? "A" : "B"; }

SolverMode parse_solver_mode(std::string_view text)
{
    if (text == "A" || text == "a")
        return SolverMode::A;
    if (text == "B" || text == "b")
        return SolverMode::B;
    throw std::invalid_argument("solver mode must be A or B, got '" + std::string(text) + "'");
}

std::set<Label> resolve_zero_set(const std::vector<std::string>& tokens, const DivisorClass& divisor)
{
    const PicBasis& basis = divisor.basis();
    std::set<Label> out;
    for (const auto& t : tokens) {
        if (t == "none" || t.empty())
            continue;
        if (t == "D") {
            const DivisorClass w = divisor.to_omega_basis();
            for (const auto& [l, c] : w.coords())
                if (l.is_boundary())
                    out.insert(l);
            continue;
        }
        Label l = parse_label(t);
        bool family = t.rfind("delta_", 0) == 0 && t.find('{') == std::string::npos && l.kind == Label::Delta;
        if (family) {
            bool any = false;
            for (const Label& b : basis.boundary_labels())
                if (b.kind == Label::Delta && b.index == l.index) {
                    out.insert(b);
                    any = true;
                }
            if (!any)
                throw std::invalid_argument("no boundary divisors of type " + t + " on this moduli space");
            continue;
        }
        out.insert(basis.canonical(l));
    }
    return out;
}

namespace {

// Linear system in unknowns x_0 = L+ and x_1.. = boundary degrees (all divided by chi).
class System {
public:
    explicit System(std::size_t unknowns) : u_(unknowns) {}

    // row holds u_ coefficients followed by a constant; the equation reads row . x + const = 0
    void add(const std::string& name, std::vector<Rational> row)
    {
        for (const auto& [col, piv] : pivots_) {
            Rational f = row[col];
            if (f != 0)
                for (std::size_t j = 0; j <= u_; ++j)
                    row[j] -= f * piv[j];
        }
        std::size_t col = 0;
        while (col < u_ && row[col] == 0)
            ++col;
        if (col == u_) {
            if (row[u_] != 0)
                residuals_.push_back({name, row[u_]});
            return;
        }
        Rational inv = 1 / row[col];
        for (auto& v : row)
            v *= inv;
        for (auto& [c, piv] : pivots_) {
            Rational f = piv[col];
            if (f != 0)
                for (std::size_t j = 0; j <= u_; ++j)
                    piv[j] -= f * row[j];
        }
        pivots_.emplace(col, std::move(row));
    }

    std::optional<Rational> value_of(std::size_t col) const
    {
        auto it = pivots_.find(col);
        if (it == pivots_.end())
            return std::nullopt;
        for (std::size_t j = 0; j < u_; ++j)
            if (j != col && it->second[j] != 0)
                return std::nullopt;
        return -it->second[u_];
    }

    const std::vector<Residual>& residuals() const { return residuals_; }

private:
    std::size_t u_;
    std::map<std::size_t, std::vector<Rational>> pivots_;
    std::vector<Residual> residuals_;
};

struct Setup {
    std::map<Label, std::size_t> column;  // non-zero boundary labels
    std::size_t unknowns = 1;
};

std::vector<Rational> linear_form(const DivisorClass& k, const Setup& s, const std::vector<int>& orders)
{
    std::vector<Rational> row(s.unknowns + 1, Rational(0));
    const PicBasis& basis = k.basis();
    const DivisorClass w = k.to_omega_basis();
    for (const auto& [l, a] : w.coords()) {
        switch (l.kind) {
        case Label::Lambda:
            row[0] += a / 2;
            break;
        case Label::Omega: {
            // C.omega_i = C.psi_i - sum_{i in S} C.delta_{0;S}, and C.psi_i = chi/(d_i+2)
            row[s.unknowns] += a / Rational(orders[l.index - 1] + 2);
            PointSet bit = PointSet(1) << (l.index - 1);
            for (PointSet set = 0; set <= basis.all_points(); ++set) {
                if ((set & bit) && std::popcount(set) >= 2) {
                    auto it = s.column.find(basis.canonical(Label::delta(0, set)));
                    if (it != s.column.end())
                        row[it->second] -= a;
                }
                if (set == basis.all_points())
                    break;
            }
            break;
        }
        case Label::DeltaIrr:
        case Label::Delta: {
            auto it = s.column.find(l);
            if (it != s.column.end())
                row[it->second] += a;
            break;
        }
        case Label::Psi:
            break;
        }
    }
    return row;
}

}  // namespace

NonvaryingResult nonvarying_solve(const NonvaryingProblem& p)
{
    const DivisorClass d = p.divisor.to_omega_basis();
    const int g = d.g(), m = d.n();
    QuadraticSignature sig(p.orders);
    if (sig.genus() != g)
        throw std::invalid_argument(sig.label() + " has genus " + std::to_string(sig.genus()) +
                                    " but the divisor lives on Mbar_{" + std::to_string(g) + "," +
                                    std::to_string(m) + "}");
    if (m > static_cast<int>(p.orders.size()))
        throw std::invalid_argument("the divisor marks more points than " + sig.label() + " has singularities");
    for (const Label& z : p.zero)
        if (!z.is_boundary() || !d.basis().is_canonical(z))
            throw std::invalid_argument("zero assumption " + to_string(z) + " is not a canonical boundary label");
    const Rational kappa = kappa_quadratic(sig);

    NonvaryingResult res;
    res.mode = p.mode;
    std::optional<Rational> fixed;

    if (p.mode == SolverMode::A) {
        Rational a_lambda = d[Label::lambda()];
        if (a_lambda == 0)
            throw std::invalid_argument("mode A needs a non-zero lambda coefficient");
        Rational sum = 0;
        for (const auto& [l, a] : d.coords()) {
            if (l.kind == Label::Omega)
                sum += a / Rational(p.orders[l.index - 1] + 2);
            else if (l.is_boundary() && !p.zero.count(l))
                throw std::invalid_argument("mode A needs " + to_string(l) + " among the zero assumptions");
        }
        fixed = -2 * sum / a_lambda;
    }

    Setup s;
    for (const Label& l : d.basis().boundary_labels())
        if (!p.zero.count(l))
            s.column.emplace(l, s.unknowns++);
    res.unknowns = s.unknowns;

    System sys(s.unknowns);
    if (fixed) {
        std::vector<Rational> row(s.unknowns + 1, Rational(0));
        row[0] = 1;
        row[s.unknowns] = -*fixed;
        sys.add("mode A value", std::move(row));
    }
    sys.add("divisor", linear_form(d, s, p.orders));
    for (const auto& rel : expand_relations(g, m))
        sys.add(rel.name, linear_form(rel.cls, s, p.orders));
    // Mumford's relation lives on Mbar_g, so genus 1 has no Noether equation
    if (g >= 2) {
        std::vector<Rational> row(s.unknowns + 1, Rational(0));
        for (const auto& [l, col] : s.column)
            if (l.kind == Label::DeltaIrr || (l.index >= 1 && l.index <= g - 1))
                row[col] = 1;
        row[0] = -6;
        row[s.unknowns] = 6 * kappa;
        sys.add("noether", std::move(row));
    }
    res.residuals = sys.residuals();

    res.L_plus = fixed ? fixed : sys.value_of(0);
    res.determined = res.L_plus.has_value();
    if (!res.determined) {
        res.message = "underdetermined: L+ is not fixed by the divisor, relations and Noether";
        return res;
    }
    res.c = *res.L_plus - kappa;
    if (*res.L_plus != 0)
        res.slope = 12 * *res.c / *res.L_plus;
    if (!res.residuals.empty())
        res.message = (p.mode == SolverMode::A ? "mode A value conflicts with '" : "inconsistent system at '") +
                      res.residuals.front().equation + "'";
    return res;
}

}  // namespace tcurve
