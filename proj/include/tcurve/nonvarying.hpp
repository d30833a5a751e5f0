#pragma once

#include "tcurve/pic.hpp"
#include "tcurve/rational.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tcurve {

enum class SolverMode { A, B };
std::string to_string(SolverMode m);
SolverMode parse_solver_mode(std::string_view text);

// Tokens: "D" (every boundary label of the divisor), "none", "delta_irr",
// "delta_i" (all delta_{i;S}), or an explicit label such as "delta_{0;{1,2}}".
std::set<Label> resolve_zero_set(const std::vector<std::string>& tokens, const DivisorClass& divisor);

struct NonvaryingProblem {
    // Quadratic singularity orders; the first divisor.n() entries are the marked ones.
    std::vector<int> orders;
    DivisorClass divisor{1, 1};
    SolverMode mode = SolverMode::A;
    std::set<Label> zero;  // boundary labels the curve is assumed to miss
};

struct Residual {
    std::string equation;
    Rational value;  // left side minus right side after elimination
};

struct NonvaryingResult {
    SolverMode mode = SolverMode::A;
    bool determined = false;
    std::optional<Rational> L_plus, c, slope;
    // Equations that contradict the ones before them. In mode A they come
    // from checking the answer against the relations and Noether.
    std::vector<Residual> residuals;
    std::size_t unknowns = 0;
    std::string message;
    bool consistent() const { return residuals.empty(); }
};

// Mode A: L+ = -(2/a_lambda) sum a_i/(d_i+2), all boundary terms of D assumed zero.
// Mode B: exact elimination over L and the remaining boundary degrees.
// Throws std::invalid_argument for ill-posed input.
NonvaryingResult nonvarying_solve(const NonvaryingProblem& p);

}  // namespace tcurve
