#pragma once

#include "tcurve/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcurve {

enum class FiltrationKind { Quadratic, Abelian };

struct ScheduleStep {
    bool base_trivial = false;
    int a = 0, b = 0;  // telescoping(a, b)
    int section = 0;   // 1-based singularity index
};

struct ReductionSchedule {
    std::string id;
    std::string label;  // stratum component, informational
    FiltrationKind kind = FiltrationKind::Quadratic;
    int genus = 0;
    std::vector<int> orders;
    std::vector<ScheduleStep> steps;
    std::optional<Rational> expected_c1, expected_L;

    void validate() const;  // throws std::invalid_argument
};

// sum_{i=0}^{a-1} (b - i), defined for 1 <= a <= b
BigInt telescoping_sum(int a, int b);

// S^2 per unit of chi: -1/(d+2) for quadratic orders, -1/(2(m+1)) for abelian ones
Rational section_self_intersection(FiltrationKind kind, int order);

Rational filtration_c1(const ReductionSchedule& s);

// quadratic: L+ = 6g - 6 + 2 c1 - 12 kappa;  abelian: L = g + 2 c1
Rational L_from_c1(const Rational& c1, const ReductionSchedule& s);

// "[case id]" blocks of key = value lines; "step = telescoping a b Sk" or "step = base-trivial"
std::vector<ReductionSchedule> parse_schedules(std::string_view text);

}  // namespace tcurve
