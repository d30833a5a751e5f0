#pragma once

#include "oracle.hpp"

#include "tcurve/harness.hpp"
#include "tcurve/origami.hpp"

#include <stdexcept>
#include <string>

namespace testing {

inline const std::vector<tcurve::DatasetRow>& dataset()
{
    static const auto rows = tcurve::parse_dataset(tcurve::read_text_file(tcurve::default_data_dir() / "varying_examples.txt"));
    return rows;
}

inline const tcurve::DatasetRow& row(const std::string& id)
{
    for (const auto& r : dataset())
        if (r.id == id)
            return r;
    throw std::out_of_range("no dataset row " + id);
}

inline tcurve::Origami surface(const tcurve::DatasetRow& r)
{
    return tcurve::parse_surface("r = " + r.r + "\nu = " + r.u + "\n");
}

inline tcurve::Origami surface(const std::string& r, const std::string& u, int n = 0)
{
    std::string text = n ? "n = " + std::to_string(n) + "\n" : std::string();
    return tcurve::parse_surface(text + "r = " + r + "\nu = " + u + "\n");
}

inline oracle::Pair to_pair(const tcurve::Origami& o) { return {o.r.images(), o.u.images()}; }

inline tcurve::Origami from_pair(const oracle::Pair& p)
{
    return tcurve::Origami(tcurve::Permutation(p.r), tcurve::Permutation(p.u));
}

inline int oracle_genus(const oracle::Pair& o)
{
    auto v = oracle::compose(oracle::compose(o.r, o.u), oracle::compose(oracle::inverse(o.r), oracle::inverse(o.u)));
    int s = 0;
    for (int len : oracle::cycle_lengths(v))
        s += len - 1;
    return s / 2 + 1;
}

}  // namespace testing
