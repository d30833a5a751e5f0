#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcurve {

// Permutation of {0,...,n-1}. Text I/O is 1-based. Composition acts on the
// left: (a * b)(i) = a(b(i)).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(int n);                    // identity
    explicit Permutation(std::vector<int> images);  // 0-based, validated

    static Permutation from_one_line(const std::vector<int>& one_based);

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_[i]; }
    const std::vector<int>& images() const { return img_; }

    Permutation inverse() const;
    Permutation pow(long long k) const;
    bool is_identity() const;

    std::vector<std::vector<int>> cycles() const;  // including fixed points
    std::vector<int> cycle_lengths() const;        // sorted descending
    std::uint64_t order() const;

    std::vector<int> one_line() const;  // 1-based

    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> img_;
};

// Parses "(a,b,...)(...)" with 1-based symbols. Symbols absent from the text
// are fixed. If n is not given it is the largest symbol seen.
Permutation parse_cycles(std::string_view text, std::optional<int> n = std::nullopt);

// Largest symbol in a cycle string, 0 if none. Used to infer n jointly.
int max_symbol(std::string_view text);

// Canonical output: each cycle starts at its least element, cycles ordered
// by that element, fixed points suppressed. Identity prints as "()".
std::string print_cycles(const Permutation& p);

}  // namespace tcurve
