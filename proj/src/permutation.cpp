#include "tcurve/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace tcurve {

Permutation::Permutation(int n) : img_(n)
{
    std::iota(img_.begin(), img_.end(), 0);
}

Permutation::Permutation(std::vector<int> images) : img_(std::move(images))
{
    std::vector<char> seen(img_.size(), 0);
    for (int x : img_) {
        if (x < 0 || x >= static_cast<int>(img_.size()) || seen[x])
            throw std::invalid_argument("not a bijection");
        seen[x] = 1;
    }
}

Permutation Permutation::from_one_line(const std::vector<int>& one_based)
{
    std::vector<int> v(one_based.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = one_based[i] - 1;
    return Permutation(std::move(v));
}

Permutation Permutation::inverse() const
{
    std::vector<int> inv(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i)
        inv[img_[i]] = static_cast<int>(i);
    Permutation p;
    p.img_ = std::move(inv);
    return p;
}

Permutation Permutation::pow(long long k) const
{
    // walk each cycle once
    std::vector<int> out(img_.size());
    for (const auto& c : cycles()) {
        long long len = static_cast<long long>(c.size());
        long long s = ((k % len) + len) % len;
        for (std::size_t j = 0; j < c.size(); ++j)
            out[c[j]] = c[(j + s) % len];
    }
    Permutation p;
    p.img_ = std::move(out);
    return p;
}

bool Permutation::is_identity() const
{
    for (std::size_t i = 0; i < img_.size(); ++i)
        if (img_[i] != static_cast<int>(i))
            return false;
    return true;
}

std::vector<std::vector<int>> Permutation::cycles() const
{
    std::vector<std::vector<int>> out;
    std::vector<char> seen(img_.size(), 0);
    for (std::size_t s = 0; s < img_.size(); ++s) {
        if (seen[s])
            continue;
        std::vector<int> c;
        for (int x = static_cast<int>(s); !seen[x]; x = img_[x]) {
            seen[x] = 1;
            c.push_back(x);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<int> Permutation::cycle_lengths() const
{
    std::vector<int> out;
    for (const auto& c : cycles())
        out.push_back(static_cast<int>(c.size()));
    std::sort(out.rbegin(), out.rend());
    return out;
}

std::uint64_t Permutation::order() const
{
    std::uint64_t o = 1;
    for (const auto& c : cycles())
        o = std::lcm(o, static_cast<std::uint64_t>(c.size()));
    return o;
}

std::vector<int> Permutation::one_line() const
{
    std::vector<int> v(img_.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = img_[i] + 1;
    return v;
}

Permutation operator*(const Permutation& a, const Permutation& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("size mismatch in composition");
    std::vector<int> out(a.img_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a.img_[b.img_[i]];
    Permutation p;
    p.img_ = std::move(out);
    return p;
}

namespace {

struct Token {
    enum Kind { Open, Close, Comma, Number } kind;
    long long value = 0;
};

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(') {
            out.push_back({Token::Open});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::Close});
            ++i;
        } else if (c == ',') {
            out.push_back({Token::Comma});
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            long long v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + (text[i] - '0');
                if (v > 1'000'000)
                    throw std::invalid_argument("symbol too large in cycle notation");
                ++i;
            }
            out.push_back({Token::Number, v});
        } else {
            throw std::invalid_argument(std::string("unexpected character '") + c +
                                        "' in cycle notation");
        }
    }
    return out;
}

std::vector<std::vector<long long>> parse_cycle_list(std::string_view text)
{
    auto toks = tokenize(text);
    std::vector<std::vector<long long>> cycles;
    std::size_t i = 0;
    while (i < toks.size()) {
        if (toks[i].kind != Token::Open)
            throw std::invalid_argument("expected '(' in cycle notation");
        ++i;
        std::vector<long long> c;
        bool want_number = true;
        while (true) {
            if (i >= toks.size())
                throw std::invalid_argument("unterminated cycle");
            const auto& t = toks[i++];
            if (t.kind == Token::Close) {
                if (want_number && !c.empty())
                    throw std::invalid_argument("dangling ',' in cycle");
                break;
            }
            if (want_number) {
                if (t.kind != Token::Number)
                    throw std::invalid_argument("expected a positive integer in cycle");
                if (t.value < 1)
                    throw std::invalid_argument("symbols are positive integers");
                c.push_back(t.value);
                want_number = false;
            } else {
                if (t.kind != Token::Comma)
                    throw std::invalid_argument("expected ',' or ')' in cycle");
                want_number = true;
            }
        }
        cycles.push_back(std::move(c));
    }
    return cycles;
}

}  // namespace

int max_symbol(std::string_view text)
{
    long long m = 0;
    for (const auto& c : parse_cycle_list(text))
        for (long long x : c)
            m = std::max(m, x);
    return static_cast<int>(m);
}

Permutation parse_cycles(std::string_view text, std::optional<int> n)
{
    auto cycles = parse_cycle_list(text);
    long long m = 0;
    for (const auto& c : cycles)
        for (long long x : c)
            m = std::max(m, x);
    int size = n ? *n : static_cast<int>(m);
    if (n && m > *n)
        throw std::invalid_argument("symbol " + std::to_string(m) + " exceeds n = " +
                                    std::to_string(*n));
    std::vector<int> img(size);
    std::iota(img.begin(), img.end(), 0);
    std::vector<char> used(size, 0);
    for (const auto& c : cycles) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            int a = static_cast<int>(c[j]) - 1;
            if (used[a])
                throw std::invalid_argument("repeated symbol " + std::to_string(c[j]));
            used[a] = 1;
            img[a] = static_cast<int>(c[(j + 1) % c.size()]) - 1;
        }
    }
    return Permutation(std::move(img));
}

std::string print_cycles(const Permutation& p)
{
    std::string out;
    for (const auto& c : p.cycles()) {
        if (c.size() < 2)
            continue;
        out += '(';
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (j)
                out += ',';
            out += std::to_string(c[j] + 1);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

}  // namespace tcurve
