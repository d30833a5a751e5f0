#include "tcurve/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace tcurve {

std::string to_string(const Rational& x)
{
    return numerator(x).str() + "/" + denominator(x).str();
}

namespace {

BigInt parse_int(std::string_view s, std::string_view whole)
{
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i == s.size())
        throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    auto s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(s, text));
    BigInt p = parse_int(trim(s.substr(0, slash)), text);
    BigInt q = parse_int(trim(s.substr(slash + 1)), text);
    if (q == 0)
        throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return Rational(p, q);
}

bool is_integer(const Rational& x) { return denominator(x) == 1; }

}  // namespace tcurve
