#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dgbv {

/// Exact rational scalar. Always stored in lowest terms with positive
/// denominator (cpp_rational canonicalizes on every operation).
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r)
{
    std::ostringstream os;
    os << r;
    return os.str();
}

/// Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed text.
inline Rational parse_rational(const std::string& text)
{
    auto bad = [&] { throw std::invalid_argument("not a rational literal: '" + text + "'"); };
    if (text.empty())
        bad();
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0)
            bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rational(0); // unreachable
}

inline int parity_of_degree(long degree)
{
    return static_cast<int>(((degree % 2) + 2) % 2);
}

} // namespace dgbv
