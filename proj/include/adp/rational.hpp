#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace adp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rat &r) {
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Parses "n" or "n/m" with m > 0. Throws std::invalid_argument on bad input.
inline Rat parse_rational(const std::string &text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(text));
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den <= 0)
            throw std::invalid_argument("rational with non-positive denominator: " + text);
        return Rat(num, den);
    } catch (const std::runtime_error &) {
        throw std::invalid_argument("malformed rational: " + text);
    }
}

} // namespace adp
