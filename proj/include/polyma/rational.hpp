#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyma {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return numerator(q); }
inline Int rat_den(const Rat& q) { return denominator(q); }

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

/// Floor division for arbitrary-precision integers (cpp_int '/' truncates).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int rat_floor(const Rat& q) { return floor_div(rat_num(q), rat_den(q)); }

/// Renders a rational as "p/q", or "p" when the denominator is one.
inline std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << rat_num(q);
    if (rat_den(q) != 1) os << '/' << rat_den(q);
    return os.str();
}

/// Parses "p/q" or "p" (optional sign, arbitrary precision).
inline Rat rat_parse(const std::string& s) {
    auto bad = [&]() { throw std::invalid_argument("not a rational: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) bad();
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rat();  // unreachable
}

}  // namespace polyma
