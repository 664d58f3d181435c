#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "liouville/errors.hpp"

namespace liouville {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool rat_is_integer(const Rat& r) { return rat_den(r) == 1; }

inline std::string rat_to_string(const Rat& r) { return r.str(); }

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

/// r^k for integer k (k may be negative; r must be nonzero then).
inline Rat rat_pow(const Rat& r, long long k) {
    if (k == 0) return Rat(1);
    if (r == 0) {
        if (k < 0) throw domain_error("0 raised to a negative power");
        return Rat(0);
    }
    Rat base = k > 0 ? r : Rat(1) / r;
    unsigned long long n = k > 0 ? static_cast<unsigned long long>(k)
                                 : static_cast<unsigned long long>(-k);
    Rat acc(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

inline Rat rat_from_string(const std::string& s) {
    try {
        return Rat(s);
    } catch (const std::exception&) {
        throw parse_error("not a rational number: '" + s + "'", 0);
    }
}

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

} // namespace liouville
