#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace torsion {

using Integer = boost::multiprecision::cpp_int;

/// Base exception for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

inline Integer abs_value(const Integer& v) { return v < 0 ? Integer(-v) : v; }

inline Integer gcd(Integer a, Integer b) {
    a = abs_value(a);
    b = abs_value(b);
    while (b != 0) {
        Integer r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return abs_value(a / gcd(a, b) * b);
}

inline Integer ipow(Integer base, std::uint64_t exp) {
    Integer result = 1;
    while (exp > 0) {
        if (exp & 1u) result *= base;
        exp >>= 1u;
        if (exp) base *= base;
    }
    return result;
}

inline std::size_t bit_length(const Integer& v) {
    if (v == 0) return 0;
    return boost::multiprecision::msb(abs_value(v)) + 1;
}

/// Natural logarithm of a positive integer, accurate to double precision
/// for values far outside the double range.
inline double log_integer(const Integer& v) {
    if (v <= 0) throw InvalidArgument("log_integer: non-positive argument");
    std::size_t bits = bit_length(v);
    if (bits <= 53) return std::log(v.convert_to<double>());
    std::size_t shift = bits - 53;
    Integer top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline std::string to_string(const Integer& v) { return v.str(); }

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace torsion
