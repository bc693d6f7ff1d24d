#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trisum {

// Exact rational arithmetic.  Inputs are restricted to machine-word
// numerators/denominators; intermediate sums and products may grow
// arbitrarily, hence the multiprecision backing.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    return Rational(num, den);
}

// Every double is exactly m * 2^e, so the conversion below is exact.
inline Rational rational_from_double(double x) {
    return Rational(x);
}

inline double rational_to_double(const Rational& r) {
    return r.template convert_to<double>();
}

// "p/q" form used in JSON output (integers serialized without "/1").
inline std::string rational_to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline bool fits_word(const Rational& r) {
    static const BigInt lo = std::numeric_limits<std::int64_t>::min();
    static const BigInt hi = std::numeric_limits<std::int64_t>::max();
    return numerator(r) >= lo && numerator(r) <= hi &&
           denominator(r) >= lo && denominator(r) <= hi;
}

}  // namespace trisum
