#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "qfact/errors.hpp"

namespace qfact {

// Every number in the pipeline is exact. Costs are integer polynomials and
// Ising parameters live on the half-integer lattice; chain parameter setting
// divides fields further, so the working type is an exact rational.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }
inline bool is_half_integer(const Rat& r) {
    const Int d = rat_den(r);
    return d == 1 || d == 2;
}

// 2*r as an integer; the canonical wire encoding for half-integers.
inline Int half_numerator(const Rat& r) {
    Rat two_r = r * 2;
    if (!is_integer(two_r))
        throw InternalError("value " + std::string(r.str()) + " is not a half-integer");
    return rat_num(two_r);
}

inline Int to_integer(const Rat& r) {
    if (!is_integer(r)) throw InternalError("value " + std::string(r.str()) + " is not an integer");
    return rat_num(r);
}

// Exact decimal rendering for lattice values ("-84", "130.5", "32.625", ...).
// Falls back to "p/q" for denominators that are not powers of two.
inline std::string rat_to_string(const Rat& r) {
    Int den = rat_den(r);
    if (den == 1) return rat_num(r).str();
    Int d = den;
    int shifts = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++shifts;
    }
    if (d != 1) return rat_num(r).str() + "/" + rat_den(r).str();
    Int num = rat_num(r);
    bool neg = num < 0;
    if (neg) num = -num;
    Int scale = 1;
    for (int i = 0; i < shifts; ++i) scale *= 5;  // 10^k / 2^k
    Int scaled = num * scale;
    Int pow10 = 1;
    for (int i = 0; i < shifts; ++i) pow10 *= 10;
    Int whole = scaled / pow10;
    Int frac = scaled % pow10;
    std::string fs = frac.str();
    while ((int)fs.size() < shifts) fs.insert(fs.begin(), '0');
    return (neg ? "-" : "") + whole.str() + "." + fs;
}

inline double rat_to_double(const Rat& r) { return static_cast<double>(r); }

}  // namespace qfact
