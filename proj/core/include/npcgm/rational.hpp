#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

namespace npcgm {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int num(const Rat& q) { return Int(boost::multiprecision::numerator(q)); }
inline Int den(const Rat& q) { return Int(boost::multiprecision::denominator(q)); }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline int sgn(const Int& a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }
inline int sgn(const Rat& a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }
inline int sgn(long a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }

// gcd of the entries, nonnegative; 0 for the zero vector.
Int content(const std::vector<Int>& v);

// Scale a rational vector by the smallest positive rational that makes it an
// integer vector with entry gcd 1. Zero vectors pass through unchanged.
std::vector<Int> primitive_integer_vector(const std::vector<Rat>& v);

std::string to_string(const Rat& q);

}  // namespace npcgm
