#ifndef MONOFORGE_CORE_RATIONAL_HPP
#define MONOFORGE_CORE_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace monoforge {

using rational = mpq_class;
using bigint = mpz_class;

inline bool is_zero(const rational& q) { return sgn(q) == 0; }
inline bool is_one(const rational& q) { return q == 1; }

std::string to_string(const rational& q);
rational parse_rational(const std::string& text);

// Exact n-th root of a rational if it exists in Q, nullopt otherwise.
// Negative bases are accepted for odd n.
std::optional<rational> exact_root(const rational& base, unsigned long n);

// base^(p/q) in Q when the q-th root is rational; nullopt otherwise.
std::optional<rational> exact_pow(const rational& base, long p, unsigned long q);

rational pow_int(const rational& base, long e);

// Generalized binomial coefficient C(a, k) for rational a.
rational binomial(const rational& a, unsigned long k);

// All rational roots (with multiplicity) of sum_i coeff[i] t^i.
// `fully_split` is set when deg(poly after removing rational roots) == 0,
// i.e. the polynomial factors completely over Q.
std::vector<rational> rational_roots(const std::vector<rational>& coeffs, bool* fully_split);

} // namespace monoforge

#endif
