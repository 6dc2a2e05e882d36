#ifndef BRANCHTOR_RATIONAL_HPP
#define BRANCHTOR_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace branchtor {

// GMP keeps mpq_class canonical after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "-p", "p/q". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace branchtor

#endif
