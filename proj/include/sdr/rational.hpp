#ifndef SDR_RATIONAL_HPP
#define SDR_RATIONAL_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sdr {

using Integer = mpz_class;
using Rational = mpq_class;

// Degree/order value standing in for minus infinity.
inline constexpr int kNegInf = std::numeric_limits<int>::min();

inline bool is_neg_inf(int v) { return v == kNegInf; }

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Accepts "p", "-p", "p/q".
Rational parse_rational(std::string_view text);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

std::int64_t to_int64(const Integer& z);

Integer binomial(unsigned long n, unsigned long k);

std::string order_to_string(int v);

}  // namespace sdr

#endif
