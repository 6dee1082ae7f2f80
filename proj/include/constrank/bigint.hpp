#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace constrank {

using BigInt = boost::multiprecision::cpp_int;

BigInt ipow(std::uint64_t base, unsigned exponent);

/// Largest k with q^k | x. x must be nonzero and q >= 2.
unsigned q_adic_valuation(const BigInt& x, std::uint64_t q);

/// Number of k-dimensional subspaces of an N-dimensional space over GF(q).
BigInt gaussian_binomial(unsigned n, unsigned k, std::uint64_t q);

}  // namespace constrank
