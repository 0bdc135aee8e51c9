#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gl2 {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

// Inverse of a modulo n; throws NotInvertible when gcd(a, n) != 1.
std::uint32_t inv_mod(std::int64_t a, std::uint32_t n);

std::uint32_t mod(std::int64_t a, std::uint32_t n);

// (prime, exponent) pairs in increasing prime order.
std::vector<std::pair<std::uint32_t, std::uint32_t>> factor(std::uint64_t n);

std::vector<std::uint32_t> divisors(std::uint32_t n);

std::vector<std::uint32_t> units(std::uint32_t n);

std::uint64_t euler_phi(std::uint64_t n);

// |GL(2, Z/nZ)|
std::uint64_t gl2_order(std::uint32_t n);

// |SL(2, Z/nZ)|
std::uint64_t sl2_order(std::uint32_t n);

// Largest divisor of n whose primes all divide m.
std::uint32_t supported_part(std::uint32_t n, std::uint32_t m);

}  // namespace gl2
