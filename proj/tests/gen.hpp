#pragma once
// Small generators shared by the property tests.
#include <cstdint>
#include <random>
#include <vector>

#include "gl2/arith.hpp"
#include "gl2/mat2.hpp"

namespace gen {

inline std::mt19937_64& rng() {
    static std::mt19937_64 r(0x5eed1234u);
    return r;
}

inline std::uint32_t uniform(std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng());
}

inline gl2::Mat2 any_matrix(std::uint32_t n) {
    return {n, uniform(0, n - 1), uniform(0, n - 1), uniform(0, n - 1), uniform(0, n - 1)};
}

// Rejection sampling; the density of GL2 in M2 is at least 1/4 for n <= 10^4.
inline gl2::Mat2 invertible(std::uint32_t n) {
    for (;;) {
        auto m = any_matrix(n);
        if (gl2::gcd(gl2::det(m), n) == 1) return m;
    }
}

// Every element of GL(2, Z/nZ), by brute force over all quadruples.
inline std::vector<gl2::Mat2> all_gl2(std::uint32_t n) {
    std::vector<gl2::Mat2> out;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            for (std::uint32_t c = 0; c < n; ++c)
                for (std::uint32_t d = 0; d < n; ++d) {
                    gl2::Mat2 m(n, a, b, c, d);
                    if (gl2::gcd(gl2::det(m), n) == 1) out.push_back(m);
                }
    return out;
}

// Coprime pair (m, n) with m, n >= 2 and m * n <= limit.
inline std::pair<std::uint32_t, std::uint32_t> coprime_pair(std::uint32_t limit) {
    for (;;) {
        std::uint32_t m = uniform(2, 40), n = uniform(2, 40);
        if (m * n <= limit && gl2::gcd(m, n) == 1) return {m, n};
    }
}

}  // namespace gen
