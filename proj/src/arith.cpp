#include "gl2/arith.hpp"

#include "gl2/errors.hpp"

namespace gl2 {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint32_t mod(std::int64_t a, std::uint32_t n) {
    std::int64_t r = a % static_cast<std::int64_t>(n);
    if (r < 0) r += n;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t inv_mod(std::int64_t a, std::uint32_t n) {
    if (n == 1) return 0;
    std::int64_t r0 = n, r1 = mod(a, n), s0 = 0, s1 = 1;
    while (r1) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw NotInvertible(std::to_string(a) + " is not a unit mod " + std::to_string(n));
    return mod(s0, n);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> factor(std::uint64_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(static_cast<std::uint32_t>(p), e);
    }
    if (n > 1) out.emplace_back(static_cast<std::uint32_t>(n), 1);
    return out;
}

std::vector<std::uint32_t> divisors(std::uint32_t n) {
    std::vector<std::uint32_t> lo, hi;
    for (std::uint32_t d = 1; static_cast<std::uint64_t>(d) * d <= n; ++d) {
        if (n % d) continue;
        lo.push_back(d);
        if (d != n / d) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

std::vector<std::uint32_t> units(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    if (n == 1) return {0};
    for (std::uint32_t u = 1; u < n; ++u)
        if (gcd(u, n) == 1) out.push_back(u);
    return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : factor(n)) r = r / p * (p - 1);
    return r;
}

std::uint64_t gl2_order(std::uint32_t n) {
    std::uint64_t r = 1;
    for (auto [p, e] : factor(n)) {
        std::uint64_t q = 1;
        for (std::uint32_t i = 1; i < e; ++i) q *= p;
        std::uint64_t pp = p;
        // p^{4(e-1)} (p^2 - 1)(p^2 - p)
        r *= q * q * q * q * (pp * pp - 1) * (pp * pp - pp);
    }
    return r;
}

std::uint64_t sl2_order(std::uint32_t n) { return gl2_order(n) / euler_phi(n); }

std::uint32_t supported_part(std::uint32_t n, std::uint32_t m) {
    std::uint32_t r = 1;
    for (auto [p, e] : factor(n)) {
        if (m % p) continue;
        for (std::uint32_t i = 0; i < e; ++i) r *= p;
    }
    return r;
}

}  // namespace gl2
