#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace gl2 {

// Largest modulus supported; entries must fit in 16 bits for key packing.
inline constexpr std::uint32_t kMaxModulus = 10000;

class Mat2 {
public:
    Mat2() = default;
    // Entries may be negative or out of range; they are reduced mod n.
    Mat2(std::uint32_t n, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

    static Mat2 identity(std::uint32_t n);
    static Mat2 minus_identity(std::uint32_t n);
    static Mat2 from_key(std::uint32_t n, std::uint64_t key);

    std::uint32_t modulus() const { return n_; }
    std::uint32_t a() const { return e_[0]; }
    std::uint32_t b() const { return e_[1]; }
    std::uint32_t c() const { return e_[2]; }
    std::uint32_t d() const { return e_[3]; }
    const std::array<std::uint32_t, 4>& entries() const { return e_; }

    // Packs the four residues into 16-bit lanes. ~0 is never produced.
    std::uint64_t key() const;

    bool operator==(const Mat2& o) const;
    bool operator!=(const Mat2& o) const { return !(*this == o); }
    // Ordering by (modulus, a, b, c, d); used for deterministic output only.
    bool operator<(const Mat2& o) const;

    std::string str() const;

private:
    std::uint32_t n_ = 1;
    std::array<std::uint32_t, 4> e_{0, 0, 0, 0};
};

std::ostream& operator<<(std::ostream& os, const Mat2& m);

Mat2 mul(const Mat2& x, const Mat2& y);
std::uint32_t det(const Mat2& x);
std::uint32_t trace(const Mat2& x);
bool is_invertible(const Mat2& x);
Mat2 inv(const Mat2& x);
Mat2 power(const Mat2& x, std::uint64_t k);
std::uint64_t element_order(const Mat2& x);

Mat2 crt_combine(const Mat2& x, const Mat2& y);
Mat2 reduce(const Mat2& x, std::uint32_t m);
Mat2 lift(const Mat2& x, std::uint32_t target);

// Parses "[a,b,c,d]" (whitespace tolerated, negatives allowed) mod n.
Mat2 parse_mat2(std::string_view text, std::uint32_t n);

// Key-level arithmetic for hot loops; no modulus checks.
namespace keyops {

inline std::uint64_t pack(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
    return (std::uint64_t(a) << 48) | (std::uint64_t(b) << 32) | (std::uint64_t(c) << 16) | d;
}
inline std::uint32_t ka(std::uint64_t k) { return std::uint32_t(k >> 48); }
inline std::uint32_t kb(std::uint64_t k) { return std::uint32_t(k >> 32) & 0xffff; }
inline std::uint32_t kc(std::uint64_t k) { return std::uint32_t(k >> 16) & 0xffff; }
inline std::uint32_t kd(std::uint64_t k) { return std::uint32_t(k) & 0xffff; }

inline std::uint64_t mul(std::uint64_t x, std::uint64_t y, std::uint32_t n) {
    std::uint64_t a = ka(x), b = kb(x), c = kc(x), d = kd(x);
    std::uint64_t e = ka(y), f = kb(y), g = kc(y), h = kd(y);
    return pack(std::uint32_t((a * e + b * g) % n), std::uint32_t((a * f + b * h) % n),
                std::uint32_t((c * e + d * g) % n), std::uint32_t((c * f + d * h) % n));
}

inline std::uint32_t det(std::uint64_t x, std::uint32_t n) {
    std::uint64_t ad = std::uint64_t(ka(x)) * kd(x) % n;
    std::uint64_t bc = std::uint64_t(kb(x)) * kc(x) % n;
    return std::uint32_t((ad + n - bc) % n);
}

inline std::uint32_t trace(std::uint64_t x, std::uint32_t n) {
    return (ka(x) + kd(x)) % n;
}

inline std::uint64_t identity(std::uint32_t n) {
    std::uint32_t one = 1 % n;
    return pack(one, 0, 0, one);
}

// Inverse given the modular inverse of the determinant.
inline std::uint64_t inv_with(std::uint64_t x, std::uint32_t n, std::uint32_t dinv) {
    std::uint64_t di = dinv;
    return pack(std::uint32_t(kd(x) * di % n), std::uint32_t((n - kb(x)) % n * di % n),
                std::uint32_t((n - kc(x)) % n * di % n), std::uint32_t(ka(x) * di % n));
}

std::uint64_t inv(std::uint64_t x, std::uint32_t n);
std::uint64_t order(std::uint64_t x, std::uint32_t n);

}  // namespace keyops

}  // namespace gl2
