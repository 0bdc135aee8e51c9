#include "gl2/mat2.hpp"

#include <cctype>
#include <charconv>
#include <ostream>
#include <sstream>
#include <vector>

#include "gl2/arith.hpp"
#include "gl2/errors.hpp"

namespace gl2 {

namespace {

void check_modulus(std::uint32_t n) {
    if (n == 0 || n > kMaxModulus)
        throw std::invalid_argument("modulus out of range: " + std::to_string(n));
}

void same_modulus(const Mat2& x, const Mat2& y, const char* op) {
    if (x.modulus() != y.modulus())
        throw ModulusMismatch(std::string(op) + ": moduli " + std::to_string(x.modulus()) +
                              " and " + std::to_string(y.modulus()));
}

std::uint32_t crt(std::uint32_t r, std::uint32_t m, std::uint32_t s, std::uint32_t n) {
    // x = r + m * t with m * t = s - r (mod n)
    std::uint64_t t = std::uint64_t(mod(std::int64_t(s) - std::int64_t(r), n)) * inv_mod(m, n) % n;
    return std::uint32_t(r + std::uint64_t(m) * t);
}

}  // namespace

Mat2::Mat2(std::uint32_t n, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) : n_(n) {
    check_modulus(n);
    e_ = {mod(a, n), mod(b, n), mod(c, n), mod(d, n)};
}

Mat2 Mat2::identity(std::uint32_t n) { return Mat2(n, 1, 0, 0, 1); }

Mat2 Mat2::minus_identity(std::uint32_t n) { return Mat2(n, -1, 0, 0, -1); }

Mat2 Mat2::from_key(std::uint32_t n, std::uint64_t key) {
    using namespace keyops;
    return Mat2(n, ka(key), kb(key), kc(key), kd(key));
}

std::uint64_t Mat2::key() const { return keyops::pack(e_[0], e_[1], e_[2], e_[3]); }

bool Mat2::operator==(const Mat2& o) const {
    same_modulus(*this, o, "compare");
    return e_ == o.e_;
}

bool Mat2::operator<(const Mat2& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return e_ < o.e_;
}

std::string Mat2::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << '[' << m.a() << ',' << m.b() << ',' << m.c() << ',' << m.d() << ']';
}

Mat2 mul(const Mat2& x, const Mat2& y) {
    same_modulus(x, y, "mul");
    return Mat2::from_key(x.modulus(), keyops::mul(x.key(), y.key(), x.modulus()));
}

std::uint32_t det(const Mat2& x) { return keyops::det(x.key(), x.modulus()); }

std::uint32_t trace(const Mat2& x) { return keyops::trace(x.key(), x.modulus()); }

bool is_invertible(const Mat2& x) { return gcd(det(x), x.modulus()) == 1; }

Mat2 inv(const Mat2& x) {
    std::uint32_t d = det(x);
    if (gcd(d, x.modulus()) != 1)
        throw NotInvertible(x.str() + " has determinant " + std::to_string(d) + " mod " +
                            std::to_string(x.modulus()));
    return Mat2::from_key(x.modulus(), keyops::inv_with(x.key(), x.modulus(), inv_mod(d, x.modulus())));
}

Mat2 power(const Mat2& x, std::uint64_t k) {
    Mat2 r = Mat2::identity(x.modulus()), b = x;
    while (k) {
        if (k & 1) r = mul(r, b);
        b = mul(b, b);
        k >>= 1;
    }
    return r;
}

std::uint64_t element_order(const Mat2& x) {
    if (!is_invertible(x)) throw NotInvertible(x.str() + " has no multiplicative order");
    return keyops::order(x.key(), x.modulus());
}

Mat2 crt_combine(const Mat2& x, const Mat2& y) {
    std::uint32_t m = x.modulus(), n = y.modulus();
    if (gcd(m, n) != 1)
        throw NonCoprimeModuli("moduli " + std::to_string(m) + " and " + std::to_string(n));
    std::uint64_t mn = std::uint64_t(m) * n;
    if (mn > kMaxModulus) throw std::invalid_argument("combined modulus too large: " + std::to_string(mn));
    std::array<std::uint32_t, 4> r{};
    for (int i = 0; i < 4; ++i) r[i] = crt(x.entries()[i], m, y.entries()[i], n);
    return Mat2(static_cast<std::uint32_t>(mn), r[0], r[1], r[2], r[3]);
}

Mat2 reduce(const Mat2& x, std::uint32_t m) {
    if (m == 0 || x.modulus() % m)
        throw NotADivisor(std::to_string(m) + " does not divide " + std::to_string(x.modulus()));
    return Mat2(m, x.a(), x.b(), x.c(), x.d());
}

Mat2 lift(const Mat2& x, std::uint32_t target) {
    std::uint32_t m = x.modulus();
    if (target == 0 || target % m)
        throw NotADivisor(std::to_string(m) + " does not divide " + std::to_string(target));
    if (!is_invertible(x)) throw NotInvertible("cannot lift non-invertible " + x.str());
    std::uint32_t t1 = supported_part(target, m);
    // Same residues at the primes of m, identity elsewhere.
    Mat2 inner(t1, x.a(), x.b(), x.c(), x.d());
    if (t1 == target) return inner;
    return crt_combine(inner, Mat2::identity(target / t1));
}

Mat2 parse_mat2(std::string_view text, std::uint32_t n) {
    auto fail = [&](const std::string& why) {
        return ParseError("bad matrix literal '" + std::string(text) + "': " + why, 0);
    };
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (i >= text.size() || text[i] != '[') throw fail("expected '['");
    ++i;
    std::vector<std::int64_t> v;
    while (true) {
        skip();
        std::int64_t x = 0;
        const char* first = text.data() + i;
        const char* last = text.data() + text.size();
        if (first < last && *first == '+') ++first;
        auto [p, ec] = std::from_chars(first, last, x);
        if (ec != std::errc()) throw fail("expected integer");
        i = static_cast<std::size_t>(p - text.data());
        v.push_back(x);
        skip();
        if (i >= text.size()) throw fail("unterminated");
        if (text[i] == ',') {
            ++i;
            continue;
        }
        if (text[i] == ']') {
            ++i;
            break;
        }
        throw fail("unexpected character");
    }
    skip();
    if (i != text.size()) throw fail("trailing characters");
    if (v.size() != 4) throw fail("expected 4 entries");
    return Mat2(n, v[0], v[1], v[2], v[3]);
}

namespace keyops {

std::uint64_t inv(std::uint64_t x, std::uint32_t n) { return inv_with(x, n, inv_mod(det(x, n), n)); }

std::uint64_t order(std::uint64_t x, std::uint32_t n) {
    const std::uint64_t id = identity(n);
    std::uint64_t y = x, k = 1;
    while (y != id) {
        y = mul(y, x, n);
        ++k;
    }
    return k;
}

}  // namespace keyops

}  // namespace gl2
