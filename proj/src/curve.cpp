#include "gl2/curve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "gl2/errors.hpp"

namespace gl2 {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty() || s.find_first_not_of("+-0123456789/") != std::string::npos)
        throw ParseError("bad rational '" + s + "'", 0);
    if (s[0] == '+') s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational '" + std::string(text) + "'", 0);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", 0);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

// ------------------------------------------------------------------ curve

EllipticCurve::EllipticCurve(Rational a1_, Rational a2_, Rational a3_, Rational a4_, Rational a6_,
                             std::string label_)
    : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)), a4(std::move(a4_)), a6(std::move(a6_)),
      label(std::move(label_)) {
    if (discriminant() == 0) throw SingularCurve("singular model " + str());
}

EllipticCurve EllipticCurve::short_form(Rational a, Rational b, std::string label) {
    return EllipticCurve(0, 0, 0, std::move(a), std::move(b), std::move(label));
}

Rational EllipticCurve::b2() const { return a1 * a1 + 4 * a2; }
Rational EllipticCurve::b4() const { return 2 * a4 + a1 * a3; }
Rational EllipticCurve::b6() const { return a3 * a3 + 4 * a6; }
Rational EllipticCurve::b8() const {
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}
Rational EllipticCurve::c4() const { return b2() * b2() - 24 * b4(); }
Rational EllipticCurve::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
Rational EllipticCurve::discriminant() const {
    Rational B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

std::string EllipticCurve::str() const {
    std::ostringstream os;
    if (!label.empty()) os << label << ' ';
    os << '[' << a1 << ',' << a2 << ',' << a3 << ',' << a4 << ',' << a6 << ']';
    return os.str();
}

bool Point::operator==(const Point& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
}

std::string Point::str() const {
    if (infinity) return "O";
    std::ostringstream os;
    os << '(' << x << ',' << y << ')';
    return os.str();
}

bool on_curve(const EllipticCurve& e, const Point& p) {
    if (p.infinity) return true;
    const Rational& x = p.x;
    const Rational& y = p.y;
    return y * y + e.a1 * x * y + e.a3 * y == x * x * x + e.a2 * x * x + e.a4 * x + e.a6;
}

namespace {

void require_on(const EllipticCurve& e, const Point& p) {
    if (!on_curve(e, p)) throw PointNotOnCurve(p.str() + " is not on " + e.str());
}

Point add_unchecked(const EllipticCurve& e, const Point& p, const Point& q) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    Rational lambda, nu;
    if (p.x == q.x) {
        Rational den = 2 * p.y + e.a1 * p.x + e.a3;
        if (p.y != q.y || den == 0) return Point::at_infinity();
        lambda = (3 * p.x * p.x + 2 * e.a2 * p.x + e.a4 - e.a1 * p.y) / den;
        nu = (-p.x * p.x * p.x + e.a4 * p.x + 2 * e.a6 - e.a3 * p.y) / den;
    } else {
        Rational dx = q.x - p.x;
        lambda = (q.y - p.y) / dx;
        nu = (p.y * q.x - q.y * p.x) / dx;
    }
    Rational x3 = lambda * lambda + e.a1 * lambda - e.a2 - p.x - q.x;
    Rational y3 = -(lambda + e.a1) * x3 - nu - e.a3;
    return Point::affine(x3, y3);
}

Point neg_unchecked(const EllipticCurve& e, const Point& p) {
    if (p.infinity) return p;
    return Point::affine(p.x, -p.y - e.a1 * p.x - e.a3);
}

Point mul_unchecked(const EllipticCurve& e, long k, const Point& p) {
    Point base = k < 0 ? neg_unchecked(e, p) : p;
    unsigned long m = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1 : static_cast<unsigned long>(k);
    Point acc = Point::at_infinity();
    while (m) {
        if (m & 1) acc = add_unchecked(e, acc, base);
        base = add_unchecked(e, base, base);
        m >>= 1;
    }
    return acc;
}

}  // namespace

Point neg(const EllipticCurve& e, const Point& p) {
    require_on(e, p);
    return neg_unchecked(e, p);
}

Point add(const EllipticCurve& e, const Point& p, const Point& q) {
    require_on(e, p);
    require_on(e, q);
    return add_unchecked(e, p, q);
}

Point scalar_mul(const EllipticCurve& e, long k, const Point& p) {
    require_on(e, p);
    return mul_unchecked(e, k, p);
}

unsigned torsion_order(const EllipticCurve& e, const Point& p) {
    require_on(e, p);
    Point q = p;
    for (unsigned k = 1; k <= 12; ++k) {
        if (q.infinity) return k;
        q = add_unchecked(e, q, p);
    }
    return 0;
}

Rational j_invariant(const EllipticCurve& e) {
    Rational d = e.discriminant();
    if (d == 0) throw SingularCurve("j-invariant of a singular model");
    Rational c = e.c4();
    return c * c * c / d;
}

EllipticCurve quadratic_twist(const EllipticCurve& e, long d) {
    if (d == 0) throw ZeroTwist("twist by zero");
    if (!e.is_short()) throw PreconditionViolated("quadratic_twist needs a short model, got " + e.str());
    Rational dd = d;
    return EllipticCurve::short_form(dd * dd * e.a4, dd * dd * dd * e.a6);
}

// ------------------------------------------------------------ short model

Point ShortModel::to_short(const Point& p) const {
    if (p.infinity) return p;
    return Point::affine(p.x + shift_x, p.y + a1_half * p.x + a3_half);
}

Point ShortModel::from_short(const Point& p) const {
    if (p.infinity) return p;
    Rational x = p.x - shift_x;
    return Point::affine(x, p.y - a1_half * x - a3_half);
}

ShortModel short_model(const EllipticCurve& e) {
    ShortModel m;
    m.curve = EllipticCurve::short_form(-e.c4() / 48, -e.c6() / 864, e.label);
    m.shift_x = e.b2() / 12;
    m.a1_half = e.a1 / 2;
    m.a3_half = e.a3 / 2;
    return m;
}

// ---------------------------------------------------------------- torsion

namespace {

std::vector<std::pair<mpz_class, unsigned>> factor_mpz(mpz_class n) {
    std::vector<std::pair<mpz_class, unsigned>> out;
    if (n < 0) n = -n;
    for (unsigned long p = 2; n > 1 && mpz_class(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(mpz_class(p), e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Positive y with y^2 | n.
std::vector<mpz_class> square_divisor_roots(const mpz_class& n) {
    std::vector<mpz_class> ys{1};
    for (auto& [p, e] : factor_mpz(n)) {
        std::size_t cur = ys.size();
        mpz_class pk = 1;
        for (unsigned k = 1; 2 * k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < cur; ++i) ys.push_back(ys[i] * pk);
        }
    }
    return ys;
}

// Integer roots of x^3 + a x + c.
std::vector<mpz_class> integer_roots(const mpz_class& a, const mpz_class& c) {
    auto f = [&](const mpz_class& x) { return mpz_class(x * x * x + a * x + c); };
    const long double fa = a.get_d(), fc = c.get_d();
    auto g = [&](long double x) { return x * x * x + fa * x + fc; };
    long double bound = 1.0L + std::max(std::fabs(fa), std::fabs(fc));
    std::vector<long double> cuts{-bound};
    if (fa < 0) {
        long double s = std::sqrt(-fa / 3.0L);
        cuts.push_back(-s);
        cuts.push_back(s);
    }
    cuts.push_back(bound);
    std::vector<mpz_class> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        long double lo = cuts[i], hi = cuts[i + 1];
        long double glo = g(lo), ghi = g(hi);
        if ((glo > 0) == (ghi > 0) && glo != 0 && ghi != 0) continue;
        for (int it = 0; it < 200; ++it) {
            long double mid = (lo + hi) / 2;
            if ((g(mid) > 0) == (glo > 0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mpz_class base(static_cast<double>(std::floor(lo)));
        for (int dx = -2; dx <= 3; ++dx) {
            mpz_class x = base + dx;
            if (f(x) == 0 && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        }
    }
    return out;
}

}  // namespace

std::string TorsionInfo::str() const {
    if (structure.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < structure.size(); ++i) os << (i ? "," : "") << structure[i];
    return os.str();
}

TorsionInfo torsion_subgroup(const EllipticCurve& e) {
    ShortModel sm = short_model(e);
    const Rational& A = sm.curve.a4;
    const Rational& B = sm.curve.a6;
    // (x, y) -> (u^2 x, u^3 y) makes the model integral.
    mpz_class u = 1;
    mpz_lcm(u.get_mpz_t(), A.get_den_mpz_t(), B.get_den_mpz_t());
    mpz_class u2 = u * u, u3 = u2 * u;
    mpz_class ai = mpz_class(A * (u2 * u2)), bi = mpz_class(B * (u3 * u3));
    EllipticCurve integral = EllipticCurve::short_form(Rational(ai), Rational(bi));
    mpz_class disc = 4 * ai * ai * ai + 27 * bi * bi;

    std::vector<mpz_class> ys{0};
    for (const mpz_class& y : square_divisor_roots(disc)) ys.push_back(y);

    TorsionInfo info;
    info.points.push_back(Point::at_infinity());
    for (const mpz_class& y : ys) {
        for (const mpz_class& x : integer_roots(ai, bi - y * y)) {
            for (int sign : {1, -1}) {
                if (y == 0 && sign < 0) continue;
                Point p = Point::affine(Rational(x), Rational(sign * y));
                if (torsion_order(integral, p) == 0) continue;
                Point back = sm.from_short(Point::affine(Rational(x) / u2, Rational(sign * y) / u3));
                info.points.push_back(back);
            }
        }
    }
    const unsigned n = static_cast<unsigned>(info.points.size());
    unsigned two = 0;
    for (const Point& p : info.points)
        if (!p.infinity && torsion_order(e, p) == 2) ++two;
    if (n == 1) return info;
    if (two == 3) {
        info.structure = {2, n / 2};
        Point big;
        for (const Point& p : info.points)
            if (torsion_order(e, p) == n / 2) {
                big = p;
                break;
            }
        info.generators.push_back(big);
        for (const Point& p : info.points) {
            if (p.infinity || torsion_order(e, p) != 2) continue;
            if (scalar_mul(e, long(n / 4), big) == p) continue;
            info.generators.push_back(p);
            break;
        }
    } else {
        info.structure = {n};
        for (const Point& p : info.points)
            if (torsion_order(e, p) == n) {
                info.generators.push_back(p);
                break;
            }
    }
    return info;
}

bool mazur_validate(const std::vector<unsigned>& s) {
    if (s.empty()) return true;
    if (s.size() == 1) return (s[0] >= 1 && s[0] <= 10) || s[0] == 12;
    if (s.size() == 2) return s[0] == 2 && s[1] % 2 == 0 && s[1] >= 2 && s[1] <= 8;
    return false;
}

// --------------------------------------------------------------- isogeny

Point Isogeny2::operator()(const Point& p) const {
    if (!on_curve(domain, p)) throw PointNotOnCurve(p.str() + " is not on " + domain.str());
    if (p.infinity || p.x == kernel_x) return Point::at_infinity();
    Rational dx = p.x - kernel_x;
    return Point::affine(p.x + t / dx, p.y * (1 - t / (dx * dx)));
}

Isogeny2 two_isogeny(const EllipticCurve& e, const Point& kernel) {
    if (!e.is_short()) throw PreconditionViolated("two_isogeny needs a short model, got " + e.str());
    if (kernel.infinity || !on_curve(e, kernel) || kernel.y != 0)
        throw KernelNotOrder2(kernel.str() + " is not a point of order 2 on " + e.str());
    Isogeny2 phi;
    phi.domain = e;
    phi.kernel_x = kernel.x;
    phi.t = 3 * kernel.x * kernel.x + e.a4;
    phi.w = kernel.x * phi.t;
    phi.codomain = EllipticCurve::short_form(e.a4 - 5 * phi.t, e.a6 - 7 * phi.w);
    return phi;
}

namespace {

std::optional<Rational> positive_root(const Rational& q, unsigned k) {
    if (q <= 0) return std::nullopt;
    mpz_class n, d;
    if (!mpz_root(n.get_mpz_t(), q.get_num_mpz_t(), k)) return std::nullopt;
    if (!mpz_root(d.get_mpz_t(), q.get_den_mpz_t(), k)) return std::nullopt;
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Rational pow_q(const Rational& q, unsigned k) {
    Rational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= q;
    return r;
}

}  // namespace

Point ScalingMatch::apply(const Point& p) const {
    if (p.infinity) return p;
    return Point::affine((p.x - r) / (u * u), p.y / (u * u * u));
}

std::optional<ScalingMatch> minimal_scaling_match(const EllipticCurve& c, const EllipticCurve& target) {
    if (!c.is_short() || !target.is_short())
        throw PreconditionViolated("minimal_scaling_match needs short models");
    if ((c.a4 == 0) != (target.a4 == 0) || (c.a6 == 0) != (target.a6 == 0)) return std::nullopt;
    std::optional<Rational> u;
    if (c.a4 != 0 && c.a6 != 0) {
        u = positive_root(c.a6 * target.a4 / (target.a6 * c.a4), 2);
    } else if (c.a4 == 0) {
        u = positive_root(c.a6 / target.a6, 6);
    } else {
        u = positive_root(c.a4 / target.a4, 4);
    }
    if (!u) return std::nullopt;
    if (c.a4 != pow_q(*u, 4) * target.a4 || c.a6 != pow_q(*u, 6) * target.a6) return std::nullopt;
    return ScalingMatch{*u, 0};
}

std::optional<std::vector<long>> mw_decompose(const EllipticCurve& e, const Point& p, const Point& g,
                                              const std::vector<Point>& torsion_gens, long bound) {
    require_on(e, p);
    require_on(e, g);
    std::vector<unsigned> orders;
    for (const Point& t : torsion_gens) {
        unsigned o = torsion_order(e, t);
        if (o == 0) throw BasisMismatch(t.str() + " is not a torsion point");
        orders.push_back(o);
    }
    // All torsion combinations, odometer order.
    std::vector<std::pair<std::vector<long>, Point>> combos{{std::vector<long>(orders.size(), 0), Point::at_infinity()}};
    for (std::size_t i = 0; i < orders.size(); ++i) {
        std::vector<std::pair<std::vector<long>, Point>> next;
        for (auto& [c, q] : combos) {
            Point acc = q;
            for (unsigned k = 0; k < orders[i]; ++k) {
                auto cc = c;
                cc[i] = k;
                next.emplace_back(cc, acc);
                acc = add_unchecked(e, acc, torsion_gens[i]);
            }
        }
        combos = std::move(next);
    }
    Point pos = Point::at_infinity(), negp = Point::at_infinity();
    const Point gn = neg_unchecked(e, g);
    for (long a = 0; a <= bound; ++a) {
        for (long s : {1L, -1L}) {
            if (a == 0 && s < 0) continue;
            const Point& base = s > 0 ? pos : negp;
            for (auto& [c, q] : combos) {
                if (add_unchecked(e, base, q) == p) {
                    std::vector<long> out{s * a};
                    out.insert(out.end(), c.begin(), c.end());
                    return out;
                }
            }
        }
        pos = add_unchecked(e, pos, g);
        negp = add_unchecked(e, negp, gn);
    }
    return std::nullopt;
}

bool translation_type(const std::vector<long>& d1, const std::vector<long>& d2) {
    if (d1.size() != d2.size()) throw BasisMismatch("decompositions over different bases");
    for (std::size_t i = 0; i < d1.size(); ++i)
        if (((d1[i] % 2) + 2) % 2 != ((d2[i] % 2) + 2) % 2) return false;
    return true;
}

}  // namespace gl2
