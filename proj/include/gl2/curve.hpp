#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gl2 {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

struct EllipticCurve {
    Rational a1, a2, a3, a4, a6;
    std::string label;

    EllipticCurve() = default;
    EllipticCurve(Rational a1_, Rational a2_, Rational a3_, Rational a4_, Rational a6_, std::string label_ = {});
    static EllipticCurve short_form(Rational a, Rational b, std::string label = {});

    Rational b2() const;
    Rational b4() const;
    Rational b6() const;
    Rational b8() const;
    Rational c4() const;
    Rational c6() const;
    Rational discriminant() const;

    bool is_short() const { return a1 == 0 && a2 == 0 && a3 == 0; }
    std::string str() const;
};

struct Point {
    bool infinity = true;
    Rational x, y;

    static Point at_infinity() { return {}; }
    static Point affine(Rational x, Rational y) { return Point{false, std::move(x), std::move(y)}; }
    bool operator==(const Point& o) const;
    std::string str() const;
};

bool on_curve(const EllipticCurve& e, const Point& p);
Point neg(const EllipticCurve& e, const Point& p);
Point add(const EllipticCurve& e, const Point& p, const Point& q);
Point scalar_mul(const EllipticCurve& e, long k, const Point& p);
// Order of a torsion point, or 0 when none of 1..12 kills it.
unsigned torsion_order(const EllipticCurve& e, const Point& p);

Rational j_invariant(const EllipticCurve& e);

EllipticCurve quadratic_twist(const EllipticCurve& e, long d);

// y^2 = x^3 - c4/48 x - c6/864 and the coordinate change onto it.
struct ShortModel {
    EllipticCurve curve;
    Rational shift_x;   // X = x + shift_x
    Rational a1_half;   // Y = y + a1_half x + a3_half
    Rational a3_half;
    Point to_short(const Point& p) const;
    Point from_short(const Point& p) const;
};

ShortModel short_model(const EllipticCurve& e);

struct TorsionInfo {
    // Invariant factors; empty for the trivial group.
    std::vector<unsigned> structure;
    std::vector<Point> generators;
    std::vector<Point> points;
    std::string str() const;
};

TorsionInfo torsion_subgroup(const EllipticCurve& e);

bool mazur_validate(const std::vector<unsigned>& structure);

struct Isogeny2 {
    EllipticCurve domain;
    EllipticCurve codomain;
    Rational kernel_x;
    Rational t, w;
    Point operator()(const Point& p) const;
};

// Quotient of a short-form curve by a rational 2-torsion point.
Isogeny2 two_isogeny(const EllipticCurve& e, const Point& kernel);

struct ScalingMatch {
    Rational u;
    Rational r;
    // Image on the target of a point of the source curve.
    Point apply(const Point& p) const;
};

std::optional<ScalingMatch> minimal_scaling_match(const EllipticCurve& c, const EllipticCurve& target);

// Coefficients (A, B1, ...) with p = A g + sum Bi ti, |A| <= bound and
// 0 <= Bi < order(ti); nothing if no such decomposition exists.
std::optional<std::vector<long>> mw_decompose(const EllipticCurve& e, const Point& p, const Point& g,
                                              const std::vector<Point>& torsion_gens, long bound);

bool translation_type(const std::vector<long>& d1, const std::vector<long>& d2);

}  // namespace gl2
