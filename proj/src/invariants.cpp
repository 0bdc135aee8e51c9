#include "gl2/invariants.hpp"

#include <charconv>
#include <sstream>

#include "gl2/arith.hpp"
#include "gl2/errors.hpp"

namespace gl2 {

using namespace keyops;

bool is_admissible(const Subgroup& h) {
    return contains_minus_id(h) && det_image_is_full(h) && has_complex_conjugation(h);
}

CosetAction coset_action(const Subgroup& h, std::size_t cap) {
    const std::uint32_t n = h.modulus();
    if (!contains_minus_id(h)) throw PreconditionViolated(h.describe() + " does not contain -Id");
    if (!det_image_is_full(h)) throw PreconditionViolated(h.describe() + " has a proper determinant image");
    const std::uint64_t sl = sl2_order(n);
    if (sl > cap)
        throw CapExceeded("SL2(Z/" + std::to_string(n) + ") has " + std::to_string(sl) +
                              " elements, over the coset cap " + std::to_string(cap),
                          0);

    std::vector<std::uint64_t> k;
    for (std::uint64_t x : h.keys())
        if (det(x, n) == 1 % n) k.push_back(x);

    const std::uint64_t s = Mat2(n, 0, -1, 1, 0).key();
    const std::uint64_t r = Mat2(n, 0, -1, 1, -1).key();
    const std::uint64_t t = Mat2(n, 1, 1, 0, 1).key();

    PackedMap coset(sl);
    std::vector<std::uint64_t> reps{identity(n)};
    for (std::uint64_t x : k) coset.emplace(x, 0);
    for (std::size_t c = 0; c < reps.size(); ++c) {
        for (std::uint64_t g : {s, t}) {
            std::uint64_t y = mul(reps[c], g, n);
            if (coset.get(y) != PackedMap::kMissing) continue;
            std::uint32_t id = static_cast<std::uint32_t>(reps.size());
            reps.push_back(y);
            for (std::uint64_t x : k) coset.emplace(mul(x, y, n), id);
        }
    }
    if (coset.size() != sl) throw Error("coset enumeration did not cover SL2");

    CosetAction act;
    const std::size_t d = reps.size();
    act.s.resize(d);
    act.r.resize(d);
    act.t.resize(d);
    for (std::size_t c = 0; c < d; ++c) {
        act.s[c] = coset.get(mul(reps[c], s, n));
        act.r[c] = coset.get(mul(reps[c], r, n));
        act.t[c] = coset.get(mul(reps[c], t, n));
    }
    return act;
}

CosetAction product_action(const CosetAction& a, const CosetAction& b) {
    const std::uint32_t da = a.degree(), db = b.degree();
    CosetAction out;
    const std::size_t d = std::size_t(da) * db;
    out.s.resize(d);
    out.r.resize(d);
    out.t.resize(d);
    for (std::uint32_t i = 0; i < da; ++i)
        for (std::uint32_t j = 0; j < db; ++j) {
            std::size_t c = std::size_t(i) * db + j;
            out.s[c] = a.s[i] * db + b.s[j];
            out.r[c] = a.r[i] * db + b.r[j];
            out.t[c] = a.t[i] * db + b.t[j];
        }
    return out;
}

GenusData genus_from_action(const CosetAction& act) {
    GenusData g;
    const std::size_t d = act.degree();
    g.index = d;
    std::vector<char> seen(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        if (act.s[i] == i) ++g.nu2;
        if (act.r[i] == i) ++g.nu3;
        if (seen[i]) continue;
        ++g.cusps;
        for (std::size_t j = i; !seen[j]; j = act.t[j]) seen[j] = 1;
    }
    std::int64_t twelve_g = 12 + std::int64_t(d) - 3 * std::int64_t(g.nu2) - 4 * std::int64_t(g.nu3) -
                            6 * std::int64_t(g.cusps);
    if (twelve_g < 0 || twelve_g % 12)
        throw IntegralityFailure("12*genus = " + std::to_string(twelve_g) + " for degree " + std::to_string(d));
    g.genus = static_cast<std::uint64_t>(twelve_g / 12);
    return g;
}

std::uint64_t genus(const Subgroup& h) { return genus_from_action(coset_action(h)).genus; }

CurveInvariants compute_invariants(const Subgroup& h) {
    CurveInvariants inv;
    inv.level = level(h);
    inv.index = h.index();
    inv.admissible = is_admissible(h);
    // No geometrically connected X_H to measure.
    if (!det_image_is_full(h)) return inv;
    // X_H only sees <H, -Id>.
    Subgroup g = h;
    if (h.modulus() >= 3 && !contains_minus_id(h)) {
        auto gens = h.generators();
        gens.push_back(Mat2::minus_identity(h.modulus()));
        g = Subgroup(h.modulus(), gens, h.cap());
    }
    GenusData gd = genus_from_action(coset_action(g));
    inv.genus = gd.genus;
    inv.nu2 = gd.nu2;
    inv.nu3 = gd.nu3;
    inv.cusps = gd.cusps;
    return inv;
}

std::uint64_t x0_genus_oracle(std::uint32_t n) {
    auto f = factor(n);
    std::uint64_t mu = n;
    std::int64_t nu2 = (n % 4 == 0) ? 0 : 1;
    std::int64_t nu3 = (n % 9 == 0) ? 0 : 1;
    for (auto [p, e] : f) {
        mu = mu / p * (p + 1);
        // 1 + (-1/p) and 1 + (-3/p); the ramified prime contributes 1.
        if (p != 2) nu2 *= (p % 4 == 1) ? 2 : 0;
        if (p != 3) nu3 *= (p % 3 == 1) ? 2 : 0;
    }
    std::uint64_t cusps = 0;
    for (std::uint32_t d : divisors(n)) cusps += euler_phi(gcd(d, n / d));
    std::int64_t twelve_g = 12 + std::int64_t(mu) - 3 * nu2 - 4 * nu3 - 6 * std::int64_t(cusps);
    return static_cast<std::uint64_t>(twelve_g / 12);
}

Subgroup borel_group(std::uint32_t n) {
    std::vector<Mat2> g{Mat2(n, 1, 1, 0, 1)};
    for (std::uint32_t u : unit_generators(n)) {
        g.emplace_back(n, u, 0, 0, 1);
        g.emplace_back(n, 1, 0, 0, u);
    }
    Subgroup h(n, g);
    h.set_label("B0(" + std::to_string(n) + ")");
    return h;
}

std::optional<ParsedLabel> parse_group_label(const std::string& label) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : label) {
        if (ch == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4 || parts[3].empty()) return std::nullopt;
    ParsedLabel p;
    auto num = [](const std::string& s, auto& out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
    };
    if (!num(parts[0], p.level) || !num(parts[1], p.index) || !num(parts[2], p.genus)) return std::nullopt;
    p.ordinal = parts[3];
    return p;
}

std::string LabelReport::line() const {
    std::ostringstream os;
    os << label << " computed=" << level << '.' << index << '.' << genus << " status=" << (pass ? "PASS" : "FAIL");
    if (!note.empty()) os << " (" << note << ")";
    return os.str();
}

LabelReport label_check(const std::string& label, const Subgroup& h) {
    LabelReport rep;
    rep.label = label;
    auto parsed = parse_group_label(label);
    try {
        CurveInvariants inv = compute_invariants(h);
        rep.level = inv.level;
        rep.index = inv.index;
        rep.genus = inv.genus;
        if (!det_image_is_full(h)) {
            rep.note = "proper determinant image, genus undefined";
            return rep;
        }
        if (!parsed) {
            rep.note = "unparseable label";
            return rep;
        }
        rep.pass = parsed->level == inv.level && parsed->index == inv.index && parsed->genus == inv.genus;
    } catch (const Error& e) {
        rep.note = e.what();
    }
    return rep;
}

}  // namespace gl2
