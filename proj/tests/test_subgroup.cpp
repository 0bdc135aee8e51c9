#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "gen.hpp"
#include "gl2/errors.hpp"
#include "gl2/invariants.hpp"
#include "gl2/registry.hpp"
#include "gl2/subgroup.hpp"

using gl2::Mat2;
using gl2::Subgroup;

namespace {

using KeySet = std::set<std::uint64_t>;

// Naive closure: saturate under multiplication by every known element.
KeySet naive_closure(const std::vector<Mat2>& gens, std::uint32_t n) {
    KeySet s{Mat2::identity(n).key()};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::uint64_t> cur(s.begin(), s.end());
        for (auto a : cur)
            for (const auto& g : gens) {
                auto k = gl2::mul(Mat2::from_key(n, a), g).key();
                if (s.insert(k).second) grew = true;
            }
    }
    return s;
}

KeySet keyset(const Subgroup& h) { return KeySet(h.keys().begin(), h.keys().end()); }

std::vector<Mat2> random_gens(std::uint32_t n, int count) {
    std::vector<Mat2> g;
    for (int i = 0; i < count; ++i) g.push_back(gen::invertible(n));
    return g;
}

// Union of the GL2-conjugacy classes of diag(1,-1) and [1,1,0,-1], by brute force.
KeySet complex_conjugation_class(std::uint32_t n) {
    KeySet out;
    Mat2 r1(n, 1, 0, 0, -1), r2(n, 1, 1, 0, -1);
    for (const auto& x : gen::all_gl2(n)) {
        auto xi = gl2::inv(x);
        out.insert(gl2::mul(gl2::mul(x, r1), xi).key());
        out.insert(gl2::mul(gl2::mul(x, r2), xi).key());
    }
    return out;
}

// Smallest m | n such that h is the full preimage of its image mod m.
std::uint32_t level_by_search(const Subgroup& h) {
    std::uint32_t n = h.modulus();
    for (std::uint32_t m = 1; m <= n; ++m) {
        if (n % m) continue;
        KeySet img;
        for (auto k : h.keys()) img.insert(gl2::reduce(Mat2::from_key(n, k), m).key());
        if (img.size() * (gl2::gl2_order(n) / gl2::gl2_order(m)) == h.order()) return m;
    }
    return n;
}

// Subgroups of index m as point stabilisers of transitive actions on m points.
// Each generator gets a permutation of {0..m-1}; a choice is kept when walking the
// Cayley graph from the identity never assigns one element two different permutations.
std::set<KeySet> subgroups_by_actions(const Subgroup& h, unsigned m) {
    using Perm = std::vector<unsigned>;
    std::uint32_t n = h.modulus();
    auto gens = h.generators();
    std::vector<Perm> sym;
    Perm p(m);
    for (unsigned i = 0; i < m; ++i) p[i] = i;
    do sym.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));

    std::set<KeySet> out;
    std::vector<std::size_t> pick(gens.size(), 0);
    for (;;) {
        std::map<std::uint64_t, Perm> rho;
        std::vector<std::uint64_t> queue{Mat2::identity(n).key()};
        rho[queue[0]] = sym[0];
        bool ok = true;
        for (std::size_t q = 0; q < queue.size() && ok; ++q) {
            Perm cur = rho[queue[q]];
            for (std::size_t i = 0; i < gens.size() && ok; ++i) {
                // right multiplication: rho(xg) = rho(x) then rho(g)
                Perm nxt(m);
                for (unsigned j = 0; j < m; ++j) nxt[j] = sym[pick[i]][cur[j]];
                auto y = gl2::mul(Mat2::from_key(n, queue[q]), gens[i]).key();
                auto [it, fresh] = rho.emplace(y, nxt);
                if (fresh) queue.push_back(y);
                else ok = it->second == nxt;
            }
        }
        if (ok) {
            std::set<unsigned> orbit;
            for (const auto& [k, r] : rho) orbit.insert(r[0]);
            if (orbit.size() == m) {
                KeySet stab;
                for (const auto& [k, r] : rho)
                    if (r[0] == 0) stab.insert(k);
                out.insert(stab);
            }
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == sym.size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return out;
}

std::set<KeySet> as_sets(const std::vector<Subgroup>& v) {
    std::set<KeySet> out;
    for (const auto& k : v) out.insert(keyset(k));
    return out;
}

const gl2::Registries& registry() {
    static const gl2::Registries r = gl2::load_registries(gl2::RegistryPaths::defaults(), gl2::Validation::Structure);
    return r;
}

}  // namespace

TEST_CASE("closure examples") {
    CHECK(gl2::closure({Mat2(5, 1, 1, 0, 1)}, 5).order() == 5);
    CHECK(gl2::gl2_group(3).order() == (9 - 1) * (9 - 3));
    CHECK(gl2::sl2_group(5).order() == 120);
    Subgroup h1 = gl2::closure({Mat2(104, 33, 0, 0, 1), Mat2(104, 83, 78, 0, 1), Mat2(104, 61, 65, 0, 1),
                                Mat2(104, 30, 65, 13, 17), Mat2(104, 79, 39, 57, 40)},
                               104);
    CHECK(h1.index() == 56);
    CHECK(gl2::gl2_order(104) % h1.order() == 0);
}

TEST_CASE("closure honours the cap") {
    try {
        Subgroup g(13, {Mat2(13, 1, 1, 0, 1), Mat2(13, 0, -1, 1, 0), Mat2(13, 2, 0, 0, 1)}, 100);
        g.order();
        FAIL("expected CapExceeded");
    } catch (const gl2::CapExceeded& e) {
        CHECK(e.partial_count() >= 100);
    }
    CHECK_THROWS_AS(Subgroup(6, {Mat2(6, 2, 0, 0, 1)}), gl2::NotInvertible);
}

TEST_CASE("property: closure agrees with naive saturation") {
    for (int i = 0; i < 40; ++i) {
        std::uint32_t n = gen::uniform(2, 12);
        auto g = random_gens(n, int(gen::uniform(1, 3)));
        Subgroup h(n, g);
        REQUIRE(keyset(h) == naive_closure(g, n));
        REQUIRE(h.order() == h.keys().size());
        REQUIRE(gl2::gl2_order(n) % h.order() == 0);
    }
}

TEST_CASE("contains_minus_id examples") {
    CHECK_FALSE(gl2::contains_minus_id(Subgroup(5, {Mat2::identity(5)})));
    CHECK(gl2::contains_minus_id(Subgroup(8, {Mat2::minus_identity(8)})));
    CHECK(gl2::contains_minus_id(registry().group("8.2.0.1").group()));
}

TEST_CASE("det_image_is_full examples") {
    CHECK(gl2::det_image_is_full(gl2::gl2_group(5)));
    CHECK_FALSE(gl2::det_image_is_full(gl2::sl2_group(5)));
    CHECK(gl2::det_image_is_full(registry().group("3.3.0.1").group()));
}

TEST_CASE("has_complex_conjugation examples") {
    CHECK(gl2::has_complex_conjugation(Subgroup(4, {Mat2(4, 1, 0, 0, -1)})));
    CHECK_FALSE(gl2::has_complex_conjugation(Subgroup(8, {Mat2::minus_identity(8)})));
    CHECK(gl2::has_complex_conjugation(gl2::gl2_group(16)));
}

TEST_CASE("property: has_complex_conjugation agrees with brute-force conjugacy classes") {
    int yes = 0, no = 0;
    for (std::uint32_t n : {3u, 4u, 5u, 8u, 12u, 16u}) {
        KeySet cls = complex_conjugation_class(n);
        for (int i = 0; i < 25; ++i) {
            Subgroup h(n, random_gens(n, int(gen::uniform(1, 2))));
            bool expect = std::any_of(h.keys().begin(), h.keys().end(), [&](auto k) { return cls.count(k); });
            (expect ? yes : no)++;
            REQUIRE(gl2::has_complex_conjugation(h) == expect);
        }
    }
    CHECK(yes > 0);
    CHECK(no > 0);
}

TEST_CASE("level examples") {
    CHECK(gl2::level(gl2::gl2_group(8)) == 1);
    auto g8 = registry().group("8.2.0.1").group();
    CHECK(gl2::level(gl2::preimage(gl2::reduce(g8, 8), 8)) == 8);
    CHECK(gl2::level(gl2::preimage(gl2::gl2_group(2), 4)) == 1);
}

TEST_CASE("property: level agrees with divisor search") {
    for (int i = 0; i < 30; ++i) {
        std::uint32_t m = gen::uniform(2, 6), t = m * gen::uniform(1, 3);
        if (t > 16) t = m;
        Subgroup h = gl2::preimage(Subgroup(m, random_gens(m, 1)), t);
        REQUIRE(gl2::level(h) == level_by_search(h));
        REQUIRE(m % gl2::level(h) == 0);
    }
}

TEST_CASE("preimage examples") {
    CHECK(gl2::preimage(Subgroup(2, {Mat2::identity(2)}), 4).order() == 16);
    CHECK(gl2::same_group(gl2::preimage(gl2::gl2_group(2), 4), gl2::gl2_group(4)));
    CHECK_THROWS_AS(gl2::preimage(gl2::gl2_group(3), 8), gl2::NotADivisor);
}

TEST_CASE("property: preimage multiplies the order by the kernel and keeps the level") {
    for (const char* lab : {"2.2.0.1", "2.3.0.1", "4.2.0.1", "8.2.0.2", "3.3.0.1", "3.4.0.1", "5.5.0.1"}) {
        auto h = registry().group(lab).group();
        std::uint32_t m = h.modulus(), t = m * (m % 3 ? 3 : 2);
        auto p = gl2::preimage(h, t);
        CHECK(p.order() == h.order() * (gl2::gl2_order(t) / gl2::gl2_order(m)));
        CHECK(gl2::level(p) == gl2::level(h));
        CHECK(gl2::same_group(gl2::reduce(p, m), h));
    }
}

TEST_CASE("product_group examples") {
    auto& r = registry();
    auto p = gl2::product_group(r.group("3.3.0.1").group(), r.group("5.5.0.1").group());
    CHECK(p.modulus() == 15);
    CHECK(p.index() == 15);
    auto q = gl2::product_group(r.group("8.2.0.1").group(), r.group("5.6.0.1").group());
    CHECK(q.modulus() == 40);
    CHECK(q.index() == 12);
    CHECK(gl2::same_group(gl2::product_group(gl2::gl2_group(2), gl2::gl2_group(3)), gl2::gl2_group(6)));
    CHECK_THROWS_AS(gl2::product_group(gl2::gl2_group(2), gl2::gl2_group(4)), gl2::NonCoprimeModuli);
}

TEST_CASE("property: product_group order and reductions, exhaustive over cyclic factors mod (2,3)") {
    std::vector<Subgroup> a, b;
    for (const auto& x : gen::all_gl2(2)) a.emplace_back(2, std::vector<Mat2>{x});
    for (const auto& y : gen::all_gl2(3)) b.emplace_back(3, std::vector<Mat2>{y});
    for (const auto& x : a)
        for (const auto& y : b) {
            auto p = gl2::product_group(x, y);
            REQUIRE(p.order() == x.order() * y.order());
            REQUIRE(p.index() == x.index() * y.index());
            REQUIRE(gl2::same_group(gl2::reduce(p, 2), x));
            REQUIRE(gl2::same_group(gl2::reduce(p, 3), y));
        }
}

TEST_CASE("are_conjugate examples") {
    Subgroup up(5, {Mat2(5, 1, 1, 0, 1)}), down(5, {Mat2(5, 1, 0, 1, 1)});
    auto x = gl2::are_conjugate(up, down);
    REQUIRE(x);
    CHECK(gl2::same_group(gl2::conjugate_by(up, *x), down));
    auto& r = registry();
    auto h = r.group("8.6.0.1").group();
    CHECK(gl2::are_conjugate(h, h));
    CHECK_FALSE(gl2::are_conjugate(r.group("8.2.0.1").group(), r.group("8.2.0.2").group()));
}

TEST_CASE("property: are_conjugate agrees with a conjugator scan and is an equivalence") {
    const std::uint32_t n = 8;
    auto all = gen::all_gl2(n);
    std::vector<Subgroup> hs;
    for (int i = 0; i < 10; ++i) {
        Subgroup h(n, random_gens(n, 1));
        hs.push_back(h);
        hs.push_back(gl2::conjugate_by(h, all[gen::uniform(0, std::uint32_t(all.size() - 1))]));
    }
    auto scan = [&](const Subgroup& a, const Subgroup& b) {
        auto kb = keyset(b);
        for (const auto& x : all)
            if (keyset(gl2::conjugate_by(a, x)) == kb) return true;
        return false;
    };
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = 0; j < hs.size(); ++j) {
            bool c = bool(gl2::are_conjugate(hs[i], hs[j]));
            REQUIRE(c == scan(hs[i], hs[j]));
            REQUIRE(c == bool(gl2::are_conjugate(hs[j], hs[i])));
            for (std::size_t k = 0; k < hs.size() && c; ++k)
                if (gl2::are_conjugate(hs[j], hs[k])) REQUIRE(gl2::are_conjugate(hs[i], hs[k]));
        }
}

TEST_CASE("conjugate_into finds containment up to conjugacy") {
    auto lower = gl2::closure({Mat2(5, 1, 0, 1, 1)}, 5);
    auto borel = gl2::borel_group(5);
    auto x = gl2::conjugate_into(lower, borel);
    REQUIRE(x);
    CHECK(gl2::is_subgroup_of(gl2::conjugate_by(lower, *x), borel));
    CHECK_FALSE(gl2::conjugate_into(gl2::sl2_group(5), borel));
}

TEST_CASE("subgroups_of_index examples") {
    CHECK(gl2::subgroups_of_index(Subgroup(4, {Mat2(4, 1, 1, 0, 1)}), 2).size() == 1);
    CHECK(gl2::subgroups_of_index(Subgroup(9, {Mat2(9, 1, 1, 0, 1)}), 3).size() == 1);
    // S3 has one subgroup of index 2 and three of index 3.
    CHECK(gl2::subgroups_of_index(gl2::gl2_group(2), 2).size() == 1);
    CHECK(gl2::subgroups_of_index(gl2::gl2_group(2), 3).size() == 3);
    CHECK_THROWS(gl2::subgroups_of_index(gl2::gl2_group(2), 4));
}

TEST_CASE("property: subgroups_of_index matches stabilisers of transitive actions") {
    std::vector<Subgroup> hs{gl2::gl2_group(2), gl2::gl2_group(3), gl2::gl2_group(4), gl2::borel_group(5),
                             gl2::sl2_group(3), Subgroup(7, {Mat2(7, 3, 0, 0, 1), Mat2(7, 1, 1, 0, 1)})};
    for (int i = 0; i < 6; ++i) hs.emplace_back(8, random_gens(8, 2));
    for (const auto& h : hs) {
        for (unsigned n : {2u, 3u}) {
            auto got = gl2::subgroups_of_index(h, n);
            std::set<KeySet> expect = subgroups_by_actions(h, n);
            REQUIRE(as_sets(got) == expect);
            REQUIRE(got.size() == expect.size());
            for (const auto& k : got) {
                REQUIRE(k.order() * n == h.order());
                REQUIRE(keyset(k) == naive_closure(k.generators(), k.modulus()));
            }
        }
    }
}

TEST_CASE("property: index-2 subgroups are normal and contain squares and commutators") {
    for (int i = 0; i < 8; ++i) {
        std::uint32_t n = i % 2 ? 8 : 12;
        Subgroup h(n, random_gens(n, 2));
        for (const auto& k : gl2::subgroups_of_index(h, 2)) {
            for (auto a : h.keys()) {
                Mat2 x = Mat2::from_key(n, a);
                REQUIRE(k.contains(gl2::mul(x, x)));
                for (const auto& g : h.generators()) {
                    Mat2 comm = gl2::mul(gl2::mul(x, g), gl2::mul(gl2::inv(x), gl2::inv(g)));
                    REQUIRE(k.contains(comm));
                }
            }
            for (const auto& g : h.generators())
                REQUIRE(gl2::same_group(gl2::conjugate_by(k, g), k));
        }
    }
}

TEST_CASE("quadratic_twists examples") {
    // <-Id> mod 8: itself and the trivial group, since <Id, -Id> = <-Id>.
    auto t = gl2::quadratic_twists(Subgroup(8, {Mat2::minus_identity(8)}));
    REQUIRE(t.size() == 2);
    CHECK(t[0].order() == 2);
    CHECK(t[1].order() == 1);
    auto h = registry().group("8.6.0.1").group();
    bool found = false;
    for (const auto& k : gl2::quadratic_twists(h)) found = found || gl2::same_group(k, h);
    CHECK(found);
    CHECK_THROWS_AS(gl2::quadratic_twists(gl2::gl2_group(2)), gl2::PreconditionViolated);
}

TEST_CASE("property: every quadratic twist generates the same group with -Id") {
    for (int i = 0; i < 12; ++i) {
        std::uint32_t n = gen::uniform(3, 16);
        Subgroup h(n, random_gens(n, int(gen::uniform(1, 2))));
        auto mi = Mat2::minus_identity(n);
        auto gs = h.generators();
        gs.push_back(mi);
        Subgroup g(n, gs);
        auto twists = gl2::quadratic_twists(h);
        bool has_h = false;
        for (const auto& k : twists) {
            auto kg = k.generators();
            kg.push_back(mi);
            REQUIRE(gl2::same_group(Subgroup(n, kg), g));
            REQUIRE((k.order() == g.order() || 2 * k.order() == g.order()));
            REQUIRE(gl2::is_subgroup_of(k, g));
            has_h = has_h || gl2::same_group(k, h);
        }
        REQUIRE(has_h);
        // Oracle: every subgroup of g of index 2 missing -Id is a twist.
        std::size_t expect = 1;
        for (const auto& k : subgroups_by_actions(g, 2)) expect += !k.count(mi.key());
        REQUIRE(twists.size() == expect);
    }
}
