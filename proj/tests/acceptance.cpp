// Acceptance run: one PASS/FAIL line per criterion, with wall time against its budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gl2/classify.hpp"
#include "gl2/curve.hpp"
#include "gl2/errors.hpp"
#include "gl2/invariants.hpp"
#include "gl2/mat2.hpp"
#include "gl2/registry.hpp"
#include "gl2/subgroup.hpp"

using namespace gl2;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Collects the first few failures of a criterion.
struct Failures {
    Outcome out;
    int shown = 0;
    void fail(const std::string& what) {
        out.ok = false;
        if (shown++ < 5) out.detail += (out.detail.empty() ? "" : "; ") + what;
    }
    void expect(bool cond, const std::string& what) {
        if (!cond) fail(what);
    }
};

std::string join(const std::set<std::string, decltype(&label_less)>& s) {
    std::string r;
    for (const auto& x : s) r += (r.empty() ? "" : " ") + x;
    return r;
}

const Registries& registry() {
    static const Registries r = load_registries(RegistryPaths::defaults(), Validation::Structure);
    return r;
}

Outcome crt_round_trip() {
    Failures f;
    const Subgroup g = gl2_group(6);
    f.expect(g.order() == 288, "|GL2(Z/6)| = " + std::to_string(g.order()));
    std::vector<Mat2> all;
    for (auto k : g.keys()) all.push_back(Mat2::from_key(6, k));
    for (const Mat2& x : all) {
        if (crt_combine(reduce(x, 2), reduce(x, 3)) != x) f.fail("CRT round trip fails at " + x.str());
        for (const Mat2& y : all)
            if (det(mul(x, y)) != (std::uint64_t(det(x)) * det(y)) % 6) f.fail("det(xy) at " + x.str() + "," + y.str());
    }
    if (f.out.ok) f.out.detail = "288 elements, 82944 products";
    return f.out;
}

Outcome genus_oracle() {
    Failures f;
    f.expect(x0_genus_oracle(1) == 0, "X0(1) oracle");
    for (std::uint32_t n = 2; n <= 50; ++n) {
        std::uint64_t got = genus(borel_group(n)), want = x0_genus_oracle(n);
        f.expect(got == want, "N=" + std::to_string(n) + " genus " + std::to_string(got) + " vs " + std::to_string(want));
    }
    f.expect(genus(borel_group(11)) == 1, "X0(11) has genus 1");
    f.expect(genus(borel_group(21)) == 1, "X0(21) has genus 1");
    if (f.out.ok) f.out.detail = "N = 1..50 agree";
    return f.out;
}

Outcome label_consistency() {
    Failures f;
    std::map<std::string, LabelReport> by;
    for (const LabelReport& r : check_labels(registry())) {
        by[r.label] = r;
        if (!r.pass) f.fail(r.line());
    }
    auto named = [&](const std::string& l, std::uint32_t level, std::uint64_t index) {
        auto it = by.find(l);
        if (it == by.end()) return f.fail(l + " missing from the registry");
        const LabelReport& r = it->second;
        f.expect(r.pass && r.level == level && r.index == index && r.genus == 1, r.line());
    };
    named("15.15.1.1", 15, 15);
    named("24.6.1.2", 24, 6);
    named("40.12.1.5", 40, 12);
    for (int o : {5, 10, 11, 13, 15, 17, 19}) named("16.24.1." + std::to_string(o), 16, 24);
    if (f.out.ok) f.out.detail = std::to_string(by.size()) + " groups pass";
    return f.out;
}

Outcome genus_eliminations() {
    Failures f;
    Classifier cls(registry());
    std::size_t total = 0;
    const std::vector<std::vector<std::uint32_t>> types{{11, 13}, {7, 13}, {7, 11}, {5, 13}, {5, 11},
                                                        {5, 7},   {3, 13}, {3, 11}, {2, 11}};
    for (const auto& t : types) {
        auto cands = cls.enumerate_candidates(t);
        f.expect(!cands.empty(), "no candidates for (" + std::to_string(t[0]) + "," + std::to_string(t[1]) + ")");
        for (const Candidate& c : cands) {
            ++total;
            auto g = cls.invariants(c).genus;
            f.expect(g >= 2, c.name + " has genus " + std::to_string(g));
        }
    }
    if (f.out.ok) f.out.detail = std::to_string(total) + " products over 9 types, all genus >= 2";
    return f.out;
}

Outcome isogeny_suite() {
    Failures f;
    const Registries& r = registry();
    bool fwd = false, back = false;
    auto checks = verify_isogeny_facts(r);
    for (const IsogenyCheck& c : checks) {
        f.expect(c.pass, c.line());
        if (c.domain == "576.e4" && c.codomain == "576.e2") fwd = c.pass && c.found == std::vector<long>{2, 0};
        if (c.domain == "576.e2" && c.codomain == "576.e4") back = c.pass && c.found == std::vector<long>{1, 0};
    }
    f.expect(fwd, "576.e4 -> 576.e2 not found as 2*g");
    f.expect(back, "576.e2 -> 576.e4 not found as g");

    // Direct arithmetic on the two models: y^2 = x^3 + 8 and y^2 = x^3 - 60x + 176.
    const EllipticCurve e4 = r.curve("576.e4").curve, e2 = r.curve("576.e2").curve;
    Isogeny2 phi = two_isogeny(e4, Point::affine(-2, 0));
    Point img = phi(Point::affine(2, -4));
    auto m = minimal_scaling_match(phi.codomain, e2);
    f.expect(bool(m), "codomain of the 576.e4 isogeny is not 576.e2");
    if (m) {
        Point on_e2 = m->apply(img);
        f.expect(on_e2 == Point::affine(5, -1), "phi(2,-4) is not (5,-1)");
        f.expect(scalar_mul(e2, 2, Point::affine(10, -24)) == Point::affine(5, -1), "2*(10,-24) is not (5,-1)");
    }
    if (f.out.ok) f.out.detail = std::to_string(checks.size()) + " facts; phi(2,-4) = (5,-1) = 2*(10,-24)";
    return f.out;
}

Outcome index2_lattice() {
    Failures f;
    const Registries& r = registry();
    Subgroup h = product_group(r.group("8.2.0.1").group(), r.group("13.14.0.1").group());
    std::vector<Subgroup> adm;
    for (const Subgroup& k : subgroups_of_index(h, 2))
        if (is_admissible(k)) adm.push_back(k);
    f.expect(adm.size() == 4, std::to_string(adm.size()) + " admissible index-2 subgroups");
    std::vector<std::string> names{"104.56.1.H1", "104.56.1.H2", "104.56.1.H3", "104.56.1.H4"};
    std::set<std::size_t> used;
    std::string how;
    for (const Subgroup& k : adm) {
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < names.size() && !hit; ++i)
            if (!used.count(i) && same_group(k, r.group(names[i]).group())) hit = i;
        for (std::size_t i = 0; i < names.size() && !hit; ++i)
            if (!used.count(i) && are_conjugate(k, r.group(names[i]).group())) hit = i;
        if (!hit) {
            f.fail("an admissible index-2 subgroup matches none of H1..H4");
            continue;
        }
        used.insert(*hit);
        how += (how.empty() ? "" : " ") + names[*hit].substr(9);
    }
    if (f.out.ok) f.out.detail = "4 admissible subgroups, matched to " + how;
    return f.out;
}

Outcome classification() {
    Failures f;
    Classifier cls(registry());
    const std::vector<std::uint32_t> ps(std::begin(kSupportedPrimes), std::end(kSupportedPrimes));
    std::set<std::string, decltype(&label_less)> curious(&label_less), expected(&label_less);
    for (const char* n :
         {"16.24.1.5", "16.24.1.10", "16.24.1.11", "16.24.1.13", "16.24.1.15", "16.24.1.17", "16.24.1.19",
          "15.15.1.1", "8.2.0.1*13.14.0.1", "8.2.0.2*9.12.0.1", "40.12.1.5", "40.20.1.2", "40.36.1.2", "40.36.1.4",
          "40.36.1.5", "24.6.1.2", "24.12.1.3", "24.24.1.2", "24.18.1.5", "24.18.1.8", "24.36.1.3", "24.36.1.8"})
        expected.insert(n);
    std::size_t total = 0, unknown = 0;
    std::vector<std::vector<std::uint32_t>> runs;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        runs.push_back({ps[i]});
        for (std::size_t j = i + 1; j < ps.size(); ++j) runs.push_back({ps[i], ps[j]});
    }
    for (const auto& primes : runs) {
        ClassifyReport rep = cls.classify(primes);
        for (const Verdict& v : rep.verdicts) {
            ++total;
            if (v.status == Status::UnknownNeedsData) {
                ++unknown;
                f.fail("UNKNOWN " + v.name);
            }
            f.expect(!v.evidence.empty(), v.name + " has no evidence");
            if (v.status == Status::Curious) curious.insert(v.name);
        }
    }
    for (const auto& n : expected) f.expect(curious.count(n), "missing curious " + n);
    for (const auto& n : curious) f.expect(expected.count(n), "unexpected curious " + n);
    if (f.out.ok)
        f.out.detail = std::to_string(runs.size()) + " prime sets, " + std::to_string(total) + " verdicts, " +
                       std::to_string(curious.size()) + " curious, 0 unknown";
    else if (curious.size() != expected.size())
        f.out.detail += "; curious: " + join(curious);
    return f.out;
}

Outcome torsion_suite() {
    Failures f;
    const Registries& r = registry();
    for (const CurveEntry& c : r.curves) {
        TorsionInfo t = torsion_subgroup(c.curve);
        f.expect(t.structure == c.torsion, c.label() + " torsion " + t.str());
        f.expect(mazur_validate(t.structure), c.label() + " violates Mazur");
    }
    f.expect(torsion_subgroup(r.curve("576.e2").curve).structure == std::vector<unsigned>{2}, "576.e2 is not Z/2");
    f.expect(torsion_subgroup(r.curve("320.c2").curve).structure == std::vector<unsigned>{2, 2},
             "320.c2 is not Z/2 x Z/2");
    if (f.out.ok) f.out.detail = std::to_string(r.curves.size()) + " curves match";
    return f.out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "CRT round trip over GL2(Z/6)", 1, crt_round_trip},
        {2, "Borel genus matches X0(N), N <= 50", 120, genus_oracle},
        {3, "registry labels self-consistent", 900, label_consistency},
        {4, "genus >= 2 eliminations", 1800, genus_eliminations},
        {5, "isogeny point images", 1, isogeny_suite},
        {6, "index-2 lattice of 8.2.0.1 x 13.14.0.1", 600, index2_lattice},
        {7, "end-to-end classification", 3600, classification},
        {8, "torsion and Mazur", 5, torsion_suite},
    };

    auto t0 = std::chrono::steady_clock::now();
    registry();
    double load = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("registry load %.2fs\n", load);

    int failed = 0;
    for (const Criterion& c : all) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (s > c.budget_s) {
            o.ok = false;
            o.detail += (o.detail.empty() ? "" : "; ") + std::string("over budget");
        }
        failed += !o.ok;
        std::printf("criterion %d %s: %s (%.2fs, limit %.0fs) %s\n", c.id, c.name, o.ok ? "PASS" : "FAIL", s,
                    c.budget_s, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}
