#include <doctest.h>

#include <algorithm>
#include <set>
#include <variant>

#include "gen.hpp"
#include "gl2/classify.hpp"
#include "gl2/errors.hpp"

using gl2::Status;

namespace {

const gl2::Registries& shipped() {
    static const gl2::Registries r = gl2::load_registries(gl2::RegistryPaths::defaults(), gl2::Validation::Structure);
    return r;
}

// Small registry around the (3,5) products.
const std::string kGroups =
    "3.3.0.1 3 [1,2,1,1];[1,0,0,2]\n"
    "3.2.0.9 3 [1,1,0,1];[2,0,0,2]\n"
    "5.5.0.1 5 [2,0,0,1];[1,0,0,2];[0,1,1,0];[1,1,1,4]\n"
    "5.6.0.1 5 [2,0,0,1];[1,0,0,2];[1,1,0,1]\n"
    "5.10.0.1 5 [1,4,2,1];[1,0,0,4]\n";

Status status_with(const std::string& facts, const std::string& ref, const std::string& curves = "") {
    auto r = gl2::load_registries_from_text(kGroups, curves, facts, gl2::Validation::Structure);
    gl2::Classifier c(r);
    return c.curiosity_status(ref).status;
}

using Token = std::variant<unsigned long, std::string>;

std::vector<Token> tokens(const std::string& s) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.emplace_back(std::stoul(s.substr(i, j - i)));
        } else {
            while (j < s.size() && !std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.emplace_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::string random_label() {
    std::string s;
    int parts = int(gen::uniform(1, 4));
    for (int i = 0; i < parts; ++i) {
        if (i) s += gen::uniform(0, 3) ? "." : "*";
        s += std::to_string(gen::uniform(1, 120));
        if (!gen::uniform(0, 4)) s += char('A' + gen::uniform(0, 7));
    }
    return s;
}

}  // namespace

TEST_CASE("label_less orders digit runs by value") {
    CHECK(gl2::label_less("16.24.1.5", "16.24.1.19"));
    CHECK_FALSE(gl2::label_less("16.24.1.19", "16.24.1.5"));
    CHECK(gl2::label_less("8.2.0.1*13.14.0.1", "8.2.0.2*9.12.0.1"));
    CHECK(gl2::label_less("104.56.1.H3", "104.56.1.H4"));
    CHECK_FALSE(gl2::label_less("a", "a"));
}

TEST_CASE("property: label_less agrees with tokenwise comparison") {
    for (int i = 0; i < 2000; ++i) {
        auto a = random_label(), b = random_label();
        // Mixed kinds at the same position never occur in these labels except at
        // the suffix letters, where digits sort first as in ASCII.
        auto ta = tokens(a), tb = tokens(b);
        bool comparable = true;
        for (std::size_t k = 0; k < std::min(ta.size(), tb.size()); ++k)
            if (ta[k].index() != tb[k].index()) comparable = false;
        if (!comparable) continue;
        REQUIRE(gl2::label_less(a, b) == (ta < tb));
    }
}

TEST_CASE("status names") {
    CHECK(gl2::to_string(Status::NotCuriousGenusGe2) == "NOT_CURIOUS_GENUS_GE_2");
    CHECK(gl2::to_string(Status::Curious) == "CURIOUS");
    CHECK(gl2::to_string(Status::UnknownNeedsData) == "UNKNOWN_NEEDS_DATA");
    CHECK(gl2::to_string(Status::NotApplicable) == "NOT_APPLICABLE");
}

TEST_CASE("decision ladder on a small registry") {
    // index-3 subgroups of 3.3.0.1 x 5.5.0.1 include an admissible genus-1 one,
    // so without data the verdict stays open.
    CHECK(status_with("", "3.3.0.1*5.5.0.1") == Status::UnknownNeedsData);
    CHECK(status_with("xh 3.3.0.1*5.5.0.1 - rank=0\n", "3.3.0.1*5.5.0.1") == Status::NotCuriousRank0);
    CHECK(status_with("xh 3.3.0.1*5.5.0.1 - rank=1\ncurious 3.3.0.1*5.5.0.1 note\n", "3.3.0.1*5.5.0.1") ==
          Status::Curious);
    CHECK(status_with("witness 1a1 15 3.3.0.1*5.5.0.1\nxh 3.3.0.1*5.5.0.1 - rank=1\ncurious 3.3.0.1*5.5.0.1\n",
                      "3.3.0.1*5.5.0.1") == Status::NotCuriousWitnessCurve);
    CHECK(status_with("equiv 3.3.0.1*5.5.0.1 3.3.0.1*5.10.0.1\n", "3.3.0.1*5.5.0.1") == Status::NotCuriousPigeonhole);
    CHECK(status_with("", "3.3.0.1*5.10.0.1") == Status::NotCuriousPigeonhole);
    CHECK(status_with("", "3.3.0.1*5.6.0.1") == Status::NotCuriousGenus0);
    CHECK(status_with("", "3.2.0.9") == Status::NotApplicable);
}

TEST_CASE("rank records resolve through the curve registry") {
    std::string curves = "E1 [0,0,0,-60,176] rank=1 torsion=2 gens=(10,-24);(4,0)\n";
    CHECK(status_with("xh 3.3.0.1*5.5.0.1 E1\ncurious 3.3.0.1*5.5.0.1\n", "3.3.0.1*5.5.0.1", curves) == Status::Curious);
    CHECK(status_with("xh 5.5.0.1*3.3.0.1 E1\ncurious 3.3.0.1*5.5.0.1\n", "5.5.0.1*3.3.0.1", curves) == Status::Curious);
    CHECK_THROWS_AS(status_with("curious 3.3.0.1*5.5.0.1\n", "3.3.0.1*5.5.0.1"), gl2::MissingCurveData);
    CHECK_THROWS_AS(status_with("xh 3.3.0.1*5.5.0.1 X9\ncurious 3.3.0.1*5.5.0.1\n", "3.3.0.1*5.5.0.1"),
                    gl2::MissingCurveData);
    CHECK_THROWS_AS(status_with("equiv 3.3.0.1*5.5.0.1 5.5.0.1*3.3.0.1\n", "3.3.0.1*5.5.0.1"), gl2::ValidationError);
}

TEST_CASE("candidate keys and aliases") {
    gl2::Classifier c(shipped());
    auto k = c.candidate_for("5.5.0.1*3.3.0.1");
    CHECK(k.key == "3.3.0.1*5.5.0.1");
    CHECK(k.name == "15.15.1.1");
    CHECK(k.factors == std::vector<std::string>{"3.3.0.1", "5.5.0.1"});
    CHECK(c.candidate_for("15.15.1.1").key == "3.3.0.1*5.5.0.1");
    CHECK_THROWS_AS(c.candidate_for("3.3.0.1*9.12.0.1"), gl2::NonCoprimeModuli);
}

TEST_CASE("enumerate_candidates") {
    gl2::Classifier c(shipped());
    // The registry also carries 13.28.0.1 and 13.28.0.2, which sit inside 13.14.0.1 up to conjugacy.
    std::set<std::string> keys;
    for (const auto& cand : c.enumerate_candidates({13, 11})) {
        keys.insert(cand.key);
        CHECK(c.invariants(cand).genus >= 2);
    }
    CHECK(keys == std::set<std::string>{"11.55.1.1*13.14.0.1", "11.55.1.1*13.28.0.1", "11.55.1.1*13.28.0.2"});
    std::set<std::string> genus1;
    for (const auto& cand : c.enumerate_candidates({3, 5}))
        if (c.invariants(cand).genus == 1) genus1.insert(cand.name);
    for (const char* n : {"15.15.1.1", "15.30.1.1", "15.45.1.1"}) CHECK(genus1.count(n));
    CHECK_THROWS_AS(c.enumerate_candidates({17}), gl2::UnknownPrime);
    CHECK_THROWS_AS(c.enumerate_candidates({2, 2}), gl2::PreconditionViolated);
    CHECK_THROWS_AS(c.enumerate_candidates({2, 3, 5}), gl2::PreconditionViolated);
}

TEST_CASE("shipped verdicts for representative groups") {
    gl2::Classifier c(shipped());
    auto v = c.curiosity_status("11.55.1.1*13.14.0.1");
    CHECK(v.status == Status::NotCuriousGenusGe2);
    CHECK(v.inv.genus >= 2);
    CHECK(c.curiosity_status("13.14.0.1").status == Status::NotCuriousGenus0);
    CHECK(c.curiosity_status("2.2.0.1*13.14.0.1").status == Status::NotCuriousRank0);
    auto cover = c.curiosity_status("2.2.0.1*13.28.0.1");
    CHECK(cover.status == Status::NotCuriousRank0);
    CHECK(cover.evidence.rfind("contained in 2.2.0.1*13.14.0.1", 0) == 0);
    CHECK(c.curiosity_status("11.55.1.1").status == Status::NotCuriousWitnessCurve);
    CHECK(c.curiosity_status("15.30.1.1").status == Status::NotCuriousPigeonhole);
    auto cur = c.curiosity_status("8.2.0.1*13.14.0.1");
    CHECK(cur.status == Status::Curious);
    CHECK(cur.inv.level == 104);
    CHECK(cur.inv.index == 28);
    CHECK(cur.line().rfind("8.2.0.1*13.14.0.1 status=CURIOUS level=104 index=28 genus=1 ", 0) == 0);
    auto eq = c.curiosity_status("8.2.0.2*9.12.0.1");
    CHECK(eq.status == Status::Curious);
    CHECK(eq.evidence.rfind("same verdict as 24.24.1.2", 0) == 0);
}

TEST_CASE("property: classify is independent of the worker count") {
    gl2::Classifier a(shipped(), {gl2::kDefaultCap, 1});
    gl2::Classifier b(shipped(), {gl2::kDefaultCap, 3});
    for (std::vector<std::uint32_t> ps : {std::vector<std::uint32_t>{2, 5}, {3, 7}, {5}}) {
        auto ra = a.classify(ps), rb = b.classify(ps);
        REQUIRE(ra.verdicts.size() == rb.verdicts.size());
        for (std::size_t i = 0; i < ra.verdicts.size(); ++i) REQUIRE(ra.verdicts[i].line() == rb.verdicts[i].line());
        REQUIRE(std::is_sorted(ra.verdicts.begin(), ra.verdicts.end(),
                               [](const auto& x, const auto& y) { return gl2::label_less(x.name, y.name); }));
        for (const auto& v : ra.verdicts)
            if (v.status == Status::Curious) {
                REQUIRE(v.inv.admissible);
                REQUIRE(v.inv.genus == 1);
            }
    }
}
