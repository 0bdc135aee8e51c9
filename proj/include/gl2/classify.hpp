#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gl2/invariants.hpp"
#include "gl2/registry.hpp"
#include "gl2/subgroup.hpp"

namespace gl2 {

enum class Status {
    NotApplicable,
    NotCuriousGenusGe2,
    NotCuriousGenus0,
    NotCuriousRank0,
    NotCuriousPigeonhole,
    NotCuriousWitnessCurve,
    Curious,
    UnknownNeedsData,
};

std::string to_string(Status s);

// Label order comparing digit runs numerically: 16.24.1.5 before 16.24.1.19.
bool label_less(const std::string& a, const std::string& b);

// A direct product of registry groups of pairwise coprime prime-power level,
// or a single registry group.
struct Candidate {
    std::string key;                   // factor labels joined by '*', ordered by modulus
    std::string name;                  // registry label when one names this product, else key
    std::vector<std::string> factors;  // one entry for a single group
};

struct Verdict {
    std::string name;
    std::string key;
    CurveInvariants inv;
    Status status = Status::UnknownNeedsData;
    std::string evidence;
    std::string line() const;
};

struct ClassifyReport {
    std::vector<std::uint32_t> primes;
    std::vector<Verdict> verdicts;  // ordered by name
    std::vector<Verdict> curious() const;
    std::size_t count(Status s) const;
};

struct ClassifierOptions {
    std::size_t cap = kDefaultCap;
    unsigned jobs = 1;
};

inline constexpr std::uint32_t kSupportedPrimes[] = {2, 3, 5, 7, 11, 13};

class Classifier {
public:
    explicit Classifier(const Registries& reg, ClassifierOptions opts = {});

    // Registry groups of prime-power level whose factors are admissible and of
    // genus <= 1, and their pairwise products for two primes.
    std::vector<Candidate> enumerate_candidates(const std::vector<std::uint32_t>& primes);

    Candidate candidate_for(const std::string& ref);
    Verdict curiosity_status(const Candidate& c);
    Verdict curiosity_status(const std::string& ref) { return curiosity_status(candidate_for(ref)); }

    ClassifyReport classify(const std::vector<std::uint32_t>& primes);

    CurveInvariants invariants(const Candidate& c);
    Subgroup group(const Candidate& c) const;

private:
    struct Factor {
        Subgroup group;
        std::uint32_t prime = 0;
        CurveInvariants inv;
        std::optional<CosetAction> action;  // admissible factors only
    };

    const Factor& factor(const std::string& label);
    void build_aliases();
    std::string canonical_key(const std::string& ref);
    std::optional<unsigned> xh_rank(const XhFact& x, bool required) const;
    std::optional<std::string> rank0_cover(const Candidate& c);
    bool factor_conjugate_into(const std::string& a, const std::string& b);
    std::optional<std::string> low_genus_subgroup(const Candidate& c);
    Verdict status_impl(const Candidate& c, unsigned depth);

    const Registries& reg_;
    ClassifierOptions opts_;

    std::mutex mu_;
    std::map<std::string, std::shared_ptr<Factor>> factors_;
    std::map<std::pair<std::string, std::string>, bool> into_;
    std::once_flag aliases_once_;
    std::map<std::string, std::string> alias_key_;    // composite label -> product key
    std::map<std::string, std::string> key_name_;     // product key -> composite label
};

}  // namespace gl2
