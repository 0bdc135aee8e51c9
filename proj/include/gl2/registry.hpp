#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gl2/curve.hpp"
#include "gl2/invariants.hpp"
#include "gl2/mat2.hpp"
#include "gl2/subgroup.hpp"

namespace gl2 {

struct GroupEntry {
    std::string label;
    std::uint32_t modulus = 0;
    std::vector<Mat2> generators;
    std::string source;  // "published", "transcribed" or empty
    std::size_t line = 0;

    Subgroup group() const;
};

struct CurveEntry {
    EllipticCurve curve;
    unsigned rank = 0;
    std::vector<unsigned> torsion;  // invariant factors, empty when trivial
    // The first `rank` points generate the free part, the rest the torsion.
    std::vector<Point> generators;
    std::size_t line = 0;

    const std::string& label() const { return curve.label; }
    std::vector<Point> free_generators() const;
    std::vector<Point> torsion_generators() const;
};

// Facts file records. Group references are registry labels or products
// "A*B" of registry labels of coprime level.
struct WitnessFact {
    std::string curve;
    std::uint32_t modulus = 0;
    std::string group;
    std::size_t line = 0;
};

// The modular curve of `group` is isomorphic to `curve` ("-" when no model
// is registered); `rank` is only consulted in that case.
struct XhFact {
    std::string group;
    std::string curve;
    std::optional<unsigned> rank;
    std::size_t line = 0;
};

struct CuriousFact {
    std::string group;
    std::string note;
    std::size_t line = 0;
};

struct EquivFact {
    std::string group;
    std::string target;
    std::size_t line = 0;
};

// phi: domain -> codomain with kernel <kernel>; phi(point) is expected to be
// expect[0] g + sum expect[i] t_i in the codomain's registered basis, up to sign.
struct IsogenyFact {
    std::string domain;
    std::string codomain;
    Point kernel;
    Point point;
    std::vector<long> expect;
    std::size_t line = 0;
};

struct Facts {
    std::vector<WitnessFact> witnesses;
    std::vector<XhFact> xh;
    std::vector<CuriousFact> curious;
    std::vector<EquivFact> equiv;
    std::vector<IsogenyFact> isogenies;
};

std::vector<GroupEntry> parse_group_file(std::istream& in);
std::vector<CurveEntry> parse_curve_file(std::istream& in);
Facts parse_facts_file(std::istream& in);

enum class Validation {
    Structure,  // parsing, generator and point checks, cross references
    Full,       // also label_check on every group
};

struct RegistryPaths {
    std::string groups;
    std::string curves;
    std::string facts;
    static RegistryPaths defaults();
};

class Registries {
public:
    std::vector<GroupEntry> groups;
    std::vector<CurveEntry> curves;
    Facts facts;

    const GroupEntry* find_group(const std::string& label) const;
    const CurveEntry* find_curve(const std::string& label) const;
    const GroupEntry& group(const std::string& label) const;  // ValidationError when absent
    const CurveEntry& curve(const std::string& label) const;

    // Factor labels of a group reference, split at '*'.
    static std::vector<std::string> split_ref(const std::string& ref);
    Subgroup resolve(const std::string& ref) const;

    void index();

private:
    std::map<std::string, std::size_t> group_index_;
    std::map<std::string, std::size_t> curve_index_;
};

Registries load_registries(const RegistryPaths& paths, Validation v = Validation::Full);
// From in-memory text, mainly for tests.
Registries load_registries_from_text(const std::string& groups, const std::string& curves,
                                     const std::string& facts, Validation v = Validation::Full);

std::vector<LabelReport> check_labels(const Registries& r);

struct IsogenyCheck {
    std::string domain;
    std::string codomain;
    bool pass = false;
    bool negated = false;  // matched -phi(P)
    std::vector<long> found;
    std::string note;
    std::string line() const;
};

std::vector<IsogenyCheck> verify_isogeny_facts(const Registries& r);

}  // namespace gl2
