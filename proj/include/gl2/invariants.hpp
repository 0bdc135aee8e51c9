#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gl2/subgroup.hpp"

namespace gl2 {

inline constexpr std::size_t kCosetCap = 10'000'000;

// Permutations of the right cosets of H n SL2 in SL2(Z/NZ) induced by right
// multiplication with S = [0,-1,1,0], R = [0,-1,1,-1], T = [1,1,0,1].
struct CosetAction {
    std::vector<std::uint32_t> s, r, t;
    std::uint32_t degree() const { return static_cast<std::uint32_t>(t.size()); }
};

struct GenusData {
    std::uint64_t index = 0;
    std::uint64_t nu2 = 0;
    std::uint64_t nu3 = 0;
    std::uint64_t cusps = 0;
    std::uint64_t genus = 0;
};

struct CurveInvariants {
    std::uint32_t level = 0;
    std::uint64_t index = 0;
    std::uint64_t genus = 0;
    bool admissible = false;
    std::uint64_t nu2 = 0;
    std::uint64_t nu3 = 0;
    std::uint64_t cusps = 0;
};

bool is_admissible(const Subgroup& h);

CosetAction coset_action(const Subgroup& h, std::size_t cap = kCosetCap);

// Coset action of a direct product from the actions of its factors; pairs
// (i, j) are numbered i * degree(b) + j.
CosetAction product_action(const CosetAction& a, const CosetAction& b);

GenusData genus_from_action(const CosetAction& act);
std::uint64_t genus(const Subgroup& h);

// Genus, nu2, nu3 and cusps stay 0 when det(H) is a proper subgroup.
CurveInvariants compute_invariants(const Subgroup& h);

// Genus of X0(n) from the multiplicative closed forms.
std::uint64_t x0_genus_oracle(std::uint32_t n);

// Full preimage mod n of the upper-triangular Borel subgroup.
Subgroup borel_group(std::uint32_t n);

struct ParsedLabel {
    std::uint32_t level = 0;
    std::uint64_t index = 0;
    std::uint64_t genus = 0;
    std::string ordinal;
};

std::optional<ParsedLabel> parse_group_label(const std::string& label);

struct LabelReport {
    std::string label;
    bool pass = false;
    std::uint32_t level = 0;
    std::uint64_t index = 0;
    std::uint64_t genus = 0;
    std::string note;
    // "LABEL computed=N.i.g status=PASS|FAIL"
    std::string line() const;
};

LabelReport label_check(const std::string& label, const Subgroup& h);

}  // namespace gl2
