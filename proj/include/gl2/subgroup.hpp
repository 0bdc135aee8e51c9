#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gl2/mat2.hpp"
#include "gl2/packed_set.hpp"

namespace gl2 {

inline constexpr std::size_t kDefaultCap = 20'000'000;
inline constexpr std::uint32_t kConjugacyMaxModulus = 120;

// Finitely generated subgroup of GL(2, Z/nZ). The element set is built on
// first use and shared between copies.
class Subgroup {
public:
    Subgroup(std::uint32_t n, std::vector<Mat2> gens, std::size_t cap = kDefaultCap);

    // Adopts an already-closed element list; the caller vouches for closure.
    static Subgroup from_elements(std::uint32_t n, std::vector<std::uint64_t> keys,
                                  std::vector<Mat2> gens);

    std::uint32_t modulus() const { return n_; }
    const std::vector<Mat2>& generators() const { return gens_; }
    const std::optional<std::string>& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }
    std::size_t cap() const { return cap_; }

    std::size_t order() const { return elements().keys.size(); }
    std::uint64_t index() const;
    bool contains(const Mat2& x) const;
    bool contains_key(std::uint64_t k) const { return elements().set.contains(k); }

    // Elements in breadth-first discovery order.
    const std::vector<std::uint64_t>& keys() const { return elements().keys; }

    bool materialized() const;

    std::string describe() const;

private:
    struct Elements {
        std::vector<std::uint64_t> keys;
        PackedSet set;
    };
    struct State {
        std::once_flag once;
        std::shared_ptr<const Elements> elems;
    };

    const Elements& elements() const;

    std::uint32_t n_;
    std::vector<Mat2> gens_;
    std::optional<std::string> label_;
    std::size_t cap_;
    std::shared_ptr<State> state_;
};

// Breadth-first closure under right multiplication by the generators.
Subgroup closure(const std::vector<Mat2>& gens, std::uint32_t n, std::size_t cap = kDefaultCap);

Subgroup gl2_group(std::uint32_t n);
Subgroup sl2_group(std::uint32_t n);

// Small generating set of {u unit mod n : u = 1 mod m}, chosen greedily.
std::vector<std::uint32_t> unit_generators(std::uint32_t n, std::uint32_t m = 1);

Subgroup reduce(const Subgroup& h, std::uint32_t m);
Subgroup conjugate_by(const Subgroup& h, const Mat2& x);
bool is_subgroup_of(const Subgroup& a, const Subgroup& b);
bool same_group(const Subgroup& a, const Subgroup& b);

bool contains_minus_id(const Subgroup& h);
std::vector<std::uint32_t> det_image(const Subgroup& h);
bool det_image_is_full(const Subgroup& h);
bool has_complex_conjugation(const Subgroup& h);

std::uint32_t level(const Subgroup& h);
Subgroup preimage(const Subgroup& h, std::uint32_t target);
Subgroup product_group(const Subgroup& a, const Subgroup& b);

struct Fingerprint {
    std::size_t order = 0;
    std::vector<std::uint32_t> dets;
    // (trace, det, element order) -> count
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>, std::size_t> classes;
    bool operator==(const Fingerprint&) const = default;
};

Fingerprint fingerprint(const Subgroup& h);

// Some x with x h1 x^-1 = h2, or nothing. Scans GL(2, Z/nZ); n <= 120.
std::optional<Mat2> are_conjugate(const Subgroup& h1, const Subgroup& h2);
// Some x with x h1 x^-1 contained in h2, or nothing. Same modulus limit.
std::optional<Mat2> conjugate_into(const Subgroup& h1, const Subgroup& h2);

// Visits every subgroup of index n in h, n in {2, 3}, in a deterministic order.
void for_each_subgroup_of_index(const Subgroup& h, unsigned n,
                                const std::function<void(const Subgroup&)>& visit);
std::vector<Subgroup> subgroups_of_index(const Subgroup& h, unsigned n);

// <h, -Id> together with its index-2 subgroups that do not contain -Id.
std::vector<Subgroup> quadratic_twists(const Subgroup& h);

}  // namespace gl2
