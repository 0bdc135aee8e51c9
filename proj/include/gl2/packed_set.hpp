#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gl2 {

// Open-addressing hash set of packed matrix keys. ~0 marks an empty slot.
class PackedSet {
public:
    static constexpr std::uint64_t kEmpty = ~std::uint64_t(0);

    explicit PackedSet(std::size_t expected = 16) { rehash(capacity_for(expected)); }

    std::size_t size() const { return size_; }

    bool contains(std::uint64_t k) const {
        std::size_t i = slot(k);
        while (true) {
            std::uint64_t s = slots_[i];
            if (s == k) return true;
            if (s == kEmpty) return false;
            i = (i + 1) & mask_;
        }
    }

    // Returns true if k was newly inserted.
    bool insert(std::uint64_t k) {
        if ((size_ + 1) * 2 > slots_.size()) rehash(slots_.size() * 2);
        std::size_t i = slot(k);
        while (true) {
            std::uint64_t s = slots_[i];
            if (s == k) return false;
            if (s == kEmpty) {
                slots_[i] = k;
                ++size_;
                return true;
            }
            i = (i + 1) & mask_;
        }
    }

    void reserve(std::size_t n) {
        std::size_t want = capacity_for(n);
        if (want > slots_.size()) rehash(want);
    }

private:
    static std::size_t capacity_for(std::size_t n) {
        std::size_t c = 16;
        while (c < 2 * n + 2) c <<= 1;
        return c;
    }

    std::size_t slot(std::uint64_t k) const {
        return static_cast<std::size_t>((k * 0x9E3779B97F4A7C15ull) >> shift_);
    }

    void rehash(std::size_t cap) {
        std::vector<std::uint64_t> old;
        old.swap(slots_);
        slots_.assign(cap, kEmpty);
        mask_ = cap - 1;
        shift_ = 64;
        for (std::size_t c = cap; c > 1; c >>= 1) --shift_;
        size_ = 0;
        for (std::uint64_t k : old)
            if (k != kEmpty) insert(k);
    }

    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
    unsigned shift_ = 64;
    std::size_t size_ = 0;
};

// Key -> uint32 value map with the same probing scheme.
class PackedMap {
public:
    static constexpr std::uint64_t kEmpty = ~std::uint64_t(0);
    static constexpr std::uint32_t kMissing = ~std::uint32_t(0);

    explicit PackedMap(std::size_t expected = 16) { rehash(capacity_for(expected)); }

    std::size_t size() const { return size_; }

    std::uint32_t get(std::uint64_t k) const {
        std::size_t i = slot(k);
        while (true) {
            std::uint64_t s = keys_[i];
            if (s == k) return vals_[i];
            if (s == kEmpty) return kMissing;
            i = (i + 1) & mask_;
        }
    }

    // Inserts when absent; returns the stored value either way.
    std::uint32_t emplace(std::uint64_t k, std::uint32_t v) {
        if ((size_ + 1) * 2 > keys_.size()) rehash(keys_.size() * 2);
        std::size_t i = slot(k);
        while (true) {
            std::uint64_t s = keys_[i];
            if (s == k) return vals_[i];
            if (s == kEmpty) {
                keys_[i] = k;
                vals_[i] = v;
                ++size_;
                return v;
            }
            i = (i + 1) & mask_;
        }
    }

    void reserve(std::size_t n) {
        std::size_t want = capacity_for(n);
        if (want > keys_.size()) rehash(want);
    }

private:
    static std::size_t capacity_for(std::size_t n) {
        std::size_t c = 16;
        while (c < 2 * n + 2) c <<= 1;
        return c;
    }

    std::size_t slot(std::uint64_t k) const {
        return static_cast<std::size_t>((k * 0x9E3779B97F4A7C15ull) >> shift_);
    }

    void rehash(std::size_t cap) {
        std::vector<std::uint64_t> ok;
        std::vector<std::uint32_t> ov;
        ok.swap(keys_);
        ov.swap(vals_);
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, kMissing);
        mask_ = cap - 1;
        shift_ = 64;
        for (std::size_t c = cap; c > 1; c >>= 1) --shift_;
        size_ = 0;
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (ok[i] != kEmpty) emplace(ok[i], ov[i]);
    }

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> vals_;
    std::size_t mask_ = 0;
    unsigned shift_ = 64;
    std::size_t size_ = 0;
};

}  // namespace gl2
