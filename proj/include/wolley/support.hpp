#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <vector>

#include "wolley/errors.hpp"

namespace wolley {

using Term = std::uint64_t;

// Every term and every search value stays strictly below this.
inline constexpr Term kTermLimit = Term{1} << 63;
inline constexpr unsigned kMaxBit = 62;
inline constexpr Term kBitMask = kTermLimit - 1;

inline void check_term_range(Term k) {
    if (k >= kTermLimit) throw OverflowError("term value " + std::to_string(k) + " is not below 2^63");
}

// Finite set of non-negative indices: bit positions or distinct primes.
class SupportSet {
public:
    SupportSet() = default;
    SupportSet(std::initializer_list<std::uint64_t> xs) : elems_(xs) { normalize(); }
    explicit SupportSet(std::vector<std::uint64_t> xs) : elems_(std::move(xs)) { normalize(); }

    static SupportSet from_mask(Term mask) {
        SupportSet s;
        s.elems_.reserve(static_cast<std::size_t>(std::popcount(mask)));
        for (; mask != 0; mask &= mask - 1) s.elems_.push_back(static_cast<std::uint64_t>(std::countr_zero(mask)));
        return s;
    }

    const std::vector<std::uint64_t>& elements() const noexcept { return elems_; }
    std::size_t size() const noexcept { return elems_.size(); }
    bool empty() const noexcept { return elems_.empty(); }
    bool contains(std::uint64_t x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

    auto begin() const noexcept { return elems_.begin(); }
    auto end() const noexcept { return elems_.end(); }

    // Only meaningful when every element is a bit position <= 62.
    Term to_mask() const {
        Term m = 0;
        for (auto e : elems_) {
            if (e > kMaxBit) throw OverflowError("bit position above 62");
            m |= Term{1} << e;
        }
        return m;
    }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

    friend std::ostream& operator<<(std::ostream& os, const SupportSet& s) {
        os << '{';
        for (std::size_t i = 0; i < s.elems_.size(); ++i) os << (i ? "," : "") << s.elems_[i];
        return os << '}';
    }

private:
    void normalize() {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    }

    std::vector<std::uint64_t> elems_;
};

inline SupportSet bit_support(Term k) {
    if (k == 0) throw DomainError("support of zero is undefined");
    check_term_range(k);
    return SupportSet::from_mask(k);
}

inline unsigned binary_weight(Term k) {
    if (k == 0) throw DomainError("binary weight of zero is undefined");
    return static_cast<unsigned>(std::popcount(k));
}

inline bool intersects(const SupportSet& a, const SupportSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i; else ++j;
    }
    return false;
}

// a \ b is nonempty.
inline bool escapes(const SupportSet& a, const SupportSet& b) {
    return !std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace wolley
