#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "wolley/support.hpp"

namespace wolley {

// Membership over positive integers: a growable bitmap for small values and a
// hash set for whatever lands above the dense cap.
class UsedSet {
public:
    static constexpr Term kDenseCap = Term{1} << 28;

    bool contains(Term v) const noexcept {
        if (v < kDenseCap) {
            const auto w = static_cast<std::size_t>(v >> 6);
            return w < words_.size() && ((words_[w] >> (v & 63)) & 1u) != 0;
        }
        return sparse_.contains(v);
    }

    // Returns false when v was already present.
    bool insert(Term v) {
        if (v < kDenseCap) {
            const auto w = static_cast<std::size_t>(v >> 6);
            if (w >= words_.size()) words_.resize(std::max(w + 1, words_.size() * 2), 0);
            const std::uint64_t bit = std::uint64_t{1} << (v & 63);
            if (words_[w] & bit) return false;
            words_[w] |= bit;
            ++count_;
            return true;
        }
        if (!sparse_.insert(v).second) return false;
        ++count_;
        return true;
    }

    std::size_t size() const noexcept { return count_; }

private:
    std::vector<std::uint64_t> words_;
    std::unordered_set<Term> sparse_;
    std::size_t count_ = 0;
};

}  // namespace wolley
