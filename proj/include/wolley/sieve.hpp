#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wolley/errors.hpp"
#include "wolley/support.hpp"

namespace wolley {

// 2^27 entries of uint32 is 512 MiB.
inline constexpr std::uint64_t kSieveBudget = std::uint64_t{1} << 27;

// Smallest-prime-factor table for 2..limit. Immutable once built.
class SpfSieve {
public:
    std::uint64_t limit() const noexcept { return spf_.size() - 1; }

    std::uint64_t spf(std::uint64_t x) const {
        if (x < 2) throw DomainError("smallest prime factor is defined for x >= 2");
        if (x > limit()) throw SieveTooSmall(x, limit());
        return spf_[x];
    }

    bool is_prime(std::uint64_t x) const { return x >= 2 && spf(x) == x; }

    const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }

private:
    friend SpfSieve build_spf_sieve(std::uint64_t limit);
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint64_t> primes_;
};

// Linear sieve: every composite is struck exactly once by its smallest prime.
inline SpfSieve build_spf_sieve(std::uint64_t limit) {
    if (limit < 2) throw DomainError("sieve limit must be at least 2");
    if (limit > kSieveBudget) throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds memory budget");
    SpfSieve s;
    s.spf_.assign(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (s.spf_[i] == 0) {
            s.spf_[i] = static_cast<std::uint32_t>(i);
            s.primes_.push_back(i);
        }
        const std::uint64_t si = s.spf_[i];
        for (std::uint64_t p : s.primes_) {
            if (p > si || p * i > limit) break;
            s.spf_[p * i] = static_cast<std::uint32_t>(p);
        }
    }
    return s;
}

inline SupportSet prime_support(Term k, const SpfSieve& sieve) {
    if (k == 0) throw DomainError("support of zero is undefined");
    if (k == 1) return {};
    if (k > sieve.limit()) throw SieveTooSmall(k, sieve.limit());
    std::vector<std::uint64_t> ps;
    while (k > 1) {
        const auto p = sieve.spf(k);
        ps.push_back(p);
        while (k % p == 0) k /= p;
    }
    return SupportSet(std::move(ps));
}

// Owns a sieve and rebuilds it at double the limit whenever a query runs past it.
class GrowingSieve {
public:
    explicit GrowingSieve(std::uint64_t initial_limit = 1024)
        : sieve_(std::make_shared<const SpfSieve>(build_spf_sieve(std::max<std::uint64_t>(initial_limit, 2)))) {}

    const SpfSieve& covering(std::uint64_t value) {
        if (value > sieve_->limit()) {
            std::uint64_t lim = sieve_->limit();
            while (lim < value) lim *= 2;
            sieve_ = std::make_shared<const SpfSieve>(build_spf_sieve(lim));
        }
        return *sieve_;
    }

    const SpfSieve& current() const noexcept { return *sieve_; }
    std::shared_ptr<const SpfSieve> share() const noexcept { return sieve_; }

    SupportSet support(Term k) { return prime_support(k, covering(k)); }

private:
    std::shared_ptr<const SpfSieve> sieve_;
};

}  // namespace wolley
