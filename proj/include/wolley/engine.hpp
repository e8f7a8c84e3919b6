#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "wolley/errors.hpp"
#include "wolley/rule.hpp"
#include "wolley/sieve.hpp"
#include "wolley/support.hpp"
#include "wolley/used_set.hpp"

namespace wolley {

enum class Mode { optimized, naive };

namespace detail {

// Smallest x with x ⊆ allowed and x >= lower, if any.
inline std::optional<Term> smallest_submask_at_least(Term allowed, Term lower) noexcept {
    const Term bad = lower & ~allowed;
    if (bad == 0) return lower;
    const int h = 63 - std::countl_zero(bad);
    const Term above = h >= 63 ? 0 : ~((Term{2} << h) - 1);
    const Term room = allowed & ~lower & above;
    if (room == 0) return std::nullopt;
    const int i = std::countr_zero(room);
    const Term high = i >= 62 ? 0 : (lower >> (i + 1)) << (i + 1);
    return high | (Term{1} << i);
}

// Next submask of allowed after y in increasing order; 0 once exhausted.
inline Term next_submask(Term allowed, Term y) noexcept { return ((y | ~allowed) + 1) & allowed; }

inline Term next_with_bit(Term v, Term bit) noexcept { return (v + 1) | bit; }

}  // namespace detail

// Smallest m < bound with bit t set, m unused, no bit of `forbidden`, and at
// least one bit outside `must_escape`. Values are enumerated in increasing
// order starting from max(start, 2^t).
inline std::optional<Term> smallest_unused_with_bit(const UsedSet& used, unsigned t, Term forbidden, Term must_escape,
                                                    Term bound, Term start = 0) {
    if (t > kMaxBit) throw OverflowError("bit position " + std::to_string(t) + " reaches 2^63");
    const Term bit = Term{1} << t;
    if (forbidden & bit) return std::nullopt;
    bound = std::min(bound, kTermLimit);
    const Term free = kBitMask & ~forbidden & ~bit;
    const Term lower = start > bit ? start - bit : 0;
    auto y0 = detail::smallest_submask_at_least(free, lower);
    if (!y0) return std::nullopt;
    for (Term y = *y0;;) {
        const Term m = y | bit;
        if (m >= bound) return std::nullopt;
        if ((m & ~must_escape) != 0 && !used.contains(m)) return m;
        y = detail::next_submask(free, y);
        if (y == 0) return std::nullopt;
    }
}

inline std::optional<Term> smallest_unused_with_bit(const UsedSet& used, unsigned t, const SupportSet& forbidden,
                                                    const SupportSet& must_escape, Term bound, Term start = 0) {
    return smallest_unused_with_bit(used, t, forbidden.to_mask(), must_escape.to_mask(), bound, start);
}

/// Generated prefix of a greedy sequence plus the indexes that make the
/// next-term search incremental. Terms are 1-indexed through term().
///
/// Single writer: one step at a time, no concurrent mutation.
class SequenceState {
public:
    explicit SequenceState(Rule rule) : rule_(std::move(rule)) {
        validate_rule(rule_);
        bit_cursors_.fill(0);
        for (Term t : rule_.initial_terms) append(t);
    }

    const Rule& rule() const noexcept { return rule_; }
    std::span<const Term> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    Term term(std::size_t n) const { return terms_.at(n - 1); }
    bool used(Term v) const noexcept { return used_.contains(v); }
    const UsedSet& used_set() const noexcept { return used_; }
    Term least_unused() const noexcept { return least_unused_; }
    int max_bit() const noexcept { return max_bit_; }

    // Smallest unused value with bit t set; 0 for bits not yet seen.
    Term bit_cursor(unsigned t) const { return t <= kMaxBit ? bit_cursors_[t] : 0; }

    Term prime_cursor(std::uint64_t p) const {
        auto it = prime_cursors_.find(p);
        return it == prime_cursors_.end() ? 0 : it->second;
    }

    const SpfSieve& sieve() const noexcept { return sieve_.current(); }

    std::optional<Term> smallest_unused_with_bit(unsigned t, const SupportSet& forbidden, const SupportSet& must_escape,
                                                 Term bound) const {
        return wolley::smallest_unused_with_bit(used_, t, forbidden, must_escape, bound, bit_cursor(t));
    }

    Term next_term() { return append(peek_next()); }
    Term next_term_naive() { return append(peek_next_naive()); }

    Term peek_next() {
        require_predecessors();
        return rule_.support_kind == SupportKind::binary ? search_binary() : search_prime();
    }

    // Direct scan: the first unused m >= 1 passing the candidate test. Every
    // value below least_unused is used, so the scan starts there.
    Term peek_next_naive() {
        require_predecessors();
        const Term p1 = terms_[terms_.size() - 1];
        const Term p2 = terms_[terms_.size() - 2];
        if (rule_.support_kind == SupportKind::binary) {
            for (Term m = least_unused_; m < kTermLimit; ++m)
                if (!used_.contains(m) && is_candidate_mask(m, p1, p2, rule_.law)) return m;
            throw OverflowError("no candidate below 2^63");
        }
        const SupportSet s1 = sieve_.support(p1);
        const SupportSet s2 = sieve_.support(p2);
        for (Term m = least_unused_; m < kTermLimit; ++m) {
            if (used_.contains(m)) continue;
            if (is_candidate(sieve_.support(m), s1, s2, rule_.law)) return m;
        }
        throw OverflowError("no candidate below 2^63");
    }

    // Appends without the candidate test; duplicates are rejected.
    Term append(Term m) {
        if (m == 0) throw DomainError("terms are positive integers");
        check_term_range(m);
        if (!used_.insert(m)) throw ConfigError("value " + std::to_string(m) + " is already in the sequence");
        terms_.push_back(m);
        while (used_.contains(least_unused_)) ++least_unused_;
        if (rule_.support_kind == SupportKind::binary) {
            for (Term bits = m; bits != 0; bits &= bits - 1) {
                const unsigned t = static_cast<unsigned>(std::countr_zero(bits));
                const Term bit = Term{1} << t;
                Term& c = bit_cursors_[t];
                if (c == 0) c = bit;
                while (used_.contains(c)) c = detail::next_with_bit(c, bit);
            }
            max_bit_ = std::max(max_bit_, 63 - std::countl_zero(m));
        } else {
            const SupportSet s = sieve_.support(m);
            for (auto p : s) {
                auto [it, fresh] = prime_cursors_.try_emplace(p, p);
                Term& c = it->second;
                while (used_.contains(c)) {
                    if (c > kTermLimit - 1 - p) throw OverflowError("prime cursor reaches 2^63");
                    c += p;
                }
            }
            recent_supports_[0] = std::move(recent_supports_[1]);
            recent_supports_[1] = s;
        }
        return m;
    }

private:
    void require_predecessors() const {
        if (terms_.size() < rule_.seed_length()) throw ConfigError("state is shorter than its initial segment");
    }

    Term search_binary() const {
        const Term p1 = terms_[terms_.size() - 1];
        const Term p2 = terms_[terms_.size() - 2];
        const bool enots = rule_.law == Law::enots;
        const Term anchor = enots ? p1 : p2;
        const Term avoid = enots ? p2 : p1;
        const Term escape = enots ? p1 : 0;
        Term best = kTermLimit;
        for (Term bits = anchor & ~avoid; bits != 0; bits &= bits - 1) {
            const unsigned t = static_cast<unsigned>(std::countr_zero(bits));
            if (auto m = wolley::smallest_unused_with_bit(used_, t, avoid, escape, best, bit_cursors_[t])) best = *m;
        }
        if (best == kTermLimit) throw OverflowError("no candidate below 2^63");
        return best;
    }

    Term search_prime() const {
        const bool enots = rule_.law == Law::enots;
        const SupportSet& s1 = recent_supports_[1];
        const SupportSet& s2 = recent_supports_[0];
        const SupportSet& anchor = enots ? s1 : s2;
        const SupportSet& avoid = enots ? s2 : s1;
        auto passes = [&](Term m) {
            for (auto q : avoid)
                if (m % q == 0) return false;
            if (!enots) return true;
            for (auto q : s1)
                while (m % q == 0) m /= q;
            return m > 1;
        };
        Term best = kTermLimit;
        for (auto r : anchor) {
            if (avoid.contains(r)) continue;
            for (Term m = prime_cursors_.at(r); m < best; m += r) {
                if (!used_.contains(m) && passes(m)) {
                    best = m;
                    break;
                }
                if (m > kTermLimit - 1 - r) break;
            }
        }
        if (best == kTermLimit) throw OverflowError("no candidate below 2^63");
        return best;
    }

    Rule rule_;
    std::vector<Term> terms_;
    UsedSet used_;
    Term least_unused_ = 1;
    std::array<Term, kMaxBit + 1> bit_cursors_{};
    int max_bit_ = -1;
    std::unordered_map<std::uint64_t, Term> prime_cursors_;
    std::array<SupportSet, 2> recent_supports_;
    GrowingSieve sieve_;
};

inline SequenceState init_state(Rule rule) { return SequenceState(std::move(rule)); }

using ProgressFn = std::function<void(std::size_t)>;

inline void extend(SequenceState& state, std::size_t n, Mode mode, const ProgressFn& progress = {},
                   std::size_t progress_every = 100000) {
    while (state.size() < n) {
        if (mode == Mode::optimized) state.next_term(); else state.next_term_naive();
        if (progress && state.size() % progress_every == 0) progress(state.size());
    }
}

inline std::vector<Term> generate(const Rule& rule, std::size_t n, Mode mode = Mode::optimized,
                                  const ProgressFn& progress = {}) {
    if (n < rule.seed_length()) throw ConfigError("term count is shorter than the initial segment");
    SequenceState state(rule);
    extend(state, n, mode, progress);
    return {state.terms().begin(), state.terms().end()};
}

}  // namespace wolley
