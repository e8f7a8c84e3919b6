#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wolley/errors.hpp"
#include "wolley/rule.hpp"
#include "wolley/sieve.hpp"
#include "wolley/support.hpp"

namespace wolley {

using Prefix = std::span<const Term>;

namespace detail {

inline Term max_term(Prefix terms) {
    Term m = 1;
    for (Term t : terms) m = std::max(m, t);
    return m;
}

inline void require_binary(const Rule& rule, const char* what) {
    if (rule.support_kind != SupportKind::binary) throw DomainError(std::string(what) + " needs a binary-support rule");
}

inline void require_bit(unsigned b) {
    if (b > kMaxBit) throw DomainError("bit position " + std::to_string(b) + " is above 62");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Characteristic truth tables

/// bits[n] = 1 iff supp(k) meets supp(terms[n]). Indexed over the sequence,
/// not over raw integers.
struct TruthTable {
    Term k = 1;
    std::vector<std::uint8_t> bits;

    std::size_t size() const noexcept { return bits.size(); }
    // 1-indexed
    bool at(std::size_t n) const { return bits.at(n - 1) != 0; }
};

inline TruthTable char_table(Prefix terms, Term k, SupportKind kind = SupportKind::binary) {
    if (k == 0) throw DomainError("char table of zero is undefined");
    TruthTable table{k, {}};
    table.bits.reserve(terms.size());
    if (kind == SupportKind::binary) {
        check_term_range(k);
        for (Term t : terms) table.bits.push_back((t & k) != 0 ? 1 : 0);
        return table;
    }
    const SpfSieve sieve = build_spf_sieve(std::max<Term>({2, k, detail::max_term(terms)}));
    const SupportSet sk = prime_support(k, sieve);
    for (Term t : terms) table.bits.push_back(intersects(sk, prime_support(t, sieve)) ? 1 : 0);
    return table;
}

// Overlapping occurrences: "11" occurs three times in 1111.
inline std::size_t count_patterns(const TruthTable& table, std::string_view pattern) {
    if (pattern.empty()) throw DomainError("empty pattern");
    std::vector<std::uint8_t> pat;
    for (char c : pattern) {
        if (c != '0' && c != '1') throw DomainError("pattern must be a 0/1 string");
        pat.push_back(c == '1' ? 1 : 0);
    }
    if (pat.size() > table.bits.size()) return 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + pat.size() <= table.bits.size(); ++i)
        if (std::equal(pat.begin(), pat.end(), table.bits.begin() + static_cast<std::ptrdiff_t>(i))) ++count;
    return count;
}

// ---------------------------------------------------------------------------
// Introductions of new bits

struct Introduction {
    unsigned bit = 0;
    bool initial = false;      // first seen inside the initial segment
    std::size_t n_first = 0;   // 1-indexed
    Term term = 0;
    std::optional<unsigned> introduced_by;  // the other bit when term has weight 2
};

struct IntroductionMap {
    std::vector<Introduction> entries;  // ordered by bit
    std::optional<Introduction> violation;

    const Introduction* find(unsigned bit) const {
        for (const auto& e : entries)
            if (e.bit == bit) return &e;
        return nullptr;
    }
};

inline IntroductionMap scan_introductions(Prefix terms, const Rule& rule) {
    detail::require_binary(rule, "introduction map");
    IntroductionMap out;
    Term seen = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Term t = terms[i];
        const bool initial = i < rule.seed_length();
        for (Term fresh = t & ~seen; fresh != 0; fresh &= fresh - 1) {
            const auto v = static_cast<unsigned>(std::countr_zero(fresh));
            Introduction e{v, initial, i + 1, t, std::nullopt};
            if (std::popcount(t) == 2) e.introduced_by = static_cast<unsigned>(std::countr_zero(t & ~(Term{1} << v)));
            if (!initial && std::popcount(t) != 2 && !out.violation) out.violation = e;
            out.entries.push_back(e);
        }
        seen |= t;
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) { return a.bit < b.bit; });
    return out;
}

inline IntroductionMap first_occurrences(Prefix terms, const Rule& rule) {
    auto map = scan_introductions(terms, rule);
    if (map.violation) {
        const auto& v = *map.violation;
        throw VerificationFailure("bit " + std::to_string(v.bit) + " first appears at n=" + std::to_string(v.n_first) +
                                  " in " + std::to_string(v.term) + ", which does not have binary weight 2");
    }
    return map;
}

// ---------------------------------------------------------------------------
// P / Q / PQ counters

struct CounterSeries {
    unsigned p = 0, q = 0;
    // Index i in [0, N]: counts among the first i terms.
    std::vector<std::size_t> P, Q, PQ;

    std::size_t length() const noexcept { return P.empty() ? 0 : P.size() - 1; }
    // P(i) >= PQ(i) and Q(i) >= PQ(i)
    bool dominated(std::size_t i) const { return P.at(i) >= PQ.at(i) && Q.at(i) >= PQ.at(i); }
};

inline CounterSeries pq_counters(Prefix terms, unsigned p, unsigned q) {
    if (p == q) throw DomainError("p and q must differ");
    detail::require_bit(p);
    detail::require_bit(q);
    const Term bp = Term{1} << p, bq = Term{1} << q;
    CounterSeries s{p, q, {0}, {0}, {0}};
    std::unordered_set<Term> seen;
    std::size_t cp = 0, cq = 0, cpq = 0;
    for (Term t : terms) {
        if (seen.insert(t).second) {
            const bool hp = (t & bp) != 0, hq = (t & bq) != 0;
            if (hp && hq) ++cpq;
            else if (hp) ++cp;
            else if (hq) ++cq;
        }
        s.P.push_back(cp);
        s.Q.push_back(cq);
        s.PQ.push_back(cpq);
    }
    return s;
}

// ---------------------------------------------------------------------------
// (p, q) pair pattern

struct PairState {
    bool has_p = false, has_q = false;
    friend bool operator==(const PairState&, const PairState&) = default;
};

struct PairViolation {
    char kind;          // 'a': (1,1) not followed by (0,0) two steps later; 'b': alternating triple
    std::size_t index;  // 1-indexed start of the offending window
};

struct RunStats {
    std::size_t runs = 0;
    std::size_t longest = 0;
    std::size_t total = 0;
    double mean() const noexcept { return runs ? static_cast<double>(total) / static_cast<double>(runs) : 0.0; }
};

struct PairPatternReport {
    unsigned p = 0, q = 0;
    std::vector<PairState> f;
    std::vector<PairViolation> violations;
    RunStats ones, zeros;  // runs of char_k for k = 2^p + 2^q
};

inline PairPatternReport scan_pair_pattern(Prefix terms, unsigned p, unsigned q, std::size_t seed_length) {
    if (p == q) throw DomainError("p and q must differ");
    detail::require_bit(p);
    detail::require_bit(q);
    const Term bp = Term{1} << p, bq = Term{1} << q;
    PairPatternReport r{p, q, {}, {}, {}, {}};
    r.f.reserve(terms.size());
    for (Term t : terms) r.f.push_back({(t & bp) != 0, (t & bq) != 0});

    constexpr PairState s00{false, false}, s01{false, true}, s10{true, false}, s11{true, true};
    for (std::size_t j = 0; j + 2 < r.f.size(); ++j) {
        if (j + 3 <= seed_length) continue;  // window end still inside the initial segment
        const auto &a = r.f[j], &b = r.f[j + 1], &c = r.f[j + 2];
        if (a == s11 && !(c == s00)) r.violations.push_back({'a', j + 1});
        if ((a == s10 && b == s01 && c == s10) || (a == s01 && b == s10 && c == s01)) r.violations.push_back({'b', j + 1});
    }

    auto close = [](RunStats& s, std::size_t len) {
        if (len == 0) return;
        ++s.runs;
        s.total += len;
        s.longest = std::max(s.longest, len);
    };
    std::size_t run = 0;
    bool cur = false;
    for (std::size_t i = 0; i < r.f.size(); ++i) {
        const bool v = r.f[i].has_p || r.f[i].has_q;
        if (i > 0 && v != cur) {
            close(cur ? r.ones : r.zeros, run);
            run = 0;
        }
        cur = v;
        ++run;
    }
    close(cur ? r.ones : r.zeros, run);
    return r;
}

inline PairPatternReport pair_pattern(Prefix terms, unsigned p, unsigned q, std::size_t seed_length) {
    auto r = scan_pair_pattern(terms, p, q, seed_length);
    if (!r.violations.empty()) {
        const auto& v = r.violations.front();
        throw VerificationFailure(std::string("pair pattern exclusion (") + v.kind + ") fails at n=" +
                                  std::to_string(v.index) + " for bits " + std::to_string(p) + "," + std::to_string(q));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Coverage

struct CoverageReport {
    std::size_t prefix_length = 0;
    Term bound = 0;
    std::vector<Term> present;  // weight >= 2, <= bound, ascending
    std::vector<Term> missing;
    Term least_absent = 0;      // over all weight >= 2 integers
};

inline CoverageReport coverage(Prefix terms, Term bound) {
    if (bound < 3) throw DomainError("coverage bound must be at least 3");
    std::unordered_set<Term> seen(terms.begin(), terms.end());
    CoverageReport r{terms.size(), bound, {}, {}, 0};
    for (Term v = 3; v <= bound; ++v) {
        if (std::popcount(v) < 2) continue;
        (seen.contains(v) ? r.present : r.missing).push_back(v);
    }
    Term v = 3;
    while (std::popcount(v) < 2 || seen.contains(v)) ++v;
    r.least_absent = v;
    return r;
}

// ---------------------------------------------------------------------------
// Candidacy skips

struct SkipEntry {
    Term k = 0;
    std::optional<std::size_t> appeared_at;  // 1-indexed
    std::size_t skips = 0;
    bool within_bound() const noexcept { return skips + 1 <= k; }
};

struct SkipReport {
    Term kmax = 0;
    std::vector<SkipEntry> entries;  // eligible k <= kmax, ascending

    const SkipEntry* find(Term k) const {
        for (const auto& e : entries)
            if (e.k == k) return &e;
        return nullptr;
    }
    const SkipEntry* first_violation() const {
        for (const auto& e : entries)
            if (!e.within_bound()) return &e;
        return nullptr;
    }
};

/// Replays the prefix and counts, for each eligible k <= kmax, the steps at
/// which k was an unused candidate but something else was chosen. A value
/// can only be passed over by distinct smaller values, so skips <= k - 1.
inline SkipReport scan_candidacy_skips(Prefix terms, const Rule& rule, Term kmax) {
    if (kmax < 3) throw DomainError("kmax must be at least 3");
    SkipReport r{kmax, {}};
    std::unique_ptr<SpfSieve> sieve;
    std::vector<SupportSet> ksupp;
    if (rule.support_kind == SupportKind::prime)
        sieve = std::make_unique<SpfSieve>(build_spf_sieve(std::max<Term>({kmax, detail::max_term(terms), 2})));
    for (Term k = 1; k <= kmax; ++k) {
        const std::size_t size = rule.support_kind == SupportKind::binary
                                     ? static_cast<std::size_t>(std::popcount(k))
                                     : prime_support(k, *sieve).size();
        if (size < 2) continue;
        r.entries.push_back({k, std::nullopt, 0});
        if (sieve) ksupp.push_back(prime_support(k, *sieve));
    }
    std::unordered_map<Term, std::size_t> slot;
    for (std::size_t e = 0; e < r.entries.size(); ++e) slot.emplace(r.entries[e].k, e);
    auto mark = [&](Term t, std::size_t n) {
        if (auto it = slot.find(t); it != slot.end() && !r.entries[it->second].appeared_at)
            r.entries[it->second].appeared_at = n;
    };

    const std::size_t seed = rule.seed_length();
    for (std::size_t i = 0; i < std::min(seed, terms.size()); ++i) mark(terms[i], i + 1);
    for (std::size_t i = seed; i < terms.size(); ++i) {
        const Term chosen = terms[i];
        if (i >= 2) {
            SupportSet s1, s2;
            if (sieve) {
                s1 = prime_support(terms[i - 1], *sieve);
                s2 = prime_support(terms[i - 2], *sieve);
            }
            for (std::size_t e = 0; e < r.entries.size(); ++e) {
                auto& entry = r.entries[e];
                if (entry.appeared_at || entry.k == chosen) continue;
                const bool cand = sieve ? is_candidate(ksupp[e], s1, s2, rule.law)
                                        : is_candidate_mask(entry.k, terms[i - 1], terms[i - 2], rule.law);
                if (cand) ++entry.skips;
            }
        }
        mark(chosen, i + 1);
    }
    return r;
}

inline SkipReport candidacy_skips(Prefix terms, const Rule& rule, Term kmax) {
    auto r = scan_candidacy_skips(terms, rule, kmax);
    if (const auto* v = r.first_violation())
        throw VerificationFailure("value " + std::to_string(v->k) + " was passed over " + std::to_string(v->skips) +
                                  " times, above the bound " + std::to_string(v->k - 1));
    return r;
}

// ---------------------------------------------------------------------------
// Full invariant battery

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;  // first counterexample when failed
};

struct VerificationReport {
    std::size_t prefix_length = 0;
    std::vector<CheckResult> checks;

    bool passed() const noexcept {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }
    const CheckResult* find(std::string_view name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

struct VerifyOptions {
    unsigned pair_cap = 8;  // bit pairs p < q <= pair_cap
    Term kmax = 512;        // 0 disables the skip replay
};

namespace detail {

// Which adjacency condition a window breaks first; empty when legal.
inline std::string failed_condition(const SupportSet& m, const SupportSet& p1, const SupportSet& p2, Law law) {
    if (law == Law::enots) {
        if (!intersects(m, p1)) return "(i)";
        if (intersects(m, p2)) return "(ii)";
        if (!escapes(m, p1)) return "(iii)";
        return {};
    }
    if (intersects(m, p1)) return "(avoid previous)";
    if (!intersects(m, p2)) return "(share with second previous)";
    return {};
}

}  // namespace detail

inline VerificationReport verify_prefix(Prefix terms, const Rule& rule, const VerifyOptions& opts = {}) {
    VerificationReport rep{terms.size(), {}};
    const std::size_t seed = rule.seed_length();
    const bool binary = rule.support_kind == SupportKind::binary;

    std::unique_ptr<SpfSieve> sieve;
    if (!binary) sieve = std::make_unique<SpfSieve>(build_spf_sieve(std::max<Term>(2, detail::max_term(terms))));
    auto supp = [&](Term t) { return binary ? bit_support(t) : prime_support(t, *sieve); };

    {
        CheckResult c{"initial-segment", true, {}};
        for (std::size_t i = 0; i < std::min(seed, terms.size()); ++i)
            if (terms[i] != rule.initial_terms[i]) {
                c = {c.name, false, "n=" + std::to_string(i + 1) + ": " + std::to_string(terms[i]) + " expected " +
                                        std::to_string(rule.initial_terms[i])};
                break;
            }
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"distinct", true, {}};
        std::unordered_map<Term, std::size_t> where;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i] == 0) {
                c = {c.name, false, "n=" + std::to_string(i + 1) + ": zero term"};
                break;
            }
            auto [it, fresh] = where.emplace(terms[i], i + 1);
            if (!fresh) {
                c = {c.name, false, "value " + std::to_string(terms[i]) + " at n=" + std::to_string(it->second) +
                                        " and n=" + std::to_string(i + 1)};
                break;
            }
        }
        rep.checks.push_back(c);
        if (!c.passed) return rep;  // the remaining checks presume positive distinct terms
    }
    {
        CheckResult legal{"conditions", true, {}};
        CheckResult elig{"eligibility", true, {}};
        for (std::size_t i = std::max<std::size_t>(seed, 2); i < terms.size(); ++i) {
            const SupportSet m = supp(terms[i]);
            if (legal.passed) {
                auto why = detail::failed_condition(m, supp(terms[i - 1]), supp(terms[i - 2]), rule.law);
                if (!why.empty())
                    legal = {legal.name, false,
                             "condition " + why + " fails at n=" + std::to_string(i + 1) + " (" + std::to_string(terms[i]) +
                                 " after " + std::to_string(terms[i - 2]) + ", " + std::to_string(terms[i - 1]) + ")"};
            }
            if (elig.passed && m.size() < rule.eligibility)
                elig = {elig.name, false, "n=" + std::to_string(i + 1) + ": support of " + std::to_string(terms[i]) +
                                              " has size " + std::to_string(m.size())};
            if (!legal.passed && !elig.passed) break;
        }
        rep.checks.push_back(legal);
        rep.checks.push_back(elig);
    }

    if (binary && rule.law == Law::enots) {
        {
            CheckResult c{"introductions", true, {}};
            const auto map = scan_introductions(terms, rule);
            if (map.violation)
                c = {c.name, false, "bit " + std::to_string(map.violation->bit) + " introduced at n=" +
                                        std::to_string(map.violation->n_first) + " by " +
                                        std::to_string(map.violation->term)};
            rep.checks.push_back(c);
        }
        int max_bit = -1;
        for (Term t : terms) max_bit = std::max(max_bit, 63 - std::countl_zero(t));
        {
            CheckResult c{"no-111", true, {}};
            for (int m = 0; m <= max_bit && c.passed; ++m) {
                const Term bm = Term{1} << m;
                for (std::size_t j = std::max<std::size_t>(seed, 2); j < terms.size(); ++j)
                    if ((terms[j] & bm) && (terms[j - 1] & bm) && (terms[j - 2] & bm)) {
                        c = {c.name, false, "char of 2^" + std::to_string(m) + " has 111 ending at n=" + std::to_string(j + 1)};
                        break;
                    }
            }
            rep.checks.push_back(c);
        }
        {
            CheckResult c{"pair-exclusions", true, {}};
            for (unsigned q = 1; q <= opts.pair_cap && c.passed; ++q)
                for (unsigned p = 0; p < q && c.passed; ++p) {
                    const auto r = scan_pair_pattern(terms, p, q, seed);
                    if (!r.violations.empty())
                        c = {c.name, false, std::string("exclusion (") + r.violations.front().kind + ") at n=" +
                                                std::to_string(r.violations.front().index) + " for bits " +
                                                std::to_string(p) + "," + std::to_string(q)};
                }
            rep.checks.push_back(c);
        }
    }

    if (opts.kmax >= 3) {
        CheckResult c{"skip-bound", true, {}};
        const auto r = scan_candidacy_skips(terms, rule, opts.kmax);
        if (const auto* v = r.first_violation())
            c = {c.name, false, std::to_string(v->k) + " skipped " + std::to_string(v->skips) + " times"};
        rep.checks.push_back(c);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Term-by-column grid: bit coefficients or prime multiplicities

struct Grid {
    std::vector<std::uint64_t> columns;            // bit positions or primes, ascending
    std::vector<Term> values;                      // one per row
    std::vector<std::vector<unsigned>> cells;      // 0 renders blank
};

inline Grid support_grid(Prefix terms, SupportKind kind, std::size_t rows = 34) {
    Grid g;
    const auto used = terms.first(std::min(rows, terms.size()));
    g.values.assign(used.begin(), used.end());
    std::vector<std::map<std::uint64_t, unsigned>> per_row;
    std::map<std::uint64_t, unsigned> all;
    if (kind == SupportKind::binary) {
        for (Term t : used) {
            std::map<std::uint64_t, unsigned> row;
            for (auto b : bit_support(t)) row[b] = 1;
            per_row.push_back(std::move(row));
        }
    } else {
        const SpfSieve sieve = build_spf_sieve(std::max<Term>(2, detail::max_term(used)));
        for (Term t : used) {
            std::map<std::uint64_t, unsigned> row;
            for (; t > 1; t /= sieve.spf(t)) ++row[sieve.spf(t)];
            per_row.push_back(std::move(row));
        }
    }
    for (const auto& row : per_row)
        for (const auto& [c, _] : row) all[c] = 1;
    if (kind == SupportKind::binary && !all.empty())
        for (std::uint64_t b = 0; b <= all.rbegin()->first; ++b) all[b] = 1;
    for (const auto& [c, _] : all) g.columns.push_back(c);
    for (const auto& row : per_row) {
        std::vector<unsigned> cells;
        for (auto c : g.columns) {
            auto it = row.find(c);
            cells.push_back(it == row.end() ? 0 : it->second);
        }
        g.cells.push_back(std::move(cells));
    }
    return g;
}

}  // namespace wolley
