#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracle.hpp"
#include "wolley/engine.hpp"

using namespace wolley;

namespace {

UsedSet used_of(std::initializer_list<Term> xs) {
    UsedSet u;
    for (Term x : xs) u.insert(x);
    return u;
}

SequenceState state_with(const Rule& rule, std::initializer_list<Term> tail) {
    SequenceState s(rule);
    for (Term t : tail) s.append(t);
    return s;
}

Rule binary_yellowstone() { return make_rule("binary-yellowstone", SupportKind::binary, Law::yellowstone, {1, 2}); }

oracle::Kind kind_of(const Rule& r) { return r.support_kind == SupportKind::binary ? oracle::Kind::binary : oracle::Kind::prime; }
oracle::Law law_of(const Rule& r) { return r.law == Law::enots ? oracle::Law::enots : oracle::Law::yellowstone; }

}  // namespace

TEST(InitState, Defaults) {
    const auto b = init_state(binary_enots());
    EXPECT_EQ(std::vector<Term>(b.terms().begin(), b.terms().end()), (std::vector<Term>{1, 2}));
    const auto p = init_state(prime_enots());
    EXPECT_EQ(std::vector<Term>(p.terms().begin(), p.terms().end()), (std::vector<Term>{1, 2}));
    const auto y = init_state(yellowstone());
    EXPECT_EQ(std::vector<Term>(y.terms().begin(), y.terms().end()), (std::vector<Term>{1, 2, 3}));
    EXPECT_EQ(y.least_unused(), 4u);
}

TEST(InitState, RejectsBadSegments) {
    EXPECT_THROW(init_state(make_rule("x", SupportKind::binary, Law::enots, {2, 2})), ConfigError);
    EXPECT_THROW(init_state(make_rule("x", SupportKind::binary, Law::enots, {0, 3})), ConfigError);
}

TEST(NextTerm, Examples) {
    auto s = init_state(binary_enots());
    EXPECT_EQ(s.next_term(), 6u);
    EXPECT_EQ(s.next_term(), 5u);
    auto p = state_with(prime_enots(), {6});
    EXPECT_EQ(p.next_term(), 15u);
}

TEST(NextTermNaive, Examples) {
    auto s = init_state(binary_enots());
    EXPECT_EQ(s.next_term_naive(), 6u);
    EXPECT_EQ(s.next_term_naive(), 5u);
    EXPECT_EQ(s.next_term_naive(), 9u);
}

TEST(Generate, Examples) {
    EXPECT_EQ(generate(binary_enots(), 4, Mode::naive), (std::vector<Term>{1, 2, 6, 5}));
    EXPECT_EQ(generate(binary_enots(), 2, Mode::naive), (std::vector<Term>{1, 2}));
    EXPECT_EQ(generate(binary_enots(), 2, Mode::optimized), (std::vector<Term>{1, 2}));
    EXPECT_EQ(generate(prime_enots(), 6, Mode::naive), (std::vector<Term>{1, 2, 6, 15, 35, 14}));
    EXPECT_THROW(generate(yellowstone(), 2), ConfigError);
}

TEST(SmallestUnusedWithBit, Examples) {
    EXPECT_EQ(smallest_unused_with_bit(used_of({1, 2, 6}), 2, SupportSet{1}, SupportSet{1, 2}, 16), Term{5});
    EXPECT_EQ(smallest_unused_with_bit(used_of({1, 2, 6, 5}), 0, SupportSet{1, 2}, SupportSet{0, 2}, 9), std::nullopt);
    EXPECT_EQ(smallest_unused_with_bit(UsedSet{}, 0, SupportSet{}, SupportSet{}, 2), Term{1});
    EXPECT_THROW(smallest_unused_with_bit(UsedSet{}, 63, Term{0}, Term{0}, kTermLimit), OverflowError);
}

TEST(SmallestUnusedWithBit, StateCursorAgreesWithFreshScan) {
    auto s = init_state(binary_enots());
    extend(s, 500, Mode::optimized);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const unsigned t = static_cast<unsigned>(rng() % 10);
        const Term forbidden = rng() & 0x3ff & ~(Term{1} << t);
        const Term escape = rng() & 0x3ff;
        const Term bound = 1 + rng() % 4096;
        const auto got = s.smallest_unused_with_bit(t, SupportSet::from_mask(forbidden), SupportSet::from_mask(escape), bound);
        std::optional<Term> want;
        for (Term m = 1; m < bound; ++m)
            if ((m >> t & 1) && !(m & forbidden) && (m & ~escape) && !s.used(m)) {
                want = m;
                break;
            }
        ASSERT_EQ(got, want) << "t=" << t << " forbidden=" << forbidden << " escape=" << escape << " bound=" << bound;
    }
}

TEST(Submask, SmallestAtLeastMatchesScan) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20000; ++i) {
        const Term allowed = rng() & 0xfff;
        const Term lower = rng() & 0x1fff;
        std::optional<Term> want;
        for (Term x = lower; x < 0x2000; ++x)
            if ((x & ~allowed) == 0) {
                want = x;
                break;
            }
        ASSERT_EQ(detail::smallest_submask_at_least(allowed, lower), want) << allowed << " " << lower;
    }
}

// Independent construction from the definitions, short prefixes.
TEST(Generate, MatchesDefinitionLevelOracle) {
    for (const Rule& rule : {binary_enots(), prime_enots(), yellowstone(), binary_yellowstone()}) {
        const auto ref = oracle::generate(rule.initial_terms, 400, kind_of(rule), law_of(rule));
        EXPECT_EQ(generate(rule, 400, Mode::optimized), ref) << rule.id;
        EXPECT_EQ(generate(rule, 400, Mode::naive), ref) << rule.id;
    }
}

TEST(Generate, OptimizedEqualsNaive) {
    for (const Rule& rule : {binary_enots(), prime_enots(), yellowstone(), binary_yellowstone()})
        EXPECT_EQ(generate(rule, 3000, Mode::optimized), generate(rule, 3000, Mode::naive)) << rule.id;
}

TEST(Generate, CustomInitialSegment) {
    const Rule r = make_rule("seeded", SupportKind::binary, Law::enots, {3, 12});
    const auto ref = oracle::generate({3, 12}, 300, oracle::Kind::binary, oracle::Law::enots);
    EXPECT_EQ(generate(r, 300), ref);
}

TEST(SequenceState, LegalityMinimalityDistinctness) {
    for (const Rule& rule : {binary_enots(), prime_enots(), yellowstone()}) {
        const auto terms = generate(rule, 4000);
        std::map<Term, std::size_t> pos;
        for (std::size_t i = 0; i < terms.size(); ++i) ASSERT_TRUE(pos.emplace(terms[i], i).second) << rule.id;
        const auto sieve = build_spf_sieve(*std::max_element(terms.begin(), terms.end()) + 1);
        for (std::size_t i = rule.seed_length(); i < terms.size(); ++i) {
            ASSERT_TRUE(is_candidate(terms[i], terms[i - 1], terms[i - 2], rule, &sieve)) << rule.id << " n=" << i + 1;
            if (rule.support_kind == SupportKind::binary && rule.law == Law::enots) { ASSERT_GE(binary_weight(terms[i]), 2u); }
        }
        // minimality on every 37th index
        for (std::size_t i = rule.seed_length(); i < terms.size(); i += 37) {
            for (Term m = 1; m < terms[i]; ++m) {
                auto it = pos.find(m);
                if (it != pos.end() && it->second < i) continue;
                ASSERT_FALSE(is_candidate(m, terms[i - 1], terms[i - 2], rule, &sieve))
                    << rule.id << " n=" << i + 1 << " smaller candidate " << m;
            }
        }
    }
}

TEST(SequenceState, IndexesStayConsistent) {
    auto s = init_state(binary_enots());
    std::array<Term, kMaxBit + 1> last{};
    for (int step = 0; step < 3000; ++step) {
        s.next_term();
        Term lu = 1;
        while (s.used(lu)) ++lu;
        ASSERT_EQ(s.least_unused(), lu);
        for (unsigned t = 0; t <= static_cast<unsigned>(s.max_bit()); ++t) {
            const Term c = s.bit_cursor(t);
            ASSERT_GE(c, last[t]) << "cursor " << t << " moved backwards";
            last[t] = c;
            ASSERT_TRUE(c >> t & 1);
            ASSERT_FALSE(s.used(c));
        }
    }
    // every number with bit t below the cursor is used
    for (unsigned t = 0; t <= 6; ++t)
        for (Term m = Term{1} << t; m < s.bit_cursor(t); m = (m + 1) | (Term{1} << t)) ASSERT_TRUE(s.used(m));
}

TEST(SequenceState, PrimeCursors) {
    auto s = init_state(yellowstone());
    extend(s, 2000, Mode::optimized);
    for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
        const Term c = s.prime_cursor(p);
        ASSERT_EQ(c % p, 0u);
        ASSERT_FALSE(s.used(c));
        for (Term m = p; m < c; m += p) ASSERT_TRUE(s.used(m));
    }
}

TEST(SequenceState, AppendRejectsDuplicates) {
    auto s = init_state(binary_enots());
    EXPECT_THROW(s.append(2), ConfigError);
    EXPECT_THROW(s.append(0), DomainError);
    EXPECT_THROW(s.append(kTermLimit), OverflowError);
}

TEST(UsedSet, DenseAndSparse) {
    UsedSet u;
    EXPECT_TRUE(u.insert(5));
    EXPECT_FALSE(u.insert(5));
    EXPECT_TRUE(u.insert(UsedSet::kDenseCap + 7));
    EXPECT_TRUE(u.contains(UsedSet::kDenseCap + 7));
    EXPECT_FALSE(u.contains(UsedSet::kDenseCap + 8));
    EXPECT_EQ(u.size(), 2u);
}
