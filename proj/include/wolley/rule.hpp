#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "wolley/errors.hpp"
#include "wolley/sieve.hpp"
#include "wolley/support.hpp"

namespace wolley {

enum class SupportKind { binary, prime };

// enots:       share with a(n-1), avoid a(n-2), and leave supp(a(n-1)).
// yellowstone: avoid a(n-1), share with a(n-2).
enum class Law { enots, yellowstone };

struct Rule {
    std::string id;
    SupportKind support_kind = SupportKind::binary;
    Law law = Law::enots;
    std::vector<Term> initial_terms;
    // Minimum support size of every term past the initial segment.
    unsigned eligibility = 2;

    std::size_t seed_length() const noexcept { return initial_terms.size(); }
};

inline unsigned eligibility_for(Law law) { return law == Law::enots ? 2 : 1; }

inline Rule make_rule(std::string id, SupportKind kind, Law law, std::vector<Term> initial_terms) {
    Rule r{std::move(id), kind, law, std::move(initial_terms), eligibility_for(law)};
    return r;
}

inline Rule binary_enots() { return make_rule("binary-enots", SupportKind::binary, Law::enots, {1, 2}); }
inline Rule prime_enots() { return make_rule("prime-enots", SupportKind::prime, Law::enots, {1, 2}); }
inline Rule yellowstone() { return make_rule("yellowstone", SupportKind::prime, Law::yellowstone, {1, 2, 3}); }

inline void validate_rule(const Rule& rule) {
    if (rule.initial_terms.size() < 2) throw ConfigError("initial segment needs at least two terms");
    std::unordered_set<Term> seen;
    for (Term t : rule.initial_terms) {
        if (t == 0) throw ConfigError("initial segment contains zero");
        check_term_range(t);
        if (!seen.insert(t).second) throw ConfigError("initial segment repeats " + std::to_string(t));
    }
    if (rule.eligibility != eligibility_for(rule.law))
        throw ConfigError("eligibility does not match the adjacency law");
}

class RuleRegistry {
public:
    static RuleRegistry builtin() {
        RuleRegistry reg;
        reg.add(binary_enots());
        reg.add(prime_enots());
        reg.add(yellowstone());
        return reg;
    }

    void add(Rule r) {
        validate_rule(r);
        auto id = r.id;
        rules_.insert_or_assign(std::move(id), std::move(r));
    }

    std::optional<Rule> find(std::string_view id) const {
        auto it = rules_.find(std::string(id));
        if (it == rules_.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& [k, _] : rules_) out.push_back(k);
        return out;
    }

private:
    std::map<std::string, Rule> rules_;
};

inline SupportSet support_of(Term k, SupportKind kind, const SpfSieve* sieve) {
    if (kind == SupportKind::binary) return bit_support(k);
    if (sieve == nullptr) throw SieveTooSmall(k, 0);
    return prime_support(k, *sieve);
}

// Mask form of the candidate predicate for binary supports.
inline bool is_candidate_mask(Term m, Term prev1, Term prev2, Law law) noexcept {
    if (law == Law::enots) return (m & prev1) != 0 && (m & prev2) == 0 && (m & ~prev1) != 0;
    return (m & prev1) == 0 && (m & prev2) != 0;
}

inline bool is_candidate(const SupportSet& m, const SupportSet& prev1, const SupportSet& prev2, Law law) {
    if (law == Law::enots) return intersects(m, prev1) && !intersects(m, prev2) && escapes(m, prev1);
    return !intersects(m, prev1) && intersects(m, prev2);
}

// Used-ness is the engine's concern; this checks the adjacency conditions only.
inline bool is_candidate(Term m, Term prev1, Term prev2, const Rule& rule, const SpfSieve* sieve = nullptr) {
    if (m == 0 || prev1 == 0 || prev2 == 0) throw DomainError("candidate test needs positive integers");
    if (rule.support_kind == SupportKind::binary) {
        check_term_range(m);
        check_term_range(prev1);
        check_term_range(prev2);
        return is_candidate_mask(m, prev1, prev2, rule.law);
    }
    return is_candidate(support_of(m, rule.support_kind, sieve), support_of(prev1, rule.support_kind, sieve),
                        support_of(prev2, rule.support_kind, sieve), rule.law);
}

}  // namespace wolley
