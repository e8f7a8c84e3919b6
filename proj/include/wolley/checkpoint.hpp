#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "wolley/engine.hpp"
#include "wolley/errors.hpp"
#include "wolley/rule.hpp"

namespace wolley {

// Text layout:
//   wolley-checkpoint 1
//   <rule id>
//   <term count>
//   <term>            (one per line)
inline constexpr int kCheckpointVersion = 1;
inline constexpr std::string_view kCheckpointMagic = "wolley-checkpoint";

inline void save_checkpoint(const SequenceState& state, std::ostream& out) {
    out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n' << state.rule().id << '\n' << state.size() << '\n';
    for (Term t : state.terms()) out << t << '\n';
    if (!out) throw CheckpointError("failed writing checkpoint");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

}  // namespace detail

inline SequenceState load_checkpoint(std::istream& in, const RuleRegistry& registry) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> std::string_view {
        if (!std::getline(in, line)) throw CheckpointError("truncated checkpoint after line " + std::to_string(lineno));
        ++lineno;
        return detail::trim(line);
    };

    const auto header = next_line();
    const auto sp = header.find(' ');
    if (sp == std::string_view::npos || header.substr(0, sp) != kCheckpointMagic)
        throw CheckpointError("not a wolley checkpoint");
    const auto version = detail::parse_u64(detail::trim(header.substr(sp + 1)));
    if (!version || *version != static_cast<std::uint64_t>(kCheckpointVersion))
        throw CheckpointError("unsupported checkpoint version '" + std::string(header.substr(sp + 1)) + "'");

    const std::string id(next_line());
    auto rule = registry.find(id);
    if (!rule) throw CheckpointError("unknown rule '" + id + "'");

    const auto count = detail::parse_u64(next_line());
    if (!count) throw CheckpointError("malformed term count on line " + std::to_string(lineno));
    if (*count < rule->seed_length()) throw CheckpointError("checkpoint is shorter than the initial segment");

    std::vector<Term> terms;
    terms.reserve(static_cast<std::size_t>(*count));
    for (std::uint64_t i = 0; i < *count; ++i) {
        const auto v = detail::parse_u64(next_line());
        if (!v || *v == 0 || *v >= kTermLimit) throw CheckpointError("malformed term on line " + std::to_string(lineno));
        terms.push_back(*v);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::trim(line).empty()) throw CheckpointError("trailing data on line " + std::to_string(lineno));
    }

    for (std::size_t i = 0; i < rule->seed_length(); ++i)
        if (terms[i] != rule->initial_terms[i])
            throw CheckpointError("term " + std::to_string(i + 1) + " differs from the rule's initial segment");

    SequenceState state(*rule);
    GrowingSieve sieve;
    for (std::size_t i = rule->seed_length(); i < terms.size(); ++i) {
        const Term m = terms[i];
        if (state.used(m)) throw CheckpointError("duplicate term " + std::to_string(m) + " at n=" + std::to_string(i + 1));
        const SpfSieve* sv = nullptr;
        if (rule->support_kind == SupportKind::prime) sv = &sieve.covering(std::max({m, terms[i - 1], terms[i - 2]}));
        if (!is_candidate(m, terms[i - 1], terms[i - 2], *rule, sv))
            throw CheckpointError("term " + std::to_string(m) + " at n=" + std::to_string(i + 1) +
                                  " violates the adjacency conditions");
        state.append(m);
    }
    return state;
}

}  // namespace wolley
