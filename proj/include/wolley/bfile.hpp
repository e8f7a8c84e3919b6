#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wolley/errors.hpp"
#include "wolley/support.hpp"

namespace wolley {

// OEIS b-file: "<index> <value>" per line, '#' comments.
struct BFile {
    std::string sequence_id;  // may be empty when parsed from an anonymous body
    std::int64_t offset = 0;
    std::vector<std::pair<std::int64_t, Term>> entries;

    std::size_t size() const noexcept { return entries.size(); }
    std::optional<Term> value_at(std::int64_t index) const {
        if (entries.empty() || index < offset) return std::nullopt;
        const auto i = static_cast<std::size_t>(index - offset);
        if (i >= entries.size()) return std::nullopt;
        return entries[i].second;
    }
    std::vector<Term> values() const {
        std::vector<Term> out;
        out.reserve(entries.size());
        for (const auto& e : entries) out.push_back(e.second);
        return out;
    }
};

inline bool valid_sequence_id(std::string_view id) {
    if (id.size() != 7 || id[0] != 'A') return false;
    for (char c : id.substr(1))
        if (c < '0' || c > '9') return false;
    return true;
}

// "A338833" -> "b338833.txt"
inline std::string bfile_basename(std::string_view id) {
    if (!valid_sequence_id(id)) throw DomainError("malformed sequence id '" + std::string(id) + "'");
    return "b" + std::string(id.substr(1)) + ".txt";
}

inline BFile parse_bfile(std::string_view text, std::string sequence_id = {}) {
    BFile bf;
    bf.sequence_id = std::move(sequence_id);
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;

        auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        std::int64_t index = 0;
        auto [p1, ec1] = std::from_chars(line.data(), line.data() + line.size(), index);
        if (ec1 != std::errc{}) throw ParseError(lineno, "malformed index");
        const char* rest = p1;
        const char* end = line.data() + line.size();
        if (rest == end || !is_space(*rest)) throw ParseError(lineno, "expected '<index> <value>'");
        while (rest != end && is_space(*rest)) ++rest;
        Term value = 0;
        auto [p2, ec2] = std::from_chars(rest, end, value);
        if (ec2 == std::errc::result_out_of_range) throw ParseError(lineno, "value overflows 64 bits");
        if (ec2 != std::errc{} || p2 != end) throw ParseError(lineno, "malformed value");
        if (value == 0) throw ParseError(lineno, "values must be positive");

        if (bf.entries.empty()) bf.offset = index;
        else if (index != bf.entries.back().first + 1)
            throw ParseError(lineno, "index " + std::to_string(index) + " does not follow " +
                                         std::to_string(bf.entries.back().first));
        bf.entries.emplace_back(index, value);
    }
    return bf;
}

inline std::string format_bfile(std::span<const Term> terms, std::int64_t offset = 1) {
    std::string out;
    out.reserve(terms.size() * 12);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        out += std::to_string(offset + static_cast<std::int64_t>(i));
        out += ' ';
        out += std::to_string(terms[i]);
        out += '\n';
    }
    return out;
}

struct Mismatch {
    std::int64_t index = 0;
    Term ours = 0;
    Term theirs = 0;
};

struct ComparisonReport {
    std::size_t overlap = 0;
    std::size_t match_length = 0;
    std::optional<Mismatch> mismatch;

    bool matches() const noexcept { return !mismatch.has_value(); }
};

// Term position 1 aligns with the b-file offset.
inline ComparisonReport compare_prefix(std::span<const Term> terms, const BFile& bfile) {
    ComparisonReport r;
    r.overlap = std::min(terms.size(), bfile.entries.size());
    for (std::size_t i = 0; i < r.overlap; ++i) {
        if (terms[i] != bfile.entries[i].second) {
            r.mismatch = Mismatch{bfile.entries[i].first, terms[i], bfile.entries[i].second};
            return r;
        }
        ++r.match_length;
    }
    return r;
}

}  // namespace wolley
