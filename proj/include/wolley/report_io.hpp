#pragma once

// TSV and JSON renderings of analysis reports. TSV: one header row, LF endings.

#include <ostream>
#include <span>
#include <string>

#include "json.hpp"
#include "wolley/analysis.hpp"
#include "wolley/bfile.hpp"
#include "wolley/rule.hpp"

namespace wolley::io {

using json = nlohmann::ordered_json;

inline void write_terms_tsv(std::ostream& os, Prefix terms) {
    os << "n\tvalue\n";
    for (std::size_t i = 0; i < terms.size(); ++i) os << i + 1 << '\t' << terms[i] << '\n';
}

inline json terms_json(const Rule& rule, Prefix terms) {
    return json{{"rule", rule.id}, {"term_count", terms.size()}, {"terms", std::vector<Term>(terms.begin(), terms.end())}};
}

inline void write_tsv(std::ostream& os, const TruthTable& t, Prefix terms) {
    os << "n\tvalue\tchar\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        os << i + 1 << '\t' << terms[i] << '\t' << static_cast<int>(t.bits[i]) << '\n';
}

inline json to_json(const TruthTable& t) {
    std::string bits;
    bits.reserve(t.size());
    for (auto b : t.bits) bits += b ? '1' : '0';
    return json{{"k", t.k},
                {"length", t.size()},
                {"count_01", count_patterns(t, "01")},
                {"count_111", t.size() >= 3 ? count_patterns(t, "111") : 0},
                {"bits", bits}};
}

inline void write_tsv(std::ostream& os, const IntroductionMap& m) {
    os << "bit\tn_first\tterm\tintroduced_by\n";
    for (const auto& e : m.entries) {
        os << e.bit << '\t' << e.n_first << '\t' << e.term << '\t';
        if (e.initial) os << "initial";
        else if (e.introduced_by) os << *e.introduced_by;
        else os << "-";
        os << '\n';
    }
}

inline json to_json(const IntroductionMap& m) {
    json entries = json::array();
    for (const auto& e : m.entries) {
        json j{{"bit", e.bit}, {"n_first", e.n_first}, {"term", e.term}, {"initial", e.initial}};
        j["introduced_by"] = e.introduced_by ? json(*e.introduced_by) : json(nullptr);
        entries.push_back(std::move(j));
    }
    json out{{"entries", std::move(entries)}};
    out["violation"] = m.violation ? json{{"bit", m.violation->bit}, {"n_first", m.violation->n_first},
                                          {"term", m.violation->term}}
                                   : json(nullptr);
    return out;
}

inline void write_tsv(std::ostream& os, const CounterSeries& s) {
    os << "i\tP\tQ\tPQ\tdominated\n";
    for (std::size_t i = 1; i <= s.length(); ++i)
        os << i << '\t' << s.P[i] << '\t' << s.Q[i] << '\t' << s.PQ[i] << '\t' << (s.dominated(i) ? 1 : 0) << '\n';
}

inline json to_json(const CounterSeries& s) {
    std::size_t dominated = 0;
    for (std::size_t i = 1; i <= s.length(); ++i) dominated += s.dominated(i) ? 1 : 0;
    const std::size_t n = s.length();
    return json{{"p", s.p},   {"q", s.q},   {"length", n},
                {"P", s.P[n]}, {"Q", s.Q[n]}, {"PQ", s.PQ[n]},
                {"dominated_count", dominated},
                {"series", json{{"P", s.P}, {"Q", s.Q}, {"PQ", s.PQ}}}};
}

inline void write_tsv(std::ostream& os, const PairPatternReport& r) {
    os << "n\tp_bit\tq_bit\tviolation\n";
    std::vector<char> flag(r.f.size(), 0);
    for (const auto& v : r.violations)
        if (flag[v.index - 1] == 0) flag[v.index - 1] = v.kind;
    for (std::size_t i = 0; i < r.f.size(); ++i)
        os << i + 1 << '\t' << (r.f[i].has_p ? 1 : 0) << '\t' << (r.f[i].has_q ? 1 : 0) << '\t'
           << (flag[i] ? std::string(1, flag[i]) : std::string("-")) << '\n';
}

inline json to_json(const RunStats& s) {
    return json{{"runs", s.runs}, {"longest", s.longest}, {"total", s.total}, {"mean", s.mean()}};
}

inline json to_json(const PairPatternReport& r) {
    json viol = json::array();
    for (const auto& v : r.violations) viol.push_back(json{{"kind", std::string(1, v.kind)}, {"index", v.index}});
    std::string f;
    for (const auto& s : r.f) {
        f += s.has_p ? '1' : '0';
        f += s.has_q ? '1' : '0';
        f += ' ';
    }
    if (!f.empty()) f.pop_back();
    return json{{"p", r.p},
                {"q", r.q},
                {"length", r.f.size()},
                {"violations", std::move(viol)},
                {"runs_of_one", to_json(r.ones)},
                {"runs_of_zero", to_json(r.zeros)},
                {"f", f}};
}

inline void write_tsv(std::ostream& os, const CoverageReport& r) {
    os << "value\tpresent\n";
    std::size_t i = 0, j = 0;
    while (i < r.present.size() || j < r.missing.size()) {
        if (j == r.missing.size() || (i < r.present.size() && r.present[i] < r.missing[j]))
            os << r.present[i++] << "\t1\n";
        else
            os << r.missing[j++] << "\t0\n";
    }
}

inline json to_json(const CoverageReport& r) {
    return json{{"prefix_length", r.prefix_length}, {"bound", r.bound},   {"least_absent", r.least_absent},
                {"present_count", r.present.size()}, {"missing", r.missing}, {"present", r.present}};
}

inline void write_tsv(std::ostream& os, const SkipReport& r) {
    os << "k\tappeared_at\tskips\tbound\n";
    for (const auto& e : r.entries) {
        os << e.k << '\t';
        if (e.appeared_at) os << *e.appeared_at; else os << '-';
        os << '\t' << e.skips << '\t' << e.k - 1 << '\n';
    }
}

inline json to_json(const SkipReport& r) {
    json entries = json::array();
    std::size_t max_skips = 0;
    for (const auto& e : r.entries) {
        max_skips = std::max(max_skips, e.skips);
        json j{{"k", e.k}, {"skips", e.skips}};
        j["appeared_at"] = e.appeared_at ? json(*e.appeared_at) : json(nullptr);
        entries.push_back(std::move(j));
    }
    const auto* v = r.first_violation();
    return json{{"kmax", r.kmax}, {"max_skips", max_skips}, {"violation", v ? json(v->k) : json(nullptr)},
                {"entries", std::move(entries)}};
}

inline void write_tsv(std::ostream& os, const VerificationReport& r) {
    os << "check\tstatus\tdetail\n";
    for (const auto& c : r.checks) os << c.name << '\t' << (c.passed ? "pass" : "fail") << '\t' << c.detail << '\n';
}

inline json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return json{{"prefix_length", r.prefix_length}, {"passed", r.passed()}, {"checks", std::move(checks)}};
}

inline void write_tsv(std::ostream& os, const ComparisonReport& r) {
    os << "overlap\tmatch_length\tmismatch_index\tours\ttheirs\n";
    os << r.overlap << '\t' << r.match_length << '\t';
    if (r.mismatch) os << r.mismatch->index << '\t' << r.mismatch->ours << '\t' << r.mismatch->theirs << '\n';
    else os << "-\t-\t-\n";
}

inline json to_json(const ComparisonReport& r) {
    json j{{"overlap", r.overlap}, {"match_length", r.match_length}, {"matches", r.matches()}};
    j["mismatch"] = r.mismatch ? json{{"index", r.mismatch->index}, {"ours", r.mismatch->ours},
                                      {"theirs", r.mismatch->theirs}}
                               : json(nullptr);
    return j;
}

// Blank cell for zero multiplicity/coefficient.
inline void write_tsv(std::ostream& os, const Grid& g) {
    os << "n\tvalue";
    for (auto c : g.columns) os << '\t' << c;
    os << '\n';
    for (std::size_t r = 0; r < g.values.size(); ++r) {
        os << r + 1 << '\t' << g.values[r];
        for (auto cell : g.cells[r]) {
            os << '\t';
            if (cell) os << cell;
        }
        os << '\n';
    }
}

inline json to_json(const Grid& g) {
    return json{{"columns", g.columns}, {"values", g.values}, {"cells", g.cells}};
}

}  // namespace wolley::io
