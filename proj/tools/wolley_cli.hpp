#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wolley/analysis.hpp"
#include "wolley/bfile.hpp"
#include "wolley/checkpoint.hpp"
#include "wolley/engine.hpp"
#include "wolley/fetch.hpp"
#include "wolley/report_io.hpp"
#include "wolley/rule.hpp"

namespace wolley::cli {

enum Exit : int { kOk = 0, kFailed = 1, kUsage = 2, kIo = 3 };

struct UsageError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct RunConfig {
    std::string subcommand;
    std::string analysis;
    std::string rule = "binary-enots";
    std::optional<std::size_t> terms;
    std::string mode = "optimized";
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<Term> k;
    std::optional<unsigned> p, q;
    Term bound = 256;
    Term kmax = 512;
    std::optional<std::string> bfile;
    std::optional<std::string> fetch;
    std::optional<std::string> cache_dir;
    std::optional<std::string> checkpoint;
    bool quiet = false;
};

namespace detail {

inline void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--rule", cfg.rule, "sequence rule")
        ->check(CLI::IsMember({"binary-enots", "prime-enots", "yellowstone"}));
    sub->add_option("--terms", cfg.terms, "number of terms")->check(CLI::PositiveNumber);
    sub->add_option("--mode", cfg.mode, "generator")->check(CLI::IsMember({"optimized", "naive"}));
    sub->add_option("--out", cfg.out, "write data here instead of standard output");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"bfile", "tsv", "json"}));
    sub->add_flag("--quiet", cfg.quiet, "suppress progress output");
}

inline Rule lookup_rule(const std::string& id) {
    auto r = RuleRegistry::builtin().find(id);
    if (!r) throw UsageError("unknown rule '" + id + "'");
    return *r;
}

inline std::string format_of(const RunConfig& cfg, const char* fallback) {
    return cfg.format.value_or(fallback);
}

inline void require_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (fmt == a) return;
    throw UsageError("format '" + fmt + "' is not available for this subcommand");
}

class Output {
public:
    Output(const RunConfig& cfg, std::ostream& stdout_stream) : os_(&stdout_stream) {
        if (cfg.out) {
            file_ = std::make_unique<std::ofstream>(*cfg.out, std::ios::binary | std::ios::trunc);
            if (!*file_) throw IoError("cannot open " + *cfg.out + " for writing");
            os_ = file_.get();
        }
    }
    std::ostream& stream() { return *os_; }
    void finish() {
        os_->flush();
        if (!*os_) throw IoError("write failed");
    }

private:
    std::ostream* os_;
    std::unique_ptr<std::ofstream> file_;
};

inline SequenceState produce_state(const RunConfig& cfg, const Rule& rule, std::size_t n, std::ostream& err) {
    if (n < rule.seed_length())
        throw UsageError("--terms must be at least " + std::to_string(rule.seed_length()) + " for " + rule.id);
    const Mode mode = cfg.mode == "naive" ? Mode::naive : Mode::optimized;
    ProgressFn progress;
    if (!cfg.quiet) progress = [&err](std::size_t done) { err << "generated " << done << " terms\n"; };
    SequenceState state(rule);
    extend(state, n, mode, progress);
    return state;
}

inline std::vector<Term> produce(const RunConfig& cfg, const Rule& rule, std::size_t n, std::ostream& err) {
    const auto state = produce_state(cfg, rule, n, err);
    return {state.terms().begin(), state.terms().end()};
}

inline void emit_terms(const RunConfig& cfg, const Rule& rule, Prefix terms, std::ostream& out) {
    const auto fmt = format_of(cfg, "bfile");
    Output o(cfg, out);
    if (fmt == "bfile") o.stream() << format_bfile(terms);
    else if (fmt == "tsv") io::write_terms_tsv(o.stream(), terms);
    else o.stream() << io::terms_json(rule, terms).dump(2) << '\n';
    o.finish();
}

template <class Report, class Tsv>
void emit_report(const RunConfig& cfg, const Report& report, std::ostream& out, Tsv&& tsv) {
    const auto fmt = format_of(cfg, "tsv");
    require_format(fmt, {"tsv", "json"});
    Output o(cfg, out);
    if (fmt == "tsv") tsv(o.stream());
    else o.stream() << io::to_json(report).dump(2) << '\n';
    o.finish();
}

template <class Report>
void emit_report(const RunConfig& cfg, const Report& report, std::ostream& out) {
    emit_report(cfg, report, out, [&](std::ostream& os) { io::write_tsv(os, report); });
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Rule rule = lookup_rule(cfg.rule);
    if (!cfg.terms) throw UsageError("generate needs --terms");
    const auto state = produce_state(cfg, rule, *cfg.terms, err);
    emit_terms(cfg, rule, state.terms(), out);
    if (cfg.checkpoint) {
        std::ofstream cp(*cfg.checkpoint, std::ios::binary | std::ios::trunc);
        if (!cp) throw IoError("cannot open " + *cfg.checkpoint + " for writing");
        save_checkpoint(state, cp);
    }
    return kOk;
}

inline int cmd_resume(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.checkpoint) throw UsageError("resume needs --checkpoint");
    if (!cfg.terms) throw UsageError("resume needs --terms");
    std::ifstream in(*cfg.checkpoint, std::ios::binary);
    if (!in) throw IoError("cannot read " + *cfg.checkpoint);
    SequenceState state = load_checkpoint(in, RuleRegistry::builtin());
    if (*cfg.terms < state.size()) throw UsageError("checkpoint already holds more than --terms terms");
    ProgressFn progress;
    if (!cfg.quiet) progress = [&err](std::size_t done) { err << "generated " << done << " terms\n"; };
    extend(state, *cfg.terms, cfg.mode == "naive" ? Mode::naive : Mode::optimized, progress);
    emit_terms(cfg, state.rule(), state.terms(), out);
    return kOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Rule rule = lookup_rule(cfg.rule);
    if (!cfg.terms) throw UsageError("verify needs --terms");
    const auto terms = produce(cfg, rule, *cfg.terms, err);
    const auto report = verify_prefix(terms, rule, VerifyOptions{8, cfg.kmax});
    emit_report(cfg, report, out);
    for (const auto& c : report.checks)
        if (!c.passed) err << "check " << c.name << " failed: " << c.detail << '\n';
    return report.passed() ? kOk : kFailed;
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Rule rule = lookup_rule(cfg.rule);
    const std::string& what = cfg.analysis;
    std::size_t n = cfg.terms.value_or(what == "grid" ? 34 : 0);
    if (n == 0) throw UsageError("analyze " + what + " needs --terms");
    const auto terms = produce(cfg, rule, n, err);

    auto need_pq = [&]() {
        if (!cfg.p || !cfg.q) throw UsageError("analyze " + what + " needs --p and --q");
        if (*cfg.p == *cfg.q) throw UsageError("--p and --q must differ");
    };
    if (what == "char") {
        if (!cfg.k) throw UsageError("analyze char needs --k");
        const auto t = char_table(terms, *cfg.k, rule.support_kind);
        emit_report(cfg, t, out, [&](std::ostream& os) { io::write_tsv(os, t, terms); });
    } else if (what == "intro") {
        emit_report(cfg, scan_introductions(terms, rule), out);
    } else if (what == "pq") {
        need_pq();
        emit_report(cfg, pq_counters(terms, *cfg.p, *cfg.q), out);
    } else if (what == "pattern") {
        need_pq();
        const auto r = scan_pair_pattern(terms, *cfg.p, *cfg.q, rule.seed_length());
        emit_report(cfg, r, out);
        if (!r.violations.empty()) {
            err << r.violations.size() << " pair-pattern exclusion violations\n";
            return kFailed;
        }
    } else if (what == "coverage") {
        emit_report(cfg, coverage(terms, cfg.bound), out);
    } else if (what == "skips") {
        const auto r = scan_candidacy_skips(terms, rule, cfg.kmax);
        emit_report(cfg, r, out);
        if (r.first_violation()) return kFailed;
    } else if (what == "grid") {
        emit_report(cfg, support_grid(terms, rule.support_kind, terms.size()), out);
    } else {
        throw UsageError("unknown analysis '" + what + "'");
    }
    return kOk;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Rule rule = lookup_rule(cfg.rule);
    if (cfg.bfile.has_value() == cfg.fetch.has_value()) throw UsageError("compare needs exactly one of --bfile, --fetch");
    BFile bf;
    if (cfg.bfile) {
        const std::string text = read_text(*cfg.bfile);
        bf = parse_bfile(text);
    } else {
        bf = fetch_bfile(*cfg.fetch, resolve_cache_dir(cfg.cache_dir));
    }
    const std::size_t n = cfg.terms.value_or(std::max<std::size_t>(rule.seed_length(), std::min<std::size_t>(bf.size(), 10000)));
    const auto terms = produce(cfg, rule, n, err);
    const auto report = compare_prefix(terms, bf);
    emit_report(cfg, report, out);
    if (report.mismatch) {
        err << "mismatch at index " << report.mismatch->index << ": ours " << report.mismatch->ours << ", b-file "
            << report.mismatch->theirs << '\n';
        return kFailed;
    }
    if (report.overlap < terms.size() && !cfg.quiet)
        err << "b-file covers only " << report.overlap << " of " << terms.size() << " terms\n";
    return kOk;
}

inline int cmd_fetch(const RunConfig& cfg, const std::string& positional, std::ostream& out) {
    std::string id = cfg.fetch.value_or(positional);
    if (id.empty()) throw UsageError("fetch needs a sequence id");
    if (!valid_sequence_id(id)) throw UsageError("malformed sequence id '" + id + "'");
    const auto dir = resolve_cache_dir(cfg.cache_dir);
    const BFile bf = fetch_bfile(id, dir);
    Output o(cfg, out);
    o.stream() << "sequence_id\tentries\tpath\n" << id << '\t' << bf.size() << '\t' << cache_path(dir, id).string() << '\n';
    o.finish();
    return kOk;
}

}  // namespace detail

/// Parses argv and runs one subcommand. Data goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig cfg;
    std::string fetch_id;
    CLI::App app{"Greedy Enots Wolley / Yellowstone sequence toolkit", "wolley"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "emit the first N terms");
    detail::add_common(gen, cfg);
    gen->add_option("--checkpoint", cfg.checkpoint, "also save a checkpoint here");

    auto* ver = app.add_subcommand("verify", "run the invariant battery over a generated prefix");
    detail::add_common(ver, cfg);
    ver->add_option("--kmax", cfg.kmax, "largest value replayed for candidacy skips");

    auto* ana = app.add_subcommand("analyze", "truth tables, counters and other reports");
    detail::add_common(ana, cfg);
    ana->add_option("kind", cfg.analysis, "analysis kind")
        ->required()
        ->check(CLI::IsMember({"char", "intro", "pq", "pattern", "coverage", "skips", "grid"}));
    ana->add_option("--k", cfg.k, "characteristic value")->check(CLI::PositiveNumber);
    ana->add_option("--p", cfg.p, "first bit");
    ana->add_option("--q", cfg.q, "second bit");
    ana->add_option("--bound", cfg.bound, "coverage listing bound");
    ana->add_option("--kmax", cfg.kmax, "largest value replayed for candidacy skips");

    auto* cmp = app.add_subcommand("compare", "compare a generated prefix against an OEIS b-file");
    detail::add_common(cmp, cfg);
    cmp->add_option("--bfile", cfg.bfile, "local b-file");
    cmp->add_option("--fetch", cfg.fetch, "sequence id to fetch (cached)");
    cmp->add_option("--cache-dir", cfg.cache_dir, "b-file cache directory");

    auto* fet = app.add_subcommand("fetch", "download a b-file into the cache");
    fet->add_option("id", fetch_id, "sequence id, e.g. A338833");
    fet->add_option("--fetch", cfg.fetch, "sequence id");
    fet->add_option("--cache-dir", cfg.cache_dir, "b-file cache directory");
    fet->add_option("--out", cfg.out, "write the summary here");
    fet->add_flag("--quiet", cfg.quiet, "suppress progress output");

    auto* res = app.add_subcommand("resume", "load a checkpoint and continue generation");
    detail::add_common(res, cfg);
    res->add_option("--checkpoint", cfg.checkpoint, "checkpoint to load")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kUsage;
    }

    try {
        if (*gen) return detail::cmd_generate(cfg, out, err);
        if (*ver) return detail::cmd_verify(cfg, out, err);
        if (*ana) return detail::cmd_analyze(cfg, out, err);
        if (*cmp) return detail::cmd_compare(cfg, out, err);
        if (*fet) return detail::cmd_fetch(cfg, fetch_id, out);
        if (*res) return detail::cmd_resume(cfg, out, err);
        return kUsage;
    } catch (const UsageError& e) {
        err << "wolley: " << e.what() << '\n' << "Run with --help for usage.\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "wolley: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "wolley: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "wolley: " << e.what() << '\n';
        return kIo;
    } catch (const FetchError& e) {
        err << "wolley: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError& e) {
        err << "wolley: b-file " << e.what() << '\n';
        return kIo;
    } catch (const CheckpointError& e) {
        err << "wolley: checkpoint: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "wolley: " << e.what() << '\n';
        return kFailed;
    }
}

}  // namespace wolley::cli
