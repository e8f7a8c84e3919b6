#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "wolley_cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "wolley");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = wolley::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string last_line(const std::string& s) {
    auto end = s.find_last_not_of('\n');
    auto start = s.rfind('\n', end);
    return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct TempDir {
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("wolley-cli-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    fs::path path;
};

void write(const std::string& path, const std::string& body) { std::ofstream(path, std::ios::binary) << body; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, GenerateBFile) {
    const auto r = run({"generate", "--rule", "binary-enots", "--terms", "4", "--format", "bfile"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1 1\n2 2\n3 6\n4 5\n");
    EXPECT_EQ(r.err, "");
}

TEST(Cli, GenerateDefaultsToBFileAndBinaryEnots) {
    EXPECT_EQ(run({"generate", "--terms", "4"}).out, "1 1\n2 2\n3 6\n4 5\n");
}

TEST(Cli, GenerateOtherFormats) {
    const auto tsv = run({"generate", "--rule", "yellowstone", "--terms", "5", "--format", "tsv"});
    EXPECT_EQ(tsv.out, "n\tvalue\n1\t1\n2\t2\n3\t3\n4\t4\n5\t9\n");
    const auto json = run({"generate", "--rule", "prime-enots", "--terms", "4", "--format", "json"});
    EXPECT_EQ(json.code, 0);
    const auto doc = nlohmann::json::parse(json.out);
    EXPECT_EQ(doc["rule"], "prime-enots");
    EXPECT_EQ(doc["terms"], nlohmann::json::array({1, 2, 6, 15}));
}

TEST(Cli, UsageErrors) {
    const auto bogus = run({"generate", "--rule", "bogus", "--terms", "10"});
    EXPECT_EQ(bogus.code, 2);
    EXPECT_EQ(bogus.out, "");
    EXPECT_NE(bogus.err, "");
    EXPECT_EQ(run({"generate", "--rule", "yellowstone", "--terms", "2"}).code, 2);
    EXPECT_EQ(run({"generate", "--terms", "4", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"generate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"analyze", "pq", "--terms", "5"}).code, 2);
    EXPECT_EQ(run({"analyze", "pq", "--terms", "5", "--p", "1", "--q", "1"}).code, 2);
    EXPECT_EQ(run({"analyze", "char", "--terms", "5"}).code, 2);
    EXPECT_EQ(run({"analyze", "coverage", "--terms", "5", "--format", "bfile"}).code, 2);
    EXPECT_EQ(run({"analyze", "intro", "--rule", "prime-enots", "--terms", "5"}).code, 2);
    EXPECT_EQ(run({"compare", "--terms", "5"}).code, 2);
    EXPECT_EQ(run({"fetch", "B12"}).code, 2);
}

TEST(Cli, HelpGoesToStdout) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("generate"), std::string::npos);
}

TEST(Cli, AnalyzePq) {
    const auto r = run({"analyze", "pq", "--rule", "binary-enots", "--terms", "5", "--p", "0", "--q", "1", "--format", "tsv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(last_line(r.out).substr(0, 8), "5\t3\t2\t0\t");
}

TEST(Cli, AnalyzeGridHas34Rows) {
    const auto r = run({"analyze", "grid", "--rule", "binary-enots", "--terms", "34"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_lines(r.out), 35u);  // header + rows
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')).substr(0, 8), "n\tvalue\t");
    EXPECT_EQ(run({"analyze", "grid", "--rule", "prime-enots"}).out.size() > 0, true);
    EXPECT_EQ(count_lines(run({"analyze", "grid", "--rule", "prime-enots"}).out), 35u);
}

TEST(Cli, AnalyzeKinds) {
    for (const std::vector<std::string>& args : {
             std::vector<std::string>{"analyze", "char", "--terms", "50", "--k", "3"},
             {"analyze", "intro", "--terms", "200"},
             {"analyze", "pattern", "--terms", "500", "--p", "0", "--q", "2"},
             {"analyze", "coverage", "--terms", "500", "--bound", "64"},
             {"analyze", "skips", "--terms", "500", "--kmax", "64"},
             {"analyze", "skips", "--rule", "yellowstone", "--terms", "500", "--kmax", "64", "--format", "json"},
         }) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 0) << args[1] << ": " << r.err;
        EXPECT_FALSE(r.out.empty()) << args[1];
    }
}

TEST(Cli, Verify) {
    const auto r = run({"verify", "--rule", "binary-enots", "--terms", "3000", "--kmax", "128"});
    EXPECT_EQ(r.code, 0) << r.err << r.out;
    EXPECT_EQ(r.out.find("fail"), std::string::npos);
    EXPECT_EQ(run({"verify", "--rule", "yellowstone", "--terms", "2000", "--quiet"}).code, 0);
}

TEST(Cli, CompareAgainstLocalBFile) {
    TempDir dir;
    const auto good = run({"generate", "--terms", "200"}).out;
    write(dir.file("good.txt"), good);
    EXPECT_EQ(run({"compare", "--terms", "100", "--bfile", dir.file("good.txt")}).code, 0);
    EXPECT_EQ(run({"compare", "--bfile", dir.file("good.txt")}).code, 0);

    write(dir.file("bad.txt"), "1 1\n2 2\n3 6\n4 9\n");
    const auto bad = run({"compare", "--terms", "4", "--bfile", dir.file("bad.txt")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("index 4"), std::string::npos) << bad.err;

    write(dir.file("broken.txt"), "1 1\n3 6\n");
    EXPECT_EQ(run({"compare", "--bfile", dir.file("broken.txt")}).code, 3);
    EXPECT_EQ(run({"compare", "--bfile", dir.file("missing.txt")}).code, 3);
}

TEST(Cli, CompareAndFetchUseWarmCache) {
    TempDir dir;
    write(dir.file("b336957.txt"), run({"generate", "--rule", "prime-enots", "--terms", "50"}).out);
    const auto r = run({"compare", "--rule", "prime-enots", "--fetch", "A336957", "--cache-dir", dir.path.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto f = run({"fetch", "A336957", "--cache-dir", dir.path.string()});
    EXPECT_EQ(f.code, 0) << f.err;
    EXPECT_NE(f.out.find("A336957\t50\t"), std::string::npos) << f.out;
}

TEST(Cli, GenerateWritesOutFile) {
    TempDir dir;
    const auto r = run({"generate", "--terms", "10", "--out", dir.file("t.txt")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "");
    EXPECT_EQ(slurp(dir.file("t.txt")), run({"generate", "--terms", "10"}).out);
    EXPECT_EQ(run({"generate", "--terms", "10", "--out", dir.file("no/such/dir/t.txt")}).code, 3);
}

TEST(Cli, CheckpointResume) {
    TempDir dir;
    const auto cp = dir.file("state.ckpt");
    ASSERT_EQ(run({"generate", "--rule", "yellowstone", "--terms", "300", "--checkpoint", cp, "--quiet"}).code, 0);
    const auto resumed = run({"resume", "--checkpoint", cp, "--terms", "700"});
    ASSERT_EQ(resumed.code, 0) << resumed.err;
    EXPECT_EQ(resumed.out, run({"generate", "--rule", "yellowstone", "--terms", "700"}).out);
    EXPECT_EQ(run({"resume", "--checkpoint", cp, "--terms", "100"}).code, 2);
    EXPECT_EQ(run({"resume", "--checkpoint", dir.file("absent"), "--terms", "700"}).code, 3);
    write(dir.file("corrupt"), "wolley-checkpoint 1\nbinary-enots\n3\n1\n2\n3\n");
    EXPECT_EQ(run({"resume", "--checkpoint", dir.file("corrupt"), "--terms", "10"}).code, 3);
}

TEST(Cli, ProgressOnlyOnStderr) {
    const auto loud = run({"generate", "--terms", "100000"});
    EXPECT_NE(loud.err.find("generated 100000 terms"), std::string::npos);
    EXPECT_EQ(loud.out.find("generated"), std::string::npos);
    const auto quiet = run({"generate", "--terms", "100000", "--quiet"});
    EXPECT_EQ(quiet.err, "");
    EXPECT_EQ(quiet.out, loud.out);
}

TEST(Cli, DeterministicOutput) {
    for (const auto& rule : {"binary-enots", "prime-enots", "yellowstone"}) {
        const std::vector<std::string> args{"analyze", "skips", "--rule", rule, "--terms", "1000", "--format", "json"};
        EXPECT_EQ(run(args).out, run(args).out);
        EXPECT_EQ(run({"generate", "--rule", rule, "--terms", "1000", "--mode", "naive"}).out,
                  run({"generate", "--rule", rule, "--terms", "1000"}).out);
    }
}
