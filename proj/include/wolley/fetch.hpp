#pragma once

// Network side of b-file acquisition. Requires linking OpenSSL; everything
// else in the library is dependency-free.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "httplib.h"
#include "wolley/bfile.hpp"
#include "wolley/errors.hpp"

namespace wolley {

inline constexpr const char* kOeisHost = "https://oeis.org";
inline constexpr const char* kCacheEnv = "WOLLEY_CACHE_DIR";
inline constexpr const char* kDefaultCacheDir = "wolley-cache";

// "A338833" -> "https://oeis.org/A338833/b338833.txt"
inline std::string bfile_url(std::string_view id) {
    return std::string(kOeisHost) + "/" + std::string(id) + "/" + bfile_basename(id);
}

// Returns the raw body; throws FetchError on any failure.
using Downloader = std::function<std::string(const std::string& url)>;

inline std::string http_download(const std::string& url) {
    const std::string host(kOeisHost);
    if (url.rfind(host, 0) != 0) throw FetchError("refusing to fetch outside " + host + ": " + url);
    httplib::Client cli(host);
    cli.set_follow_location(true);
    cli.set_connection_timeout(10);
    cli.set_read_timeout(60);
    auto res = cli.Get(url.substr(host.size()));
    if (!res)
        throw FetchError("download of " + url + " failed (" + httplib::to_string(res.error()) +
                         "); use the vendored fixtures in tests/fixtures or pass --bfile");
    if (res->status != 200)
        throw FetchError("download of " + url + " returned HTTP " + std::to_string(res->status));
    return res->body;
}

inline std::filesystem::path resolve_cache_dir(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv(kCacheEnv); env && *env) return env;
    return kDefaultCacheDir;
}

inline std::filesystem::path cache_path(const std::filesystem::path& cache_dir, std::string_view id) {
    return cache_dir / bfile_basename(id);
}

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FetchError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Temp file in the destination directory, then rename over the target.
inline void write_atomically(const std::filesystem::path& target, const std::string& body) {
    std::filesystem::create_directories(target.parent_path().empty() ? "." : target.parent_path());
    std::random_device rd;
    auto tmp = target;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FetchError("cannot write " + tmp.string());
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!out) throw FetchError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw FetchError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

}  // namespace detail

/// Cached copy wins; otherwise downloads once, stores the raw body under
/// cache_dir/b<digits>.txt and parses it.
inline BFile fetch_bfile(std::string_view id, const std::filesystem::path& cache_dir,
                         const Downloader& download = http_download) {
    if (!valid_sequence_id(id)) throw DomainError("malformed sequence id '" + std::string(id) + "'");
    const auto path = cache_path(cache_dir, id);
    if (std::filesystem::exists(path)) return parse_bfile(detail::read_file(path), std::string(id));
    const std::string body = download(bfile_url(id));
    BFile parsed = parse_bfile(body, std::string(id));
    detail::write_atomically(path, body);
    return parsed;
}

}  // namespace wolley
