#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dynoct {

/// FNV-1a 64-bit content hash, rendered as "fnv1a:<16 hex digits>".
std::uint64_t fnv1a(const void* data, std::size_t size);
std::string hash_file(const std::filesystem::path& path);
std::string hash_string(const std::string& text);

/// Run manifest: config snapshot reference, artifact hashes, summary metrics.
/// The [meta] block (timestamps) is informational and excluded from any
/// byte-for-byte comparison of runs.
struct RunManifest {
    std::string created;                                          // [meta]
    std::vector<std::pair<std::string, std::string>> artifacts;   // file -> hash
    std::vector<std::pair<std::string, std::string>> metrics;     // key -> value

    void add_artifact(const std::filesystem::path& run_dir, const std::string& name);
    void add_metric(const std::string& key, const std::string& value);
    void add_metric(const std::string& key, double value);
    const std::string* find_metric(const std::string& key) const;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Recomputes every artifact hash under run_dir; throws IoError on a missing
/// file or hash mismatch.
void verify_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest);

} // namespace dynoct
