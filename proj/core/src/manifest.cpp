#include "dynoct/manifest.hpp"

#include <fstream>
#include <sstream>

#include "dynoct/errors.hpp"
#include "dynoct/format.hpp"

namespace dynoct {

std::uint64_t fnv1a(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

namespace {
std::string render_hash(std::uint64_t h) {
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string("fnv1a:") + buf;
}
} // namespace

std::string hash_string(const std::string& text) { return render_hash(fnv1a(text.data(), text.size())); }

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for hashing: " + path.string());
    std::uint64_t h = 0xCBF29CE484222325ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ull;
        }
    }
    return render_hash(h);
}

void RunManifest::add_artifact(const std::filesystem::path& run_dir, const std::string& name) {
    artifacts.emplace_back(name, hash_file(run_dir / name));
}

void RunManifest::add_metric(const std::string& key, const std::string& value) {
    metrics.emplace_back(key, value);
}

void RunManifest::add_metric(const std::string& key, double value) {
    metrics.emplace_back(key, format_double(value));
}

const std::string* RunManifest::find_metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return &v;
    return nullptr;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "DYNOCT-MANIFEST v1\n";
    out << "[meta]\n";
    out << "created = " << manifest.created << "\n";
    out << "[artifacts]\n";
    for (const auto& [name, hash] : manifest.artifacts) out << name << " = " << hash << "\n";
    out << "[metrics]\n";
    for (const auto& [key, value] : manifest.metrics) out << key << " = " << value << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "DYNOCT-MANIFEST v1")
        throw IoError("not a DYNOCT-MANIFEST v1 file: " + path.string());
    RunManifest manifest;
    std::string section;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '[') {
            section = line;
            continue;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos)
            throw IoError("malformed manifest line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        if (section == "[meta]") {
            if (key == "created") manifest.created = value;
        } else if (section == "[artifacts]") {
            manifest.artifacts.emplace_back(key, value);
        } else if (section == "[metrics]") {
            manifest.metrics.emplace_back(key, value);
        } else {
            throw IoError("unknown manifest section: " + section);
        }
    }
    return manifest;
}

void verify_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest) {
    for (const auto& [name, hash] : manifest.artifacts) {
        const auto path = run_dir / name;
        if (!std::filesystem::exists(path))
            throw IoError("manifest artifact missing: " + path.string());
        const std::string actual = hash_file(path);
        if (actual != hash)
            throw IoError("manifest hash mismatch for " + name + ": expected " + hash + ", got " +
                          actual);
    }
}

} // namespace dynoct
