#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dynoct/optics.hpp"

namespace dynoct {

/// Flat key-value run configuration (sections + `key = value` lines).
/// parse_config(serialize_config(cfg)) == cfg.
struct RunConfig {
    // [grid]
    int grid_rows = 21;
    int grid_cols = 21;

    // [time]
    int time_samples = 500;
    double dt = 1.0;

    // [optics]
    double n_bar = 1.4;
    double c = 1.0;
    double coherence_length = 1.0;
    std::string source_mode = "gaussian"; // gaussian | table
    double source_center = 2.0;
    double source_sigma = 0.25;
    int source_line_count = 7;
    std::vector<SourceLine> source_table; // used when source_mode == "table"
    std::vector<double> k_c2;             // optional per-line factors
    double k_c1 = 1.0;
    double k_m = 1.0;

    // [medium]
    double corr_len = 0.8;
    double v0 = 4.0e-4;
    int z_count = 64;
    std::string metabolic_map = "builtin:blobs"; // or a CSV path
    double background_noise = 0.05;
    double dominance_target = 100.0;

    // [separation]
    int interval_length = 0; // 0 = auto: ceil(0.25 * pixel count)
    int spline_min = 0;      // 0 = auto
    int spline_max = 0;      // 0 = auto

    // [run]
    std::uint64_t seed = 1;
    std::string out_dir = "runs/run";

    bool operator==(const RunConfig&) const;

    /// Throws ConfigError on invalid values; returns non-fatal warnings.
    std::vector<std::string> validate() const;

    /// Source lines resolved from the gaussian spec or the explicit table.
    std::vector<SourceLine> resolve_source_lines() const;

    int resolved_interval_length() const; // auto rule applied
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

} // namespace dynoct
