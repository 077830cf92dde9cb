#include "dynoct/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dynoct/errors.hpp"
#include "dynoct/format.hpp"

namespace dynoct {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<SourceLine> parse_source_table(const std::string& s) {
    std::vector<SourceLine> out;
    if (trim(s).empty()) return out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("source_table entries must be omega:weight, got '" + item + "'");
        out.push_back({parse_double(trim(item.substr(0, colon))),
                       parse_double(trim(item.substr(colon + 1)))});
    }
    return out;
}

std::string serialize_source_table(const std::vector<SourceLine>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += ";";
        out += format_double(lines[i].omega) + ":" + format_double(lines[i].weight);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item));
    }
    return out;
}

std::string serialize_double_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += format_double(v[i]);
    }
    return out;
}

} // namespace

bool RunConfig::operator==(const RunConfig& o) const {
    auto lines_eq = [](const std::vector<SourceLine>& a, const std::vector<SourceLine>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].omega != b[i].omega || a[i].weight != b[i].weight) return false;
        return true;
    };
    return grid_rows == o.grid_rows && grid_cols == o.grid_cols &&
           time_samples == o.time_samples && dt == o.dt && n_bar == o.n_bar && c == o.c &&
           coherence_length == o.coherence_length && source_mode == o.source_mode &&
           source_center == o.source_center && source_sigma == o.source_sigma &&
           source_line_count == o.source_line_count && lines_eq(source_table, o.source_table) &&
           k_c2 == o.k_c2 && k_c1 == o.k_c1 && k_m == o.k_m && corr_len == o.corr_len &&
           v0 == o.v0 && z_count == o.z_count && metabolic_map == o.metabolic_map &&
           background_noise == o.background_noise && dominance_target == o.dominance_target &&
           interval_length == o.interval_length && spline_min == o.spline_min &&
           spline_max == o.spline_max && seed == o.seed && out_dir == o.out_dir;
}

std::vector<std::string> RunConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (grid_rows < 1 || grid_cols < 1) fail("grid dimensions must be >= 1");
    if (time_samples < 1) fail("time samples must be >= 1");
    if (!(dt > 0.0)) fail("dt must be > 0");
    if (!(coherence_length > 0.0)) fail("coherence_length must be > 0");
    if (!(c > 0.0)) fail("c must be > 0");
    if (source_mode != "gaussian" && source_mode != "table")
        fail("source_mode must be 'gaussian' or 'table'");
    if (source_mode == "gaussian") {
        if (source_line_count < 1) fail("source_lines must be >= 1");
        if (!(source_sigma >= 0.0)) fail("source_sigma must be >= 0");
    } else if (source_table.empty()) {
        fail("source_mode = table requires a source_table");
    }
    for (const auto& line : source_table)
        if (!(line.weight >= 0.0)) fail("source weights must be >= 0");
    if (!k_c2.empty()) {
        const std::size_t n = source_mode == "gaussian" ? static_cast<std::size_t>(source_line_count)
                                                        : source_table.size();
        if (k_c2.size() != n) fail("k_c2 length must match the source line count");
    }
    if (!(corr_len >= 0.0)) fail("corr_len must be >= 0");
    if (z_count < 2) fail("z_count must be >= 2");
    if (!(background_noise >= 0.0)) fail("background_noise must be >= 0");
    if (!(dominance_target > 0.0)) fail("dominance_target must be > 0");
    if (interval_length < 0) fail("interval_length must be >= 0");
    if (spline_min < 0 || spline_max < 0) fail("spline bounds must be >= 0");
    if (metabolic_map.empty()) fail("metabolic_map must not be empty");

    std::vector<std::string> warnings;
    if (time_samples > 1000)
        warnings.push_back("more than 1000 time samples degrades the separation; "
                           "consider splitting the record and averaging");
    return warnings;
}

std::vector<SourceLine> RunConfig::resolve_source_lines() const {
    if (source_mode == "table") return source_table;
    return gaussian_source_lines(source_center, source_sigma, source_line_count);
}

int RunConfig::resolved_interval_length() const {
    if (interval_length > 0) return interval_length;
    return static_cast<int>(std::ceil(0.25 * grid_rows * grid_cols));
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "grid.rows") cfg.grid_rows = std::stoi(value);
            else if (key == "grid.cols") cfg.grid_cols = std::stoi(value);
            else if (key == "time.samples") cfg.time_samples = std::stoi(value);
            else if (key == "time.dt") cfg.dt = parse_double(value);
            else if (key == "optics.n_bar") cfg.n_bar = parse_double(value);
            else if (key == "optics.c") cfg.c = parse_double(value);
            else if (key == "optics.coherence_length") cfg.coherence_length = parse_double(value);
            else if (key == "optics.source_mode") cfg.source_mode = value;
            else if (key == "optics.source_center") cfg.source_center = parse_double(value);
            else if (key == "optics.source_sigma") cfg.source_sigma = parse_double(value);
            else if (key == "optics.source_lines") cfg.source_line_count = std::stoi(value);
            else if (key == "optics.source_table") cfg.source_table = parse_source_table(value);
            else if (key == "optics.k_c2") cfg.k_c2 = parse_double_list(value);
            else if (key == "optics.k_c1") cfg.k_c1 = parse_double(value);
            else if (key == "optics.k_m") cfg.k_m = parse_double(value);
            else if (key == "medium.corr_len") cfg.corr_len = parse_double(value);
            else if (key == "medium.v0") cfg.v0 = parse_double(value);
            else if (key == "medium.z_count") cfg.z_count = std::stoi(value);
            else if (key == "medium.metabolic_map") cfg.metabolic_map = value;
            else if (key == "medium.background_noise") cfg.background_noise = parse_double(value);
            else if (key == "medium.dominance_target") cfg.dominance_target = parse_double(value);
            else if (key == "separation.interval_length") cfg.interval_length = std::stoi(value);
            else if (key == "separation.spline_min") cfg.spline_min = std::stoi(value);
            else if (key == "separation.spline_max") cfg.spline_max = std::stoi(value);
            else if (key == "run.seed") cfg.seed = std::stoull(value);
            else if (key == "run.out_dir") cfg.out_dir = value;
            else throw ConfigError("unknown key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": bad value for " + key + ": " +
                              e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "rows = " << cfg.grid_rows << "\n";
    out << "cols = " << cfg.grid_cols << "\n";
    out << "\n[time]\n";
    out << "samples = " << cfg.time_samples << "\n";
    out << "dt = " << format_double(cfg.dt) << "\n";
    out << "\n[optics]\n";
    out << "n_bar = " << format_double(cfg.n_bar) << "\n";
    out << "c = " << format_double(cfg.c) << "\n";
    out << "coherence_length = " << format_double(cfg.coherence_length) << "\n";
    out << "source_mode = " << cfg.source_mode << "\n";
    out << "source_center = " << format_double(cfg.source_center) << "\n";
    out << "source_sigma = " << format_double(cfg.source_sigma) << "\n";
    out << "source_lines = " << cfg.source_line_count << "\n";
    out << "source_table = " << serialize_source_table(cfg.source_table) << "\n";
    out << "k_c2 = " << serialize_double_list(cfg.k_c2) << "\n";
    out << "k_c1 = " << format_double(cfg.k_c1) << "\n";
    out << "k_m = " << format_double(cfg.k_m) << "\n";
    out << "\n[medium]\n";
    out << "corr_len = " << format_double(cfg.corr_len) << "\n";
    out << "v0 = " << format_double(cfg.v0) << "\n";
    out << "z_count = " << cfg.z_count << "\n";
    out << "metabolic_map = " << cfg.metabolic_map << "\n";
    out << "background_noise = " << format_double(cfg.background_noise) << "\n";
    out << "dominance_target = " << format_double(cfg.dominance_target) << "\n";
    out << "\n[separation]\n";
    out << "interval_length = " << cfg.interval_length << "\n";
    out << "spline_min = " << cfg.spline_min << "\n";
    out << "spline_max = " << cfg.spline_max << "\n";
    out << "\n[run]\n";
    out << "seed = " << cfg.seed << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    return out.str();
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << serialize_config(cfg);
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace dynoct
