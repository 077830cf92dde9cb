#include "dynoct/medium.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dynoct/errors.hpp"
#include "dynoct/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts unsupported");

namespace dynoct {

MetabolicMap::MetabolicMap(PixelGrid g, Eigen::VectorXd v, double background)
    : grid(g), values(std::move(v)), background_noise(background) {
    if (values.size() != grid.size())
        throw std::invalid_argument("MetabolicMap: value count does not match grid");
    if (background_noise < 0.0)
        throw std::invalid_argument("MetabolicMap: background noise must be >= 0");
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0)
            throw std::invalid_argument("MetabolicMap: intensities must be finite and >= 0");
    }
}

double CollagenField::value_at(int pixel, double z) const {
    if (pixel < 0 || pixel >= grid.size())
        throw std::invalid_argument("CollagenField: pixel out of range");
    const double pos = (z - z0) / dz;
    if (pos < 0.0 || pos > static_cast<double>(nz() - 1)) {
        throw OutOfSupportError("collagen query z=" + std::to_string(z) +
                                " outside sampled support; increase padding");
    }
    int i0 = static_cast<int>(pos);
    if (i0 == nz() - 1) --i0; // right endpoint
    const double frac = pos - i0;
    return q(pixel, i0) * (1.0 - frac) + q(pixel, i0 + 1) * frac;
}

std::pair<double, double> padded_support(double L, double v0, double t_total, double corr_len) {
    const double reach = std::abs(v0) * t_total + 2.0 * corr_len;
    return {-L - reach, L + reach};
}

CollagenField generate_collagen_field(const PixelGrid& grid, int z_count, double z0, double dz,
                                      double corr_len, double v0, std::uint64_t seed) {
    if (z_count < 2)
        throw std::invalid_argument("generate_collagen_field: z_count must be >= 2");
    if (dz <= 0.0)
        throw std::invalid_argument("generate_collagen_field: dz must be > 0");
    if (corr_len < 0.0)
        throw std::invalid_argument("generate_collagen_field: corr_len must be >= 0");

    // Smoothing kernel k with k*k = Gaussian autocovariance at scale corr_len;
    // normalized so the field has unit variance.
    std::vector<double> kernel;
    if (corr_len == 0.0) {
        kernel = {1.0};
    } else {
        const double s = corr_len / std::sqrt(2.0);
        const int radius = static_cast<int>(std::ceil(5.0 * s / dz));
        kernel.resize(2 * radius + 1);
        double sumsq = 0.0;
        for (int i = -radius; i <= radius; ++i) {
            const double x = i * dz;
            const double k = std::exp(-0.5 * (x / s) * (x / s));
            kernel[i + radius] = k;
            sumsq += k * k;
        }
        const double inv = 1.0 / std::sqrt(sumsq);
        for (double& k : kernel) k *= inv;
    }
    const int radius = static_cast<int>(kernel.size() / 2);

    CollagenField field;
    field.grid = grid;
    field.q.resize(grid.size(), z_count);
    field.z0 = z0;
    field.dz = dz;
    field.corr_len = corr_len;
    field.v0 = v0;
    field.seed = seed;

    const int n_white = z_count + 2 * radius;
    std::vector<double> white(n_white);
    for (int p = 0; p < grid.size(); ++p) {
        auto stream = rng::Stream::make(seed, rng::kTagCollagen, static_cast<std::uint64_t>(p));
        for (int i = 0; i < n_white; i += 2) {
            auto [a, b] = stream.next_gaussian_pair();
            white[i] = a;
            if (i + 1 < n_white) white[i + 1] = b;
        }
        for (int j = 0; j < z_count; ++j) {
            double acc = 0.0;
            for (size_t m = 0; m < kernel.size(); ++m) acc += kernel[m] * white[j + m];
            field.q(p, j) = acc;
        }
    }
    return field;
}

double collagen_density(const CollagenField& field, int pixel, double z, double t) {
    return field.value_at(pixel, z - field.v0 * t);
}

double metabolic_density(const MetabolicMap& map, int pixel, int z_index, int t_index,
                         std::uint64_t seed) {
    if (pixel < 0 || pixel >= map.grid.size())
        throw std::invalid_argument("metabolic_density: pixel out of range");
    auto stream = rng::Stream::make(seed, rng::kTagMetabolic, static_cast<std::uint64_t>(pixel),
                                    static_cast<std::uint64_t>(z_index),
                                    static_cast<std::uint64_t>(t_index));
    auto [n1, n2] = stream.next_gaussian_pair();
    return map.values[pixel] * n1 + map.background_noise * n2;
}

MetabolicMap builtin_phantom(const PixelGrid& grid, double background_noise) {
    struct Blob {
        double r0, r1, c0, c1, value; // fractional [r0,r1) x [c0,c1)
    };
    // Three disjoint blocks covering ~10% of the image.
    static constexpr Blob blobs[] = {
        {0.14, 0.34, 0.14, 0.34, 1.0},
        {0.57, 0.72, 0.24, 0.48, 0.8},
        {0.62, 0.86, 0.67, 0.81, 0.6},
    };
    Eigen::VectorXd values = Eigen::VectorXd::Zero(grid.size());
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const double fr = (r + 0.5) / grid.rows;
            const double fc = (c + 0.5) / grid.cols;
            for (const Blob& b : blobs) {
                if (fr >= b.r0 && fr < b.r1 && fc >= b.c0 && fc < b.c1)
                    values[grid.flatten(r, c)] = b.value;
            }
        }
    }
    return MetabolicMap(grid, std::move(values), background_noise);
}

void write_field(const std::filesystem::path& path, const CollagenField& field,
                 const PixelGrid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    std::ostringstream header;
    header.precision(17);
    header << "DYNOCT-FIELD v1 nx=" << grid.size() << " nz=" << field.nz() << " z0=" << field.z0
           << " dz=" << field.dz << " v0=" << field.v0 << " corr_len=" << field.corr_len
           << " seed=" << field.seed << " grid=" << grid.rows << "x" << grid.cols << "\n";
    out << header.str();
    for (int p = 0; p < grid.size(); ++p) {
        for (int j = 0; j < field.nz(); ++j) {
            const double v = field.q(p, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::uint64_t parse_u64_field(std::istringstream& in, const std::string& key) {
    std::string tok;
    if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
        throw IoError("field header: expected " + key + "=");
    return std::stoull(tok.substr(key.size() + 1));
}

double parse_f64_field(std::istringstream& in, const std::string& key) {
    std::string tok;
    if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
        throw IoError("field header: expected " + key + "=");
    return std::stod(tok.substr(key.size() + 1));
}

} // namespace

CollagenField read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw IoError("missing field header: " + path.string());
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "DYNOCT-FIELD" || version != "v1")
        throw IoError("not a DYNOCT-FIELD v1 file: " + path.string());
    const auto nx = static_cast<int>(parse_u64_field(hs, "nx"));
    const auto nz = static_cast<int>(parse_u64_field(hs, "nz"));
    CollagenField field;
    field.z0 = parse_f64_field(hs, "z0");
    field.dz = parse_f64_field(hs, "dz");
    field.v0 = parse_f64_field(hs, "v0");
    field.corr_len = parse_f64_field(hs, "corr_len");
    field.seed = parse_u64_field(hs, "seed");
    std::string grid_tok;
    int rows = nx, cols = 1;
    if (hs >> grid_tok && grid_tok.rfind("grid=", 0) == 0) {
        const auto dims = grid_tok.substr(5);
        const auto xpos = dims.find('x');
        if (xpos == std::string::npos) throw IoError("field header: bad grid= token");
        rows = std::stoi(dims.substr(0, xpos));
        cols = std::stoi(dims.substr(xpos + 1));
    }
    if (rows * cols != nx) throw IoError("field header: grid does not match nx");
    field.grid = PixelGrid(rows, cols);
    field.q.resize(nx, nz);
    for (int p = 0; p < nx; ++p) {
        for (int j = 0; j < nz; ++j) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            if (!in) throw IoError("truncated field payload: " + path.string());
            field.q(p, j) = v;
        }
    }
    return field;
}

} // namespace dynoct
