#include "dynoct/separation.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>

#include "dynoct/errors.hpp"
#include "dynoct/format.hpp"

namespace dynoct {

double tv_seminorm(const Eigen::VectorXd& v) {
    if (v.size() < 1) throw std::invalid_argument("tv_seminorm: empty vector");
    double acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < v.size(); ++i) acc += std::abs(v[i + 1] - v[i]);
    return acc;
}

CutoffResult fit_tv_breakpoint(const Eigen::VectorXd& tv, const CutoffFitConfig& cfg) {
    const int r = static_cast<int>(tv.size());
    if (r < 8)
        throw std::invalid_argument("fit_tv_breakpoint: need at least 8 singular time-vectors");

    const double norm = tv.squaredNorm();
    const double spread = tv.maxCoeff() - tv.minCoeff();
    if (norm == 0.0 || spread <= 1e-12 * tv.cwiseAbs().maxCoeff())
        throw DegenerateFitError("fit_tv_breakpoint: flat TV sequence, no breakpoint exists");

    int b_min = cfg.min_break > 0 ? cfg.min_break : 4;
    int b_max = cfg.max_break > 0 ? cfg.max_break : r - 4;
    if (b_min < 2) b_min = 2;
    if (b_max > r - 1) b_max = r - 1;
    if (b_min > b_max)
        throw std::invalid_argument("fit_tv_breakpoint: empty breakpoint search range");

    int best_b = -1;
    double best_resid = 0.0;
    Eigen::MatrixXd X(r, 5);
    for (int b = b_min; b <= b_max; ++b) {
        // Shared value at i = b; each side gets its own slope and curvature.
        for (int i = 1; i <= r; ++i) {
            const double d = static_cast<double>(i - b);
            const bool left = i <= b;
            X(i - 1, 0) = 1.0;
            X(i - 1, 1) = left ? d : 0.0;
            X(i - 1, 2) = left ? d * d : 0.0;
            X(i - 1, 3) = left ? 0.0 : d;
            X(i - 1, 4) = left ? 0.0 : d * d;
        }
        const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(tv);
        const double resid = (X * coef - tv).squaredNorm() / norm;
        if (best_b < 0 || resid < best_resid) {
            best_b = b;
            best_resid = resid;
        }
    }
    CutoffResult out;
    out.cutoff = best_b;
    out.residual = best_resid;
    out.tv = tv;
    return out;
}

CutoffResult select_cutoff(const SvdResult& svd, const CutoffFitConfig& cfg) {
    const int r = svd.rank_dim();
    Eigen::VectorXd tv(r);
    for (int i = 0; i < r; ++i) tv[i] = tv_seminorm(svd.V.col(i));
    return fit_tv_breakpoint(tv, cfg);
}

SingularIndexSet select_index_set(int cutoff, int length, int rank) {
    if (cutoff < 1 || length < 0)
        throw std::invalid_argument("select_index_set: need cutoff >= 1 and length >= 0");
    if (cutoff + length > rank + 1)
        throw std::invalid_argument("select_index_set: interval exceeds rank");
    return SingularIndexSet{cutoff, length};
}

Eigen::MatrixXd filter_matrix(const SvdResult& svd, const SingularIndexSet& T) {
    if (!T.empty() && (T.first < 1 || T.last() > svd.rank_dim()))
        throw std::invalid_argument("filter_matrix: index set out of range");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(svd.U.rows(), svd.V.rows());
    if (T.empty()) return out;
    const int lo = T.first - 1;
    out = svd.U.middleCols(lo, T.count) *
          svd.sigma.segment(lo, T.count).asDiagonal() *
          svd.V.middleCols(lo, T.count).transpose();
    return out;
}

IntensityMap reconstruct_intensity(const SvdResult& svd, const SingularIndexSet& T,
                                   const PixelGrid& grid) {
    if (grid.size() != svd.U.rows())
        throw std::invalid_argument("reconstruct_intensity: grid does not match space-vectors");
    if (!T.empty() && (T.first < 1 || T.last() > svd.rank_dim()))
        throw std::invalid_argument("reconstruct_intensity: index set out of range");
    IntensityMap map;
    map.grid = grid;
    map.values = Eigen::VectorXd::Zero(grid.size());
    for (int i = T.first; i <= T.last(); ++i) {
        const double s2 = svd.sigma[i - 1] * svd.sigma[i - 1];
        map.values.array() += s2 * svd.U.col(i - 1).array().square();
    }
    map.values = map.values.cwiseSqrt();
    return map;
}

void write_intensity_csv(const std::filesystem::path& path, const IntensityMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (int r = 0; r < map.grid.rows; ++r) {
        for (int c = 0; c < map.grid.cols; ++c) {
            if (c) out << ',';
            out << format_double(map.values[map.grid.flatten(r, c)]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_intensity_pgm(const std::filesystem::path& path, const IntensityMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    const double lo = map.values.minCoeff();
    const double hi = map.values.maxCoeff();
    out << "P5\n" << map.grid.cols << " " << map.grid.rows << "\n65535\n";
    const double span = hi - lo;
    for (int r = 0; r < map.grid.rows; ++r) {
        for (int c = 0; c < map.grid.cols; ++c) {
            const double v = map.values[map.grid.flatten(r, c)];
            std::uint16_t q = 0;
            if (span > 0.0) {
                const double scaled = (v - lo) / span * 65535.0;
                q = static_cast<std::uint16_t>(std::floor(scaled + 0.5)); // round half up
            }
            const unsigned char bytes[2] = {static_cast<unsigned char>(q >> 8),
                                            static_cast<unsigned char>(q & 0xFF)};
            out.write(reinterpret_cast<const char*>(bytes), 2);
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

Eigen::VectorXd read_map_csv(const std::filesystem::path& path, const PixelGrid& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    Eigen::VectorXd values(grid.size());
    std::string line;
    int r = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (r >= grid.rows) throw IoError("map CSV has too many rows: " + path.string());
        std::istringstream ls(line);
        std::string cell;
        int c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= grid.cols) throw IoError("map CSV row too long: " + path.string());
            values[grid.flatten(r, c)] = parse_double(cell);
            ++c;
        }
        if (c != grid.cols) throw IoError("map CSV row too short: " + path.string());
        ++r;
    }
    if (r != grid.rows) throw IoError("map CSV has too few rows: " + path.string());
    return values;
}

} // namespace dynoct
