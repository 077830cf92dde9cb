#pragma once

#include <filesystem>

#include <Eigen/Core>

#include "dynoct/grid.hpp"
#include "dynoct/svd.hpp"

namespace dynoct {

/// |v|_TV = sum_i |v(i+1) - v(i)|; 0 for a single sample.
double tv_seminorm(const Eigen::VectorXd& v);

/// Breakpoint search range for the two-piece quadratic fit; 0 = auto
/// (min_break = 4, max_break = r - 4).
struct CutoffFitConfig {
    int min_break = 0;
    int max_break = 0;
};

struct CutoffResult {
    int cutoff = 0;           // 1-based singular index at which the spline changes
    double residual = 0.0;    // total squared residual normalized by sum s_i^2
    Eigen::VectorXd tv;       // the fitted TV sequence, tv[i-1] = |v_i|_TV
};

/// TV change-point: computes s_i = |v_i|_TV for every time-vector, then for
/// each candidate breakpoint b least-squares-fits two quadratics on [1,b] and
/// [b,r] constrained to agree at b, and returns the b with the smallest
/// residual (ties break to the smaller b). Throws std::invalid_argument if
/// r < 8 and DegenerateFitError if the TV sequence is flat.
CutoffResult select_cutoff(const SvdResult& svd, const CutoffFitConfig& cfg = {});

/// As above, on a precomputed TV sequence (index i holds |v_{i+1}|_TV).
CutoffResult fit_tv_breakpoint(const Eigen::VectorXd& tv, const CutoffFitConfig& cfg = {});

/// Contiguous set T = {first, ..., first + count - 1} of 1-based singular
/// indices; empty sets are allowed and select nothing.
struct SingularIndexSet {
    int first = 1;
    int count = 0;

    int last() const { return first + count - 1; } // < first when empty
    bool empty() const { return count == 0; }
};

/// T = {cutoff, ..., cutoff + length - 1}; requires cutoff >= 1, length >= 0
/// and cutoff + length <= r + 1.
SingularIndexSet select_index_set(int cutoff, int length, int rank);

/// A_T = sum_{i in T} sigma_i u_i v_i^T (the zero matrix for empty T).
Eigen::MatrixXd filter_matrix(const SvdResult& svd, const SingularIndexSet& T);

/// Per-pixel metabolic energy map.
struct IntensityMap {
    PixelGrid grid;
    Eigen::VectorXd values; // size() entries, >= 0
};

/// I(j) = sqrt(sum_{i in T} sigma_i^2 u_i(j)^2).
IntensityMap reconstruct_intensity(const SvdResult& svd, const SingularIndexSet& T,
                                   const PixelGrid& grid);

// Exports. CSV: one line per grid row, ',' separator, '.' decimal, LF endings.
// PGM: binary 16-bit P5; values mapped linearly from [min, max] to [0, 65535]
// with round-half-up (constant maps export as all zeros).
void write_intensity_csv(const std::filesystem::path& path, const IntensityMap& map);
void write_intensity_pgm(const std::filesystem::path& path, const IntensityMap& map);
Eigen::VectorXd read_map_csv(const std::filesystem::path& path, const PixelGrid& grid);

} // namespace dynoct
