#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "dynoct/grid.hpp"

namespace dynoct {

/// One independent 1-D stationary Gaussian-correlated random field per pixel,
/// rigidly drifting along z at speed v0: density(x, z, t) = q(x, z - v0*t).
/// The field is sampled on a uniform z-grid covering a padded support so the
/// drift never leaves it.
struct CollagenField {
    PixelGrid grid;
    Eigen::MatrixXd q;   // size() x nz, row j = pixel j's field over the z-grid
    double z0 = 0.0;     // coordinate of the first z sample
    double dz = 0.0;     // z-grid step, > 0
    double corr_len = 0.0;
    double v0 = 0.0;
    std::uint64_t seed = 0;

    int nz() const { return static_cast<int>(q.cols()); }
    double z_max() const { return z0 + dz * (nz() - 1); }

    /// q interpolated linearly at physical coordinate z (no drift applied).
    double value_at(int pixel, double z) const;
};

/// Ground-truth metabolic intensity: per-pixel noise standard deviation, plus
/// a spatially uniform background noise level.
struct MetabolicMap {
    PixelGrid grid;
    Eigen::VectorXd values;     // size() entries, all >= 0
    double background_noise = 0.0;

    MetabolicMap() = default;
    MetabolicMap(PixelGrid g, Eigen::VectorXd v, double background);
};

struct MediumState {
    CollagenField collagen;
    MetabolicMap metabolic;
    std::uint64_t seed = 0;
};

/// Generates one stationary Gaussian field per pixel with autocovariance
/// exp(-(dz)^2 / (2 corr_len^2)) (unit variance), by convolving counter-seeded
/// white noise with a normalized Gaussian kernel. corr_len = 0 degenerates to
/// white noise. Deterministic in (grid, z_count, corr_len, seed); independent
/// of evaluation order.
///
/// The grid spans [z0, z0 + (z_count-1)*dz]; callers size the support so that
/// z - v0*t stays inside it (see padded_support()).
CollagenField generate_collagen_field(const PixelGrid& grid, int z_count, double z0, double dz,
                                      double corr_len, double v0, std::uint64_t seed);

/// Support [z_lo, z_hi] = [-L - |v0|*t_total - margin, L + |v0|*t_total + margin],
/// margin = 2*corr_len, so drifted queries from z in [-L, L] never exit.
std::pair<double, double> padded_support(double L, double v0, double t_total, double corr_len);

/// q_c(pixel, z - v0*t) by linear interpolation; throws OutOfSupportError if
/// the drifted coordinate leaves the sampled support.
double collagen_density(const CollagenField& field, int pixel, double z, double t);

/// White-noise metabolic draw at quadrature node (z_index, t_index): zero-mean,
/// std values[pixel], plus independent background noise of std background_noise.
/// The draw is a pure function of (seed, pixel, z_index, t_index).
double metabolic_density(const MetabolicMap& map, int pixel, int z_index, int t_index,
                         std::uint64_t seed);

/// Built-in phantom: disjoint constant-intensity blocks on a zero background,
/// placed by grid fractions so any grid size gets a similar layout.
MetabolicMap builtin_phantom(const PixelGrid& grid, double background_noise);

// Field persistence: one ASCII header line
//   "DYNOCT-FIELD v1 nx=<..> nz=<..> z0=<..> dz=<..> v0=<..> corr_len=<..> seed=<..>\n"
// followed by nx*nz little-endian 64-bit floats, row-major (pixel-major).
void write_field(const std::filesystem::path& path, const CollagenField& field,
                 const PixelGrid& grid);
CollagenField read_field(const std::filesystem::path& path);

} // namespace dynoct
