#pragma once

#include <vector>

namespace dynoct {

/// One spectral line of the discretized broadband source.
struct SourceLine {
    double omega = 0.0;  // frequency
    double weight = 0.0; // S0(omega), >= 0
};

/// Physical constants and the source model. Dimensionless internal units:
/// only the phase product omega * n_bar * z / c matters, so c = 1 and a
/// center frequency of order one are the defaults.
struct OpticsConfig {
    double n_bar = 1.4;              // refractive index
    double c = 1.0;                  // light speed
    double L = 1.0;                  // coherence length; imaged slice is [-L, L]
    std::vector<SourceLine> lines;   // discretized S0
    std::vector<double> k_c2;        // per-line collagen reflectivity factor; empty = all 1
    double k_c1 = 1.0;               // collagen reflectivity amplitude
    double k_m = 1.0;                // metabolic reflectivity amplitude (frequency-flat)

    double k_c2_at(std::size_t line) const { return k_c2.empty() ? 1.0 : k_c2.at(line); }
    void validate() const;
};

/// n_lines frequencies uniform on center +/- 2*sigma, weights = Gaussian
/// density values at the lines.
std::vector<SourceLine> gaussian_source_lines(double center, double sigma, int n_lines);

} // namespace dynoct
