#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "dynoct/medium.hpp"
#include "dynoct/optics.hpp"

namespace dynoct {

struct TimeGrid {
    int count = 0;
    double dt = 1.0;

    TimeGrid() = default;
    TimeGrid(int count_, double dt_) : count(count_), dt(dt_) {
        if (count < 1 || dt <= 0.0) throw std::invalid_argument("TimeGrid: need count >= 1, dt > 0");
    }
    double at(int k) const { return k * dt; }
    double total() const { return count * dt; }
};

/// Per-pixel time series; the collagen/metabolic split is kept for
/// verification runs (samples = collagen + metabolic elementwise).
struct SignalRecord {
    int pixel = 0;
    Eigen::VectorXd samples;
    Eigen::VectorXd collagen;
    Eigen::VectorXd metabolic;
};

/// Re sum_k S0(w_k) K(w_k) exp(2*pi*i*ω_k*(2*n_bar/c)*phi(t)) over the time grid,
/// with K(w) = k_c1 * k_c2(w).
Eigen::VectorXd single_particle_signal(const OpticsConfig& optics,
                                       const std::function<double(double)>& phi,
                                       const TimeGrid& times);

/// Evaluates the split signals for every pixel: quadrature over z in [-L, L]
/// (trapezoid on z_count nodes) and an exact sum over source lines. Metabolic
/// draws are keyed by (pixel, z node, time index), so the result is a pure
/// function of (medium, optics, times) regardless of scheduling.
std::vector<SignalRecord> simulate_signals(const MediumState& medium, const OpticsConfig& optics,
                                           const TimeGrid& times, int z_count);

/// Scale factor s for the collagen amplitude such that after scaling,
/// RMS(collagen) / RMS(metabolic) = target_ratio over all records.
double calibrate_dominance(const std::vector<SignalRecord>& records, double target_ratio);

/// Multiplies the collagen component by s and refreshes the totals.
void apply_collagen_scale(std::vector<SignalRecord>& records, double s);

} // namespace dynoct
