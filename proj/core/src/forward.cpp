#include "dynoct/forward.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "dynoct/errors.hpp"
#include "dynoct/rng.hpp"
#include "dynoct/threads.hpp"

namespace dynoct {

void OpticsConfig::validate() const {
    if (lines.empty()) throw std::invalid_argument("OpticsConfig: need at least one source line");
    for (const auto& line : lines) {
        if (!(line.weight >= 0.0)) throw std::invalid_argument("OpticsConfig: weights must be >= 0");
    }
    if (!k_c2.empty() && k_c2.size() != lines.size())
        throw std::invalid_argument("OpticsConfig: k_c2 must match source line count");
    if (!(L > 0.0)) throw std::invalid_argument("OpticsConfig: L must be > 0");
    if (!(c > 0.0)) throw std::invalid_argument("OpticsConfig: c must be > 0");
}

std::vector<SourceLine> gaussian_source_lines(double center, double sigma, int n_lines) {
    if (n_lines < 1) throw std::invalid_argument("gaussian_source_lines: n_lines must be >= 1");
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_source_lines: sigma must be >= 0");
    std::vector<SourceLine> lines(n_lines);
    if (n_lines == 1 || sigma == 0.0) {
        for (auto& l : lines) l = {center, 1.0};
        return lines;
    }
    for (int i = 0; i < n_lines; ++i) {
        const double w = center - 2.0 * sigma + 4.0 * sigma * i / (n_lines - 1);
        const double d = (w - center) / sigma;
        lines[i] = {w, std::exp(-0.5 * d * d)};
    }
    return lines;
}

Eigen::VectorXd single_particle_signal(const OpticsConfig& optics,
                                       const std::function<double(double)>& phi,
                                       const TimeGrid& times) {
    optics.validate();
    const double phase_scale = 2.0 * std::numbers::pi * 2.0 * optics.n_bar / optics.c;
    Eigen::VectorXd out(times.count);
    for (int k = 0; k < times.count; ++k) {
        const double p = phi(times.at(k));
        if (!std::isfinite(p))
            throw std::invalid_argument("single_particle_signal: trajectory not finite");
        double acc = 0.0;
        for (std::size_t i = 0; i < optics.lines.size(); ++i) {
            const auto& line = optics.lines[i];
            acc += line.weight * optics.k_c1 * optics.k_c2_at(i) *
                   std::cos(phase_scale * line.omega * p);
        }
        out[k] = acc;
    }
    return out;
}

std::vector<SignalRecord> simulate_signals(const MediumState& medium, const OpticsConfig& optics,
                                           const TimeGrid& times, int z_count) {
    optics.validate();
    if (z_count < 2) throw std::invalid_argument("simulate_signals: z_count must be >= 2");
    if (medium.collagen.grid != medium.metabolic.grid)
        throw std::invalid_argument("simulate_signals: collagen/metabolic grids differ");

    const PixelGrid grid = medium.collagen.grid;
    const int n_pix = grid.size();
    const int n_t = times.count;
    const std::size_t n_lines = optics.lines.size();
    const double L = optics.L;
    const double dz = 2.0 * L / (z_count - 1);
    const double phase_scale = 2.0 * std::numbers::pi * 2.0 * optics.n_bar / optics.c;

    // Per-line phasors over the quadrature nodes, and the metabolic kernel
    // g(z) = sum_w S0(w) k_m cos(phase * w * z) with trapezoid weights folded in.
    std::vector<double> z_nodes(z_count), w_quad(z_count), g_metab(z_count);
    for (int j = 0; j < z_count; ++j) {
        z_nodes[j] = -L + j * dz;
        w_quad[j] = (j == 0 || j == z_count - 1) ? 0.5 * dz : dz;
    }
    Eigen::MatrixXcd phasor(n_lines, z_count);
    for (std::size_t i = 0; i < n_lines; ++i) {
        for (int j = 0; j < z_count; ++j) {
            phasor(static_cast<Eigen::Index>(i), j) =
                std::exp(std::complex<double>(0.0, phase_scale * optics.lines[i].omega * z_nodes[j]));
        }
    }
    for (int j = 0; j < z_count; ++j) {
        double g = 0.0;
        for (std::size_t i = 0; i < n_lines; ++i)
            g += optics.lines[i].weight * phasor(static_cast<Eigen::Index>(i), j).real();
        g_metab[j] = g * optics.k_m * w_quad[j];
    }

    // Drifted sample positions are shared by all pixels.
    const CollagenField& field = medium.collagen;
    Eigen::MatrixXd pos(n_t, z_count);
    for (int k = 0; k < n_t; ++k) {
        const double shift = field.v0 * times.at(k);
        for (int j = 0; j < z_count; ++j) pos(k, j) = (z_nodes[j] - shift - field.z0) / field.dz;
    }
    const double pos_max = static_cast<double>(field.nz() - 1);
    for (int k = 0; k < n_t; ++k) {
        if (pos(k, 0) < 0.0 || pos(k, z_count - 1) > pos_max)
            throw OutOfSupportError("simulate_signals: drift exits collagen support; "
                                    "regenerate the field with a larger padded range");
    }

    std::vector<SignalRecord> records(n_pix);
    parallel_for(n_pix, [&](int p) {
        SignalRecord& rec = records[p];
        rec.pixel = p;
        rec.collagen.resize(n_t);
        rec.metabolic.resize(n_t);
        rec.samples.resize(n_t);
        std::vector<double> qv(z_count);
        for (int k = 0; k < n_t; ++k) {
            // collagen: interpolate the drifted field, integrate per line
            for (int j = 0; j < z_count; ++j) {
                const double x = pos(k, j);
                int i0 = static_cast<int>(x);
                if (i0 >= field.nz() - 1) i0 = field.nz() - 2;
                const double frac = x - i0;
                qv[j] = field.q(p, i0) * (1.0 - frac) + field.q(p, i0 + 1) * frac;
            }
            double acc_c = 0.0;
            for (std::size_t i = 0; i < n_lines; ++i) {
                std::complex<double> s(0.0, 0.0);
                for (int j = 0; j < z_count; ++j)
                    s += phasor(static_cast<Eigen::Index>(i), j) * (qv[j] * w_quad[j]);
                acc_c += optics.lines[i].weight * optics.k_c2_at(i) * s.real();
            }
            rec.collagen[k] = optics.k_c1 * acc_c;

            // metabolic: white noise keyed by (pixel, z node, time index)
            double acc_m = 0.0;
            for (int j = 0; j < z_count; ++j)
                acc_m += g_metab[j] * metabolic_density(medium.metabolic, p, j, k, medium.seed);
            rec.metabolic[k] = acc_m;
            rec.samples[k] = rec.collagen[k] + rec.metabolic[k];
        }
    });
    return records;
}

double calibrate_dominance(const std::vector<SignalRecord>& records, double target_ratio) {
    if (records.empty()) throw std::invalid_argument("calibrate_dominance: no records");
    if (!(target_ratio > 0.0))
        throw std::invalid_argument("calibrate_dominance: target ratio must be > 0");
    double sum_c = 0.0, sum_m = 0.0;
    std::size_t n = 0;
    for (const auto& rec : records) {
        if (rec.collagen.size() == 0 || rec.collagen.size() != rec.metabolic.size())
            throw std::invalid_argument("calibrate_dominance: decomposition missing or ragged");
        sum_c += rec.collagen.squaredNorm();
        sum_m += rec.metabolic.squaredNorm();
        n += static_cast<std::size_t>(rec.collagen.size());
    }
    if (sum_m == 0.0)
        throw DegenerateInputError("calibrate_dominance: metabolic RMS is zero");
    if (sum_c == 0.0)
        throw DegenerateInputError("calibrate_dominance: collagen RMS is zero");
    const double ratio = std::sqrt(sum_c / sum_m);
    return target_ratio / ratio;
}

void apply_collagen_scale(std::vector<SignalRecord>& records, double s) {
    for (auto& rec : records) {
        rec.collagen *= s;
        rec.samples = rec.collagen + rec.metabolic;
    }
}

} // namespace dynoct
