#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dynoct/casorati.hpp"
#include "dynoct/config.hpp"
#include "dynoct/manifest.hpp"
#include "dynoct/medium.hpp"
#include "dynoct/separation.hpp"

namespace dynoct {

// Run-directory artifact names.
inline constexpr const char* kTotalFile = "total.cas";
inline constexpr const char* kCollagenFile = "collagen.cas";
inline constexpr const char* kMetabolicFile = "metabolic.cas";
inline constexpr const char* kMapFile = "metabolic_map.csv";
inline constexpr const char* kConfigFile = "config.txt";
inline constexpr const char* kManifestFile = "manifest.txt";
inline constexpr const char* kIntensityCsv = "intensity.csv";
inline constexpr const char* kIntensityPgm = "intensity.pgm";
inline constexpr const char* kSigmaCsv = "sigma.csv";
inline constexpr const char* kTvCsv = "tv.csv";
inline constexpr const char* kCutoffFile = "cutoff.txt";
inline constexpr const char* kVerifyCsv = "verify.csv";

struct SimulateOutcome {
    std::filesystem::path run_dir;
    double collagen_scale = 1.0;
    double measured_ratio = 0.0; // RMS(collagen) / RMS(metabolic) after scaling
};

struct SeparateOutcome {
    int cutoff = 0;
    double fit_residual = 0.0;
    SingularIndexSet index_set;
    IntensityMap intensity;
    Eigen::VectorXd sigma;
    Eigen::VectorXd tv;
};

struct VerifyCheck {
    std::string name;
    double value = 0.0;
    std::string bound; // human-readable bound, "report" for informational rows
    bool pass = true;
};

struct VerifyOutcome {
    std::vector<VerifyCheck> checks;
    double value(const std::string& name) const;
    bool pass(const std::string& name) const;
};

struct PipelineOutcome {
    SimulateOutcome simulate;
    SeparateOutcome separate;
    VerifyOutcome verify;
};

/// Builds the medium + optics from the config, simulates, calibrates the
/// collagen amplitude to the dominance target and writes total/collagen/
/// metabolic Casorati files, the ground-truth map, a config snapshot and a
/// manifest into out_dir.
SimulateOutcome run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// SVD + TV cut-off + index interval + intensity map for one Casorati file;
/// writes intensity.csv/.pgm, sigma.csv, tv.csv and cutoff.txt next to it.
/// Throws DegenerateFitError when no usable breakpoint exists (flat TV or
/// numerical rank below the minimum spline size).
SeparateOutcome run_separate(const std::filesystem::path& input,
                             const RunConfig& cfg,
                             const std::filesystem::path& out_dir);

/// All spectral checks plus reconstruction-error metrics on a simulate run
/// directory (total/collagen/metabolic + ground-truth map). Validates the
/// manifest hashes of its inputs when a manifest is present. Writes verify.csv.
VerifyOutcome run_verify(const std::filesystem::path& run_dir, const RunConfig& cfg);

/// simulate + separate + verify into one run directory; the manifest is
/// rewritten at the end to cover every stage artifact and summary metrics.
PipelineOutcome run_pipeline(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Map-comparison helpers used by verify and the acceptance suite.
Eigen::VectorXd minmax_normalize(const Eigen::VectorXd& v);
/// RMS of (a*estimate + b - truth) minimized over affine (a, b); the truth is
/// min-max normalized first. Scale/offset-invariant in the estimate.
double affine_rmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);
/// Spec-literal variant: min-max normalize both, relative l2 difference.
double minmax_rel2(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

} // namespace dynoct
