#include "dynoct/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "dynoct/errors.hpp"
#include "dynoct/format.hpp"
#include "dynoct/forward.hpp"
#include "dynoct/spectral.hpp"
#include "dynoct/svd.hpp"

namespace dynoct {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

MetabolicMap resolve_metabolic_map(const RunConfig& cfg, const PixelGrid& grid) {
    if (cfg.metabolic_map == "builtin:blobs") return builtin_phantom(grid, cfg.background_noise);
    if (cfg.metabolic_map.rfind("builtin:", 0) == 0)
        throw ConfigError("unknown builtin metabolic map: " + cfg.metabolic_map);
    return MetabolicMap(grid, read_map_csv(cfg.metabolic_map, grid), cfg.background_noise);
}

OpticsConfig resolve_optics(const RunConfig& cfg) {
    OpticsConfig optics;
    optics.n_bar = cfg.n_bar;
    optics.c = cfg.c;
    optics.L = cfg.coherence_length;
    optics.lines = cfg.resolve_source_lines();
    optics.k_c2 = cfg.k_c2;
    optics.k_c1 = cfg.k_c1;
    optics.k_m = cfg.k_m;
    optics.validate();
    return optics;
}

void write_two_column_csv(const std::filesystem::path& path, const char* value_name,
                          const Eigen::VectorXd& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "index," << value_name << "\n";
    for (Eigen::Index i = 0; i < values.size(); ++i)
        out << (i + 1) << "," << format_double(values[i]) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace

double VerifyOutcome::value(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c.value;
    throw std::invalid_argument("VerifyOutcome: no check named " + name);
}

bool VerifyOutcome::pass(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c.pass;
    throw std::invalid_argument("VerifyOutcome: no check named " + name);
}

SimulateOutcome run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir))
        throw IoError("cannot create output directory: " + out_dir.string());

    const PixelGrid grid(cfg.grid_rows, cfg.grid_cols);
    const TimeGrid times(cfg.time_samples, cfg.dt);
    const OpticsConfig optics = resolve_optics(cfg);

    MediumState medium;
    medium.seed = cfg.seed;
    medium.metabolic = resolve_metabolic_map(cfg, grid);
    const auto [z_lo, z_hi] =
        padded_support(optics.L, cfg.v0, times.total(), cfg.corr_len);
    const double dz_field = 2.0 * optics.L / (cfg.z_count - 1);
    const int nz_field = static_cast<int>(std::ceil((z_hi - z_lo) / dz_field)) + 2;
    medium.collagen = generate_collagen_field(grid, nz_field, z_lo, dz_field, cfg.corr_len,
                                              cfg.v0, cfg.seed);

    auto records = simulate_signals(medium, optics, times, cfg.z_count);
    const double scale = calibrate_dominance(records, cfg.dominance_target);
    apply_collagen_scale(records, scale);

    double sum_c = 0.0, sum_m = 0.0;
    for (const auto& rec : records) {
        sum_c += rec.collagen.squaredNorm();
        sum_m += rec.metabolic.squaredNorm();
    }
    const double measured = std::sqrt(sum_c / sum_m);

    write_casorati(out_dir / kTotalFile, build_casorati(records, grid, SignalComponent::total));
    write_casorati(out_dir / kCollagenFile,
                   build_casorati(records, grid, SignalComponent::collagen));
    write_casorati(out_dir / kMetabolicFile,
                   build_casorati(records, grid, SignalComponent::metabolic));
    IntensityMap truth{grid, medium.metabolic.values};
    write_intensity_csv(out_dir / kMapFile, truth);
    save_config(out_dir / kConfigFile, cfg);

    RunManifest manifest;
    manifest.created = utc_now();
    manifest.add_artifact(out_dir, kConfigFile);
    manifest.add_artifact(out_dir, kTotalFile);
    manifest.add_artifact(out_dir, kCollagenFile);
    manifest.add_artifact(out_dir, kMetabolicFile);
    manifest.add_artifact(out_dir, kMapFile);
    manifest.add_metric("seed", std::to_string(cfg.seed));
    manifest.add_metric("collagen_scale", scale);
    manifest.add_metric("measured_rms_ratio", measured);
    write_manifest(out_dir / kManifestFile, manifest);

    return SimulateOutcome{out_dir, scale, measured};
}

SeparateOutcome run_separate(const std::filesystem::path& input, const RunConfig& cfg,
                             const std::filesystem::path& out_dir) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir))
        throw IoError("cannot create output directory: " + out_dir.string());

    const CasoratiMatrix A = read_casorati(input);
    const SvdResult svd = compute_svd(A);
    const int r = svd.rank_dim();

    int numerical_rank = 0;
    for (int i = 0; i < r; ++i)
        if (svd.sigma[i] > 1e-12 * svd.sigma[0]) ++numerical_rank;
    if (numerical_rank < 8)
        throw DegenerateFitError("separation is degenerate: numerical rank " +
                                 std::to_string(numerical_rank) +
                                 " is below the minimum spline size (8)");

    const CutoffResult fit = select_cutoff(svd, CutoffFitConfig{cfg.spline_min, cfg.spline_max});
    int length = cfg.resolved_interval_length();
    if (fit.cutoff + length > r + 1) length = r - fit.cutoff + 1; // clamp to available rank
    const SingularIndexSet T = select_index_set(fit.cutoff, length, r);
    const IntensityMap intensity = reconstruct_intensity(svd, T, A.grid);

    write_intensity_csv(out_dir / kIntensityCsv, intensity);
    write_intensity_pgm(out_dir / kIntensityPgm, intensity);
    write_two_column_csv(out_dir / kSigmaCsv, "sigma", svd.sigma);
    write_two_column_csv(out_dir / kTvCsv, "tv", fit.tv);
    {
        std::ofstream out(out_dir / kCutoffFile, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + (out_dir / kCutoffFile).string());
        out << fit.cutoff << "\n";
    }

    SeparateOutcome outcome;
    outcome.cutoff = fit.cutoff;
    outcome.fit_residual = fit.residual;
    outcome.index_set = T;
    outcome.intensity = intensity;
    outcome.sigma = svd.sigma;
    outcome.tv = fit.tv;
    return outcome;
}

Eigen::VectorXd minmax_normalize(const Eigen::VectorXd& v) {
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    if (hi <= lo) return Eigen::VectorXd::Zero(v.size());
    return (v.array() - lo) / (hi - lo);
}

double affine_rmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
    if (estimate.size() != truth.size())
        throw std::invalid_argument("affine_rmse: size mismatch");
    const Eigen::VectorXd y = minmax_normalize(truth);
    const double n = static_cast<double>(estimate.size());
    const double mx = estimate.mean();
    const double my = y.mean();
    const double vxx = (estimate.array() - mx).square().sum();
    double a = 0.0;
    if (vxx > 0.0) a = ((estimate.array() - mx) * (y.array() - my)).sum() / vxx;
    const double b = my - a * mx;
    return std::sqrt((a * estimate.array() + b - y.array()).square().sum() / n);
}

double minmax_rel2(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
    if (estimate.size() != truth.size())
        throw std::invalid_argument("minmax_rel2: size mismatch");
    const Eigen::VectorXd e = minmax_normalize(estimate);
    const Eigen::VectorXd y = minmax_normalize(truth);
    const double ny = y.norm();
    if (ny == 0.0) throw DegenerateInputError("minmax_rel2: truth map is constant");
    return (e - y).norm() / ny;
}

VerifyOutcome run_verify(const std::filesystem::path& run_dir, const RunConfig& cfg) {
    cfg.validate();
    if (std::filesystem::exists(run_dir / kManifestFile)) {
        RunManifest manifest = read_manifest(run_dir / kManifestFile);
        RunManifest inputs; // only the files verify reads
        for (const auto& [name, hash] : manifest.artifacts) {
            if (name == kTotalFile || name == kCollagenFile || name == kMetabolicFile ||
                name == kMapFile)
                inputs.artifacts.emplace_back(name, hash);
        }
        verify_manifest(run_dir, inputs);
    }

    const CasoratiMatrix A = read_casorati(run_dir / kTotalFile);
    const CasoratiMatrix Ac = read_casorati(run_dir / kCollagenFile);
    const CasoratiMatrix Am = read_casorati(run_dir / kMetabolicFile);
    if (A.n_x() != Ac.n_x() || A.n_t() != Ac.n_t() || A.n_x() != Am.n_x() || A.n_t() != Am.n_t())
        throw std::invalid_argument("run_verify: matrix shapes differ");
    const Eigen::VectorXd truth = read_map_csv(run_dir / kMapFile, A.grid);

    VerifyOutcome out;
    auto add = [&](const std::string& name, double value, const std::string& bound, bool pass) {
        out.checks.push_back({name, value, bound, pass});
    };

    // Lemma 3.1 at scale: trace dominance.
    const double trace_ratio = trace_dominance(Ac.data, Am.data);
    add("trace_ratio", trace_ratio, "[1e3,1e5]", trace_ratio >= 1e3 && trace_ratio <= 1e5);

    // Near-rank-one collagen kernel.
    const SvdResult svd_c = compute_svd(Ac);
    const double lam1_over_trace = svd_c.sigma[0] * svd_c.sigma[0] / svd_c.sigma.squaredNorm();
    add("collagen_lam1_over_trace", lam1_over_trace, ">=0.99", lam1_over_trace >= 0.99);

    // Lemma 3.2 cross bound.
    const CrossBoundReport cross = cross_bound_check(Ac.data, Am.data, cfg.dt);
    add("lemma32_max_ratio", cross.max_ratio, "<=1+1e-10", cross.pass);

    // Theorem 4.1 against the best rank-one approximation of the collagen
    // matrix (the pipeline collagen is only near-rank-one).
    const Eigen::MatrixXd Ac1 = svd_c.sigma[0] * svd_c.U.col(0) * svd_c.V.col(0).transpose();
    const PerturbationReport pert = perturbation_report(A.data, Ac1);
    add("dominance_n", pert.N, "report", true);
    add("weyl_n_times_sigma_err", pert.exact ? 0.0 : pert.N * pert.sigma_rel_err, "<=1",
        pert.exact || pert.N * pert.sigma_rel_err <= 1.0 + 1e-12);
    add("vec_err_times_n", pert.exact ? 0.0 : pert.N * pert.vec_err, "report", true);

    // Appendix A non-orthogonality (generic: strictly positive).
    const double cosine = nonorthogonality_check(Ac1, Am.data);
    add("nonorthogonality_cos", cosine, "report", true);

    // Cut-off vs the oracle index argmin{sigma_j(A) < sigma_1(Am)}.
    const SvdResult svd_a = compute_svd(A);
    const SvdResult svd_m = compute_svd(Am);
    const int r = svd_a.rank_dim();
    int oracle = r + 1;
    for (int j = 0; j < r; ++j) {
        if (svd_a.sigma[j] < svd_m.sigma[0]) {
            oracle = j + 1;
            break;
        }
    }
    const CutoffResult fit =
        select_cutoff(svd_a, CutoffFitConfig{cfg.spline_min, cfg.spline_max});
    add("cutoff", fit.cutoff, "report", true);
    add("oracle_index", oracle, "report", true);
    const double dev = std::abs(fit.cutoff - oracle);
    add("cutoff_abs_dev", dev, "<=10", dev <= 10.0);

    // Reconstructions: achieved from the total SVD over T, best-possible from
    // the isolated metabolic SVD over the matching index range, plus the
    // full-isolation reference.
    int length = cfg.resolved_interval_length();
    if (fit.cutoff + length > r + 1) length = r - fit.cutoff + 1;
    const SingularIndexSet T = select_index_set(fit.cutoff, length, r);
    const Eigen::VectorXd achieved = reconstruct_intensity(svd_a, T, A.grid).values;
    const Eigen::VectorXd best =
        reconstruct_intensity(svd_m, T, A.grid).values; // matching index range
    const SingularIndexSet T_full = select_index_set(1, svd_m.rank_dim(), svd_m.rank_dim());
    const Eigen::VectorXd best_full = reconstruct_intensity(svd_m, T_full, A.grid).values;

    const double err_best = affine_rmse(best, truth);
    const double err_achieved = affine_rmse(achieved, truth);
    add("error_best", err_best, "<=0.02", err_best <= 0.02);
    add("error_achieved", err_achieved, "<=0.05", err_achieved <= 0.05);
    add("error_best_full", affine_rmse(best_full, truth), "report", true);
    add("error_best_minmax_rel2", minmax_rel2(best, truth), "report", true);
    add("error_achieved_minmax_rel2", minmax_rel2(achieved, truth), "report", true);

    std::ofstream csv(run_dir / kVerifyCsv, std::ios::binary);
    if (!csv) throw IoError("cannot open for writing: " + (run_dir / kVerifyCsv).string());
    csv << "seed,check,value,bound,pass\n";
    for (const auto& check : out.checks) {
        csv << cfg.seed << "," << check.name << "," << format_double(check.value) << ","
            << check.bound << "," << (check.pass ? "pass" : "fail") << "\n";
    }
    if (!csv) throw IoError("write failed: " + (run_dir / kVerifyCsv).string());
    return out;
}

PipelineOutcome run_pipeline(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    PipelineOutcome outcome;
    outcome.simulate = run_simulate(cfg, out_dir);
    outcome.separate = run_separate(out_dir / kTotalFile, cfg, out_dir);
    outcome.verify = run_verify(out_dir, cfg);

    RunManifest manifest;
    manifest.created = utc_now();
    for (const char* name : {kConfigFile, kTotalFile, kCollagenFile, kMetabolicFile, kMapFile,
                             kIntensityCsv, kIntensityPgm, kSigmaCsv, kTvCsv, kCutoffFile,
                             kVerifyCsv})
        manifest.add_artifact(out_dir, name);
    manifest.add_metric("seed", std::to_string(cfg.seed));
    manifest.add_metric("collagen_scale", outcome.simulate.collagen_scale);
    manifest.add_metric("measured_rms_ratio", outcome.simulate.measured_ratio);
    manifest.add_metric("trace_ratio", outcome.verify.value("trace_ratio"));
    manifest.add_metric("cutoff", outcome.separate.cutoff);
    manifest.add_metric("oracle_index", outcome.verify.value("oracle_index"));
    manifest.add_metric("error_best", outcome.verify.value("error_best"));
    manifest.add_metric("error_achieved", outcome.verify.value("error_achieved"));
    int passed = 0;
    for (const auto& check : outcome.verify.checks)
        if (check.pass) ++passed;
    manifest.add_metric("checks_passed",
                        std::to_string(passed) + "/" + std::to_string(outcome.verify.checks.size()));
    write_manifest(out_dir / kManifestFile, manifest);
    return outcome;
}

} // namespace dynoct
