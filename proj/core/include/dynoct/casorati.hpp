#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "dynoct/forward.hpp"
#include "dynoct/grid.hpp"

namespace dynoct {

/// Space x time rearrangement of the image sequence: row j is pixel x_j
/// (row-major flattening), column k is time sample t_k.
struct CasoratiMatrix {
    Eigen::MatrixXd data;
    PixelGrid grid;

    int n_x() const { return static_cast<int>(data.rows()); }
    int n_t() const { return static_cast<int>(data.cols()); }
};

/// One record per pixel, equal sample counts; A[j, k] = record_j.samples[k].
CasoratiMatrix build_casorati(const std::vector<SignalRecord>& records, const PixelGrid& grid);

/// As build_casorati but from one component of the decomposition.
enum class SignalComponent { total, collagen, metabolic };
CasoratiMatrix build_casorati(const std::vector<SignalRecord>& records, const PixelGrid& grid,
                              SignalComponent component);

// File format: ASCII header "DYNOCT-CASORATI v1 nx=<..> nt=<..> grid=<rows>x<cols>\n"
// followed by nx*nt little-endian 64-bit floats, row-major.
void write_casorati(const std::filesystem::path& path, const CasoratiMatrix& matrix);
CasoratiMatrix read_casorati(const std::filesystem::path& path);

} // namespace dynoct
