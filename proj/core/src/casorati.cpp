#include "dynoct/casorati.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dynoct/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "casorati files are little-endian; big-endian hosts unsupported");

namespace dynoct {

CasoratiMatrix build_casorati(const std::vector<SignalRecord>& records, const PixelGrid& grid,
                              SignalComponent component) {
    if (static_cast<int>(records.size()) != grid.size())
        throw std::invalid_argument("build_casorati: need one record per pixel");
    const Eigen::Index n_t = component == SignalComponent::total      ? records[0].samples.size()
                             : component == SignalComponent::collagen ? records[0].collagen.size()
                                                                      : records[0].metabolic.size();
    if (n_t < 1) throw std::invalid_argument("build_casorati: empty records");
    CasoratiMatrix out;
    out.grid = grid;
    out.data.resize(grid.size(), n_t);
    for (int j = 0; j < grid.size(); ++j) {
        const auto& rec = records[j];
        const Eigen::VectorXd& src = component == SignalComponent::total      ? rec.samples
                                     : component == SignalComponent::collagen ? rec.collagen
                                                                              : rec.metabolic;
        if (src.size() != n_t)
            throw std::invalid_argument("build_casorati: ragged sample lengths");
        out.data.row(j) = src.transpose();
    }
    if (!out.data.allFinite()) throw std::invalid_argument("build_casorati: non-finite samples");
    return out;
}

CasoratiMatrix build_casorati(const std::vector<SignalRecord>& records, const PixelGrid& grid) {
    return build_casorati(records, grid, SignalComponent::total);
}

void write_casorati(const std::filesystem::path& path, const CasoratiMatrix& matrix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    std::ostringstream header;
    header << "DYNOCT-CASORATI v1 nx=" << matrix.n_x() << " nt=" << matrix.n_t()
           << " grid=" << matrix.grid.rows << "x" << matrix.grid.cols << "\n";
    out << header.str();
    for (int j = 0; j < matrix.n_x(); ++j) {
        for (int k = 0; k < matrix.n_t(); ++k) {
            const double v = matrix.data(j, k);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

CasoratiMatrix read_casorati(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw IoError("missing casorati header: " + path.string());
    std::istringstream hs(header);
    std::string magic, version, nx_tok, nt_tok, grid_tok;
    hs >> magic >> version >> nx_tok >> nt_tok >> grid_tok;
    if (magic != "DYNOCT-CASORATI" || version != "v1" || nx_tok.rfind("nx=", 0) != 0 ||
        nt_tok.rfind("nt=", 0) != 0 || grid_tok.rfind("grid=", 0) != 0)
        throw IoError("not a DYNOCT-CASORATI v1 file: " + path.string());
    const int nx = std::stoi(nx_tok.substr(3));
    const int nt = std::stoi(nt_tok.substr(3));
    const auto dims = grid_tok.substr(5);
    const auto xpos = dims.find('x');
    if (xpos == std::string::npos) throw IoError("casorati header: bad grid= token");
    const int rows = std::stoi(dims.substr(0, xpos));
    const int cols = std::stoi(dims.substr(xpos + 1));
    if (nx < 1 || nt < 1 || rows * cols != nx)
        throw IoError("casorati header: inconsistent dimensions");
    CasoratiMatrix matrix;
    matrix.grid = PixelGrid(rows, cols);
    matrix.data.resize(nx, nt);
    for (int j = 0; j < nx; ++j) {
        for (int k = 0; k < nt; ++k) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            if (!in) throw IoError("truncated casorati payload: " + path.string());
            matrix.data(j, k) = v;
        }
    }
    if (!matrix.data.allFinite()) throw IoError("casorati payload has non-finite entries");
    return matrix;
}

} // namespace dynoct
