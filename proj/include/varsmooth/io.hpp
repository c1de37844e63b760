#pragma once

#include "varsmooth/harness.hpp"
#include "varsmooth/solvers.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace varsmooth {

/// Raised for unreadable or malformed files.
class IoError : public Error {
public:
    using Error::Error;
};

/// Row-major, header-free, comma-separated reals.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// A CSV image is a matrix of reals (height rows, width columns).
ImageBuffer read_image_csv(const std::filesystem::path& path);
void write_image_csv(const std::filesystem::path& path, const ImageBuffer& img);

/// Binary PGM (P5, maxval 255). Pixels map linearly v -> v / 255 on read;
/// on write values are clamped to [0, 1] and rounded to the nearest level.
ImageBuffer read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const ImageBuffer& img);

/// Dispatches on the extension: ".pgm" or ".csv". Loaded pixels are clamped
/// to [0, 1].
ImageBuffer read_image(const std::filesystem::path& path);

inline constexpr const char* kTraceHeader = "k,mu,gamma,F_smoothed,F_true,grad_norm,feasibility,time_ms";

/// Writes the fixed trace header and one row per record. Reals use 17
/// significant digits. When include_timing is false the time_ms column is
/// written as 0 so identical runs produce identical files.
void write_trace_csv(std::ostream& os, const SolveTrace& trace, bool include_timing = false);
void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace, bool include_timing = false);
SolveTrace read_trace_csv(const std::filesystem::path& path);

} // namespace varsmooth
