#pragma once

#include "varsmooth/solvers.hpp"

#include <cstdint>
#include <string_view>

namespace varsmooth {

/// Grayscale image, row-major, values nominally in [0, 1].
struct ImageBuffer {
    Eigen::Index height = 0;
    Eigen::Index width = 0;
    Vector pixels;

    ImageBuffer() = default;
    ImageBuffer(Eigen::Index h, Eigen::Index w, Vector px);

    double at(Eigen::Index r, Eigen::Index c) const { return pixels[r * width + c]; }
};

enum class SyntheticKind { PiecewiseConstant, Checkerboard };

SyntheticKind synthetic_kind_from_string(std::string_view name);

/// Deterministic test images. Checkerboard alternates 0/1 per pixel starting
/// with 0; piecewise-constant draws a few axis-aligned rectangles with
/// quantized gray levels on a flat background.
ImageBuffer generate_synthetic_image(SyntheticKind kind, Eigen::Index height, Eigen::Index width,
                                     std::uint64_t seed);

/// Adds i.i.d. N(0, sigma^2) noise from a 64-bit Mersenne Twister seeded with `seed`.
ImageBuffer add_gaussian_noise(const ImageBuffer& img, double sigma, std::uint64_t seed);

/// Mean SSIM over all fully contained window x window patches with a uniform
/// window, dynamic range 1, C1 = 0.01^2 and C2 = 0.03^2.
double ssim(const ImageBuffer& a, const ImageBuffer& b, int window = 7);

/// min_x 1/2 |x - b|^2 + sum MCP(grad x) with forward differences.
CompositeProblem build_tv_mcp_denoising(const ImageBuffer& noisy, double lambda, double theta);

enum class RobustLoss { Tukey, Cauchy };

struct RobustRegressionParams {
    double reg_weight = 0.0; ///< (w/2)|x|^2 when positive, otherwise h = 0
    double xi = 1.0;         ///< Cauchy scale
};

/// min_x h(x) + sum phi(a_i^T x - b_i).
CompositeProblem build_robust_regression(const Matrix& design, const Vector& response, RobustLoss loss,
                                         const RobustRegressionParams& params = {});

/// Planted linear model b = A x_true + noise with a fraction of gross outliers.
struct RegressionData {
    Matrix design;
    Vector response;
    Vector coefficients;
};

/// Design entries and coefficients are N(0, 1); noise is N(0, noise_sigma^2);
/// the first round(outlier_fraction * rows) rows of a random permutation get
/// an extra offset of magnitude uniform in [5, 10] with random sign.
RegressionData generate_regression_data(Eigen::Index rows, Eigen::Index cols, double outlier_fraction,
                                        double noise_sigma, std::uint64_t seed);

/// min_x 1/2 |Bx - b|^2 + sum MCP(x_i).
CompositeProblem build_lasso_mcp(const Matrix& design, const Vector& response, double lambda, double theta);

} // namespace varsmooth
