#include "varsmooth/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace varsmooth {

ImageBuffer::ImageBuffer(Eigen::Index h, Eigen::Index w, Vector px) : height(h), width(w), pixels(std::move(px)) {
    if (h <= 0 || w <= 0) throw UsageError("image dimensions must be positive");
    if (pixels.size() != h * w) throw UsageError("image pixel count does not match height * width");
    if (!pixels.allFinite()) throw UsageError("image contains non-finite pixels");
}

SyntheticKind synthetic_kind_from_string(std::string_view name) {
    if (name == "piecewise_constant") return SyntheticKind::PiecewiseConstant;
    if (name == "checkerboard") return SyntheticKind::Checkerboard;
    throw ConfigError("unknown synthetic image '" + std::string(name) +
                      "'; valid names: piecewise_constant, checkerboard");
}

ImageBuffer generate_synthetic_image(SyntheticKind kind, Eigen::Index height, Eigen::Index width,
                                     std::uint64_t seed) {
    if (height < 2 || width < 2) throw ConfigError("synthetic images need height, width >= 2");
    Vector px(height * width);
    if (kind == SyntheticKind::Checkerboard) {
        for (Eigen::Index r = 0; r < height; ++r)
            for (Eigen::Index c = 0; c < width; ++c) px[r * width + c] = static_cast<double>((r + c) % 2);
        return {height, width, std::move(px)};
    }

    std::mt19937_64 rng(seed);
    // Gray levels 0.1, 0.2, ..., 0.9.
    auto level = [&] { return static_cast<double>(std::uniform_int_distribution<int>(1, 9)(rng)) / 10.0; };
    px.setConstant(level());
    constexpr int kRectangles = 3;
    for (int i = 0; i < kRectangles; ++i) {
        const Eigen::Index rh = std::uniform_int_distribution<Eigen::Index>(std::max<Eigen::Index>(1, height / 5),
                                                                            std::max<Eigen::Index>(1, height / 2))(rng);
        const Eigen::Index rw = std::uniform_int_distribution<Eigen::Index>(std::max<Eigen::Index>(1, width / 5),
                                                                            std::max<Eigen::Index>(1, width / 2))(rng);
        const Eigen::Index r0 = std::uniform_int_distribution<Eigen::Index>(0, height - rh)(rng);
        const Eigen::Index c0 = std::uniform_int_distribution<Eigen::Index>(0, width - rw)(rng);
        const double v = level();
        for (Eigen::Index r = r0; r < r0 + rh; ++r)
            for (Eigen::Index c = c0; c < c0 + rw; ++c) px[r * width + c] = v;
    }
    return {height, width, std::move(px)};
}

ImageBuffer add_gaussian_noise(const ImageBuffer& img, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise sigma must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector px = img.pixels;
    for (Eigen::Index i = 0; i < px.size(); ++i) px[i] += sigma * normal(rng);
    return {img.height, img.width, std::move(px)};
}

double ssim(const ImageBuffer& a, const ImageBuffer& b, int window) {
    if (a.height != b.height || a.width != b.width) throw UsageError("ssim: image dimensions differ");
    if (window < 3 || window % 2 == 0) throw UsageError("ssim: window must be odd and >= 3");
    if (window > a.height || window > a.width) throw UsageError("ssim: window larger than image");

    constexpr double kRange = 1.0;
    const double c1 = (0.01 * kRange) * (0.01 * kRange);
    const double c2 = (0.03 * kRange) * (0.03 * kRange);
    const double n = static_cast<double>(window) * window;

    double total = 0.0;
    long count = 0;
    for (Eigen::Index r0 = 0; r0 + window <= a.height; ++r0) {
        for (Eigen::Index c0 = 0; c0 + window <= a.width; ++c0) {
            double sa = 0, sb = 0;
            for (Eigen::Index r = r0; r < r0 + window; ++r)
                for (Eigen::Index c = c0; c < c0 + window; ++c) {
                    sa += a.at(r, c);
                    sb += b.at(r, c);
                }
            const double ma = sa / n, mb = sb / n;
            double vaa = 0, vbb = 0, vab = 0;
            for (Eigen::Index r = r0; r < r0 + window; ++r)
                for (Eigen::Index c = c0; c < c0 + window; ++c) {
                    const double da = a.at(r, c) - ma, db = b.at(r, c) - mb;
                    vaa += da * da;
                    vbb += db * db;
                    vab += da * db;
                }
            vaa /= n;
            vbb /= n;
            vab /= n;
            total += ((2 * ma * mb + c1) * (2 * vab + c2)) / ((ma * ma + mb * mb + c1) * (vaa + vbb + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

CompositeProblem build_tv_mcp_denoising(const ImageBuffer& noisy, double lambda, double theta) {
    if (noisy.height < 2 || noisy.width < 2) throw ConfigError("denoising needs an image of at least 2 x 2");
    if (!(theta * lambda > 0.0)) throw ConfigError("MCP requires theta * lambda > 0");
    const Eigen::Index d = noisy.height * noisy.width;
    auto h = SmoothFunction::least_squares(LinearOperator::identity(d), noisy.pixels);
    return {std::move(h), WeaklyConvexFunction::mcp(lambda, theta), LinearOperator::grad2d(noisy.height, noisy.width),
            0.0};
}

CompositeProblem build_robust_regression(const Matrix& design, const Vector& response, RobustLoss loss,
                                         const RobustRegressionParams& params) {
    if (design.rows() != response.size()) throw UsageError("robust regression: design and response disagree");
    auto g = loss == RobustLoss::Tukey ? WeaklyConvexFunction::tukey() : WeaklyConvexFunction::cauchy(params.xi);
    const Eigen::Index d = design.cols();
    auto h = params.reg_weight > 0.0 ? SmoothFunction::scaled_norm_sq(params.reg_weight, d) : SmoothFunction::zero(d);
    return {std::move(h), g.with_shift(response), LinearOperator::dense(design), 0.0};
}

RegressionData generate_regression_data(Eigen::Index rows, Eigen::Index cols, double outlier_fraction,
                                        double noise_sigma, std::uint64_t seed) {
    if (rows <= 0 || cols <= 0) throw ConfigError("regression data needs positive dimensions");
    if (!(outlier_fraction >= 0.0 && outlier_fraction <= 1.0)) throw ConfigError("outlier_fraction must be in [0, 1]");
    if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RegressionData data;
    data.design.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) data.design(r, c) = normal(rng);
    data.coefficients.resize(cols);
    for (Eigen::Index c = 0; c < cols; ++c) data.coefficients[c] = normal(rng);
    data.response = data.design * data.coefficients;
    for (Eigen::Index r = 0; r < rows; ++r) data.response[r] += noise_sigma * normal(rng);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    const auto n_out = static_cast<std::size_t>(std::lround(outlier_fraction * static_cast<double>(rows)));
    std::uniform_real_distribution<double> magnitude(5.0, 10.0);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double s = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
        data.response[order[i]] += s * magnitude(rng);
    }
    return data;
}

CompositeProblem build_lasso_mcp(const Matrix& design, const Vector& response, double lambda, double theta) {
    if (design.rows() != response.size()) throw UsageError("lasso: design and response disagree");
    const Eigen::Index d = design.cols();
    return {SmoothFunction::least_squares(LinearOperator::dense(design), response),
            WeaklyConvexFunction::mcp(lambda, theta), LinearOperator::identity(d), 0.0};
}

} // namespace varsmooth
