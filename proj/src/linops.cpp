#include "varsmooth/linops.hpp"

#include "varsmooth/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace varsmooth {

namespace {

constexpr double kNormInflation = 1e-12;
constexpr int kNormProbes = 4;
constexpr int kPowerMaxIter = 10'000;

Vector probe_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uni(rng);
    return v;
}

void check_dim(const char* what, Eigen::Index expected, Eigen::Index got) {
    if (expected != got) {
        std::ostringstream os;
        os << what << ": dimension mismatch (expected " << expected << ", got " << got << ")";
        throw UsageError(os.str());
    }
}

} // namespace

// Cholesky factor of A A^T for a dense operator of full row rank.
struct LinearOperator::Gram {
    Eigen::LLT<Matrix> llt;
    double sigma_min;
};

LinearOperator LinearOperator::identity(Eigen::Index dim) {
    if (dim <= 0) throw UsageError("identity operator needs a positive dimension");
    LinearOperator op;
    op.kind_ = Kind::Identity;
    op.rows_ = op.cols_ = dim;
    op.finalize();
    return op;
}

LinearOperator LinearOperator::dense(Matrix m) {
    if (m.rows() == 0 || m.cols() == 0) throw UsageError("dense operator must be nonempty");
    if (!m.allFinite()) throw UsageError("dense operator has non-finite entries");
    LinearOperator op;
    op.kind_ = Kind::Dense;
    op.rows_ = m.rows();
    op.cols_ = m.cols();
    op.dense_ = std::make_shared<const Matrix>(std::move(m));
    op.finalize();
    return op;
}

LinearOperator LinearOperator::grad2d(Eigen::Index height, Eigen::Index width) {
    if (height <= 0 || width <= 0) throw UsageError("grad2d needs positive image dimensions");
    LinearOperator op;
    op.kind_ = Kind::Grad2D;
    op.height_ = height;
    op.width_ = width;
    op.cols_ = height * width;
    op.rows_ = height * (width - 1) + (height - 1) * width;
    if (op.rows_ == 0) throw UsageError("grad2d of a single pixel is empty");
    op.finalize();
    return op;
}

LinearOperator LinearOperator::scaled(double factor, LinearOperator inner) {
    if (!std::isfinite(factor) || factor == 0.0) throw UsageError("scaled operator needs a finite nonzero factor");
    LinearOperator op;
    op.kind_ = Kind::Scaled;
    op.rows_ = inner.rows();
    op.cols_ = inner.cols();
    op.scale_ = factor;
    op.inner_ = std::make_shared<const LinearOperator>(std::move(inner));
    op.finalize();
    return op;
}

void LinearOperator::finalize() {
    switch (kind_) {
    case Kind::Identity:
        norm_est_ = 1.0;
        return;
    case Kind::Scaled:
        norm_est_ = std::abs(scale_) * inner_->norm_estimate();
        return;
    case Kind::Grad2D: {
        // Spectrum of the path-graph Laplacian: 4 sin^2(pi k / (2m)), k < m.
        auto top = [](Eigen::Index m) {
            const double s = std::sin(std::numbers::pi * static_cast<double>(m - 1) / (2.0 * static_cast<double>(m)));
            return 4.0 * s * s;
        };
        norm_est_ = std::sqrt(top(width_) + top(height_)) * (1.0 + kNormInflation);
        break;
    }
    case Kind::Dense: {
        const Matrix& a = *dense_;
        const Matrix gram_small = a.rows() <= a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_small, Eigen::EigenvaluesOnly);
        const double top = eig.eigenvalues().maxCoeff();
        if (!(top > 0.0)) {
            // zero matrix: nothing to estimate, never surjective
            norm_est_ = 0.0;
            return;
        }
        norm_est_ = std::sqrt(top) * (1.0 + kNormInflation);

        if (a.rows() <= a.cols()) {
            const double bottom = eig.eigenvalues().minCoeff();
            // Treat numerically rank-deficient A A^T as singular.
            if (bottom > 1e-13 * top) {
                auto g = std::make_shared<Gram>();
                g->llt.compute(gram_small);
                if (g->llt.info() == Eigen::Success) {
                    g->sigma_min = std::sqrt(bottom);
                    gram_ = std::move(g);
                }
            }
        }
        break;
    }
    }

    for (int probe = 0; probe < kNormProbes; ++probe) {
        const Vector v = probe_vector(cols_, 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(probe));
        const double ratio = apply(v).norm() / v.norm();
        if (ratio > norm_est_) {
            std::ostringstream os;
            os << "cached operator norm " << norm_est_ << " is below the observed ratio " << ratio;
            throw NumericError(os.str());
        }
    }
}

Vector LinearOperator::apply(const Vector& x) const {
    check_dim("apply", cols_, x.size());
    switch (kind_) {
    case Kind::Identity:
        return x;
    case Kind::Dense:
        return (*dense_) * x;
    case Kind::Scaled:
        return scale_ * inner_->apply(x);
    case Kind::Grad2D: {
        Vector out(rows_);
        Eigen::Index k = 0;
        for (Eigen::Index r = 0; r < height_; ++r)
            for (Eigen::Index c = 0; c + 1 < width_; ++c) out[k++] = x[r * width_ + c + 1] - x[r * width_ + c];
        for (Eigen::Index r = 0; r + 1 < height_; ++r)
            for (Eigen::Index c = 0; c < width_; ++c) out[k++] = x[(r + 1) * width_ + c] - x[r * width_ + c];
        return out;
    }
    }
    return x;
}

Vector LinearOperator::adjoint_apply(const Vector& y) const {
    check_dim("adjoint_apply", rows_, y.size());
    switch (kind_) {
    case Kind::Identity:
        return y;
    case Kind::Dense:
        return dense_->transpose() * y;
    case Kind::Scaled:
        return scale_ * inner_->adjoint_apply(y);
    case Kind::Grad2D: {
        Vector out = Vector::Zero(cols_);
        Eigen::Index k = 0;
        for (Eigen::Index r = 0; r < height_; ++r)
            for (Eigen::Index c = 0; c + 1 < width_; ++c, ++k) {
                out[r * width_ + c + 1] += y[k];
                out[r * width_ + c] -= y[k];
            }
        for (Eigen::Index r = 0; r + 1 < height_; ++r)
            for (Eigen::Index c = 0; c < width_; ++c, ++k) {
                out[(r + 1) * width_ + c] += y[k];
                out[r * width_ + c] -= y[k];
            }
        return out;
    }
    }
    return y;
}

bool LinearOperator::is_surjective() const {
    switch (kind_) {
    case Kind::Identity:
        return true;
    case Kind::Scaled:
        return inner_->is_surjective();
    case Kind::Dense:
        return gram_ != nullptr;
    case Kind::Grad2D:
        return false;
    }
    return false;
}

std::optional<double> LinearOperator::sigma_min() const {
    switch (kind_) {
    case Kind::Identity:
        return 1.0;
    case Kind::Scaled: {
        auto inner = inner_->sigma_min();
        if (!inner) return std::nullopt;
        return std::abs(scale_) * *inner;
    }
    case Kind::Dense:
        if (gram_) return gram_->sigma_min;
        return std::nullopt;
    case Kind::Grad2D:
        return std::nullopt;
    }
    return std::nullopt;
}

Vector LinearOperator::least_norm_correct(const Vector& x, const Vector& z) const {
    check_dim("least_norm_correct (x)", cols_, x.size());
    check_dim("least_norm_correct (z)", rows_, z.size());
    if (!is_surjective()) throw UnsupportedOperatorError("least-norm correction requires a surjective operator");
    switch (kind_) {
    case Kind::Identity:
        return z;
    case Kind::Scaled:
        // (sB)^T (s^2 B B^T)^{-1} (sBx - z) = B^T (B B^T)^{-1} (Bx - z/s)
        return inner_->least_norm_correct(x, z / scale_);
    case Kind::Dense: {
        const Vector residual = (*dense_) * x - z;
        return x - dense_->transpose() * gram_->llt.solve(residual);
    }
    case Kind::Grad2D:
        break;
    }
    throw UnsupportedOperatorError("least-norm correction requires a surjective operator");
}

const Matrix& LinearOperator::matrix() const {
    if (kind_ != Kind::Dense) throw UsageError("matrix() is only available for dense operators");
    return *dense_;
}

double estimate_norm(const LinearOperator& op, double tol) {
    if (!(tol > 0.0)) throw UsageError("estimate_norm: tol must be positive");
    Vector v = probe_vector(op.cols(), 0x5eedULL);
    v.normalize();
    double rayleigh = op.apply(v).squaredNorm();
    for (int it = 0; it < kPowerMaxIter; ++it) {
        Vector w = op.adjoint_apply(op.apply(v));
        const double wn = w.norm();
        if (wn == 0.0) throw UsageError("estimate_norm: operator is zero");
        v = w / wn;
        const double next = op.apply(v).squaredNorm();
        if (std::abs(next - rayleigh) <= tol * next) return std::sqrt(next) * (1.0 + 10.0 * tol);
        rayleigh = next;
    }
    throw NumericError("estimate_norm: power iteration did not converge");
}

} // namespace varsmooth
