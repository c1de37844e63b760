#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>

namespace varsmooth {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Linear map A : R^d -> R^n with its adjoint.
///
/// Every operator caches an upper bound on its spectral norm at construction.
/// Operators with full row rank (identity, wide or square dense matrices of
/// full rank, and nonzero scalings of those) also carry a factorization of
/// A A^T for least-norm corrections. Copies share that state; instances are
/// immutable.
class LinearOperator {
public:
    enum class Kind { Identity, Dense, Grad2D, Scaled };

    static LinearOperator identity(Eigen::Index dim);
    static LinearOperator dense(Matrix m);
    /// Forward differences of an H x W row-major image, no wraparound.
    /// Output: H*(W-1) horizontal differences (row by row) followed by
    /// (H-1)*W vertical differences (row by row).
    static LinearOperator grad2d(Eigen::Index height, Eigen::Index width);
    static LinearOperator scaled(double factor, LinearOperator inner);

    Kind kind() const { return kind_; }
    /// Output dimension n.
    Eigen::Index rows() const { return rows_; }
    /// Input dimension d.
    Eigen::Index cols() const { return cols_; }

    Vector apply(const Vector& x) const;
    Vector adjoint_apply(const Vector& y) const;

    /// Cached upper bound on |A|.
    double norm_estimate() const { return norm_est_; }
    bool is_surjective() const;
    /// Smallest singular value, available for surjective operators only.
    std::optional<double> sigma_min() const;

    /// x - A^T (A A^T)^{-1} (A x - z): the point closest to x with A x' = z.
    /// Throws UnsupportedOperatorError unless the operator is surjective.
    Vector least_norm_correct(const Vector& x, const Vector& z) const;

    /// Dense entries; only valid for Kind::Dense.
    const Matrix& matrix() const;
    Eigen::Index image_height() const { return height_; }
    Eigen::Index image_width() const { return width_; }
    double scale() const { return scale_; }

private:
    struct Gram;

    LinearOperator() = default;
    void finalize();

    Kind kind_ = Kind::Identity;
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    std::shared_ptr<const Matrix> dense_;
    Eigen::Index height_ = 0;
    Eigen::Index width_ = 0;
    double scale_ = 1.0;
    std::shared_ptr<const LinearOperator> inner_;
    std::shared_ptr<const Gram> gram_;
    double norm_est_ = 0.0;
};

/// Power iteration on A^T A, stopped when the relative change of the Rayleigh
/// quotient drops below tol. The square root is inflated by (1 + 10 tol) so
/// that the result upper-bounds |A|. Throws NumericError after 10^4
/// iterations and UsageError for the zero operator.
double estimate_norm(const LinearOperator& op, double tol);

} // namespace varsmooth
