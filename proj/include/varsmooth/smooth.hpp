#pragma once

#include "varsmooth/linops.hpp"

#include <memory>

namespace varsmooth {

/// Smooth term h with a Lipschitz constant for its gradient.
class SmoothFunction {
public:
    enum class Kind { Zero, Quadratic, LeastSquares, ScaledNormSq };

    static SmoothFunction zero(Eigen::Index dim);
    /// h(x) = 1/2 x^T Q x + c^T x with Q symmetric.
    static SmoothFunction quadratic(Matrix q, Vector c);
    /// h(x) = 1/2 |B x - b|^2, L = |B|^2 from the operator's cached norm.
    static SmoothFunction least_squares(LinearOperator b_op, Vector b);
    /// h(x) = (weight / 2) |x|^2.
    static SmoothFunction scaled_norm_sq(double weight, Eigen::Index dim);

    Kind kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }
    double lip_grad() const { return lip_grad_; }

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;

private:
    SmoothFunction() = default;
    void check(const Vector& x) const;

    Kind kind_ = Kind::Zero;
    Eigen::Index dim_ = 0;
    double lip_grad_ = 0.0;
    double weight_ = 0.0;
    std::shared_ptr<const Matrix> q_;
    Vector c_;
    std::shared_ptr<const LinearOperator> op_;
    Vector b_;
};

} // namespace varsmooth
