#include "varsmooth/smooth.hpp"

#include "varsmooth/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace varsmooth {

SmoothFunction SmoothFunction::zero(Eigen::Index dim) {
    if (dim <= 0) throw UsageError("smooth term needs a positive dimension");
    SmoothFunction h;
    h.kind_ = Kind::Zero;
    h.dim_ = dim;
    return h;
}

SmoothFunction SmoothFunction::quadratic(Matrix q, Vector c) {
    if (q.rows() != q.cols() || q.rows() != c.size() || q.rows() == 0)
        throw UsageError("quadratic: Q must be square and match c");
    if (!q.isApprox(q.transpose(), 1e-12)) throw UsageError("quadratic: Q must be symmetric");
    SmoothFunction h;
    h.kind_ = Kind::Quadratic;
    h.dim_ = q.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(q, Eigen::EigenvaluesOnly);
    h.lip_grad_ = eig.eigenvalues().cwiseAbs().maxCoeff() * (1.0 + 1e-12);
    h.q_ = std::make_shared<const Matrix>(std::move(q));
    h.c_ = std::move(c);
    return h;
}

SmoothFunction SmoothFunction::least_squares(LinearOperator b_op, Vector b) {
    if (b_op.rows() != b.size()) throw UsageError("least_squares: B and b disagree in dimension");
    SmoothFunction h;
    h.kind_ = Kind::LeastSquares;
    h.dim_ = b_op.cols();
    const double nb = b_op.norm_estimate();
    h.lip_grad_ = nb * nb;
    h.op_ = std::make_shared<const LinearOperator>(std::move(b_op));
    h.b_ = std::move(b);
    return h;
}

SmoothFunction SmoothFunction::scaled_norm_sq(double weight, Eigen::Index dim) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) throw UsageError("scaled_norm_sq: weight must be >= 0");
    if (dim <= 0) throw UsageError("smooth term needs a positive dimension");
    SmoothFunction h;
    h.kind_ = Kind::ScaledNormSq;
    h.dim_ = dim;
    h.weight_ = weight;
    h.lip_grad_ = weight;
    return h;
}

void SmoothFunction::check(const Vector& x) const {
    if (x.size() != dim_) {
        std::ostringstream os;
        os << "smooth term: dimension mismatch (expected " << dim_ << ", got " << x.size() << ")";
        throw UsageError(os.str());
    }
}

double SmoothFunction::value(const Vector& x) const {
    check(x);
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Quadratic:
        return 0.5 * x.dot((*q_) * x) + c_.dot(x);
    case Kind::LeastSquares:
        return 0.5 * (op_->apply(x) - b_).squaredNorm();
    case Kind::ScaledNormSq:
        return 0.5 * weight_ * x.squaredNorm();
    }
    return 0.0;
}

Vector SmoothFunction::gradient(const Vector& x) const {
    check(x);
    switch (kind_) {
    case Kind::Zero:
        return Vector::Zero(dim_);
    case Kind::Quadratic:
        return (*q_) * x + c_;
    case Kind::LeastSquares:
        return op_->adjoint_apply(op_->apply(x) - b_);
    case Kind::ScaledNormSq:
        return weight_ * x;
    }
    return Vector::Zero(dim_);
}

} // namespace varsmooth
