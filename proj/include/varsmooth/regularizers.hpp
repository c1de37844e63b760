#pragma once

#include <Eigen/Core>

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace varsmooth {

using Vector = Eigen::VectorXd;

enum class PenaltyKind { Zero, L1, MCP, SCAD, Fractional, TukeyBiweight, CauchyLoss };

std::string_view to_string(PenaltyKind kind);
/// Parses "zero", "l1", "mcp", "scad", "fractional", "tukey", "cauchy".
PenaltyKind penalty_kind_from_string(std::string_view name);

/// Closed interval [lo, hi], used to describe a scalar subdifferential.
struct Interval {
    double lo;
    double hi;
    bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

/// A separable, weakly convex function g(y) = sum_i phi(y_i - b_i).
///
/// The scalar penalty phi is one of the supported kinds; the optional shift b
/// turns a regularizer into a loss of the form sum_i phi(a_i^T x - b_i).
/// Instances are immutable once constructed.
///
/// Each instance carries two certificates used by the solvers:
///  - rho: phi + (rho/2) t^2 is convex,
///  - lipschitz: |phi(s) - phi(t)| <= lip |s - t| (per coordinate).
class WeaklyConvexFunction {
public:
    static WeaklyConvexFunction zero();
    static WeaklyConvexFunction l1(double lambda);
    static WeaklyConvexFunction mcp(double lambda, double theta);
    static WeaklyConvexFunction scad(double lambda, double theta);
    static WeaklyConvexFunction fractional(double a);
    static WeaklyConvexFunction tukey();
    static WeaklyConvexFunction cauchy(double xi);

    /// Generic factory: kind plus its named parameters. Missing or unknown
    /// parameter names raise ConfigError.
    static WeaklyConvexFunction make(PenaltyKind kind, const std::map<std::string, double>& params);

    /// Copy with g(y) = sum phi(y_i - b_i).
    WeaklyConvexFunction with_shift(Vector b) const;
    /// Copy with a larger weak convexity modulus. Smaller values than the
    /// stored certificate are rejected.
    WeaklyConvexFunction with_rho(double rho) const;

    PenaltyKind kind() const { return kind_; }
    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& name) const;
    const std::optional<Vector>& shift() const { return shift_; }

    double rho() const { return rho_; }
    /// Lipschitz constant of the scalar penalty.
    double lipschitz() const { return lip_; }
    /// Lipschitz constant of y -> g(y) on R^n in the Euclidean norm (sqrt(n) * lip).
    double lipschitz(Eigen::Index n) const;
    bool is_lipschitz() const { return lip_ < std::numeric_limits<double>::infinity(); }
    /// phi has a kink at the origin (L1, MCP, SCAD, fractional).
    bool kinked_at_origin() const;

    // Scalar penalty and its calculus.
    double scalar_value(double t) const;
    /// Derivative for t != 0; at a kink the right derivative is returned for
    /// t = +0 via scalar_slope_at_origin().
    double scalar_derivative(double t) const;
    double scalar_second_derivative(double t) const;
    double scalar_slope_at_origin() const;
    /// Proximal point of mu*phi at t. Requires mu < 1/rho.
    double scalar_prox(double mu, double t) const;
    /// Scalar Frechet subdifferential of phi at t.
    Interval scalar_subdifferential(double t) const;

    double eval(const Vector& y) const;
    Vector prox(double mu, const Vector& y) const;
    Vector subgradient_selection(const Vector& y) const;

    /// Throws InvalidSmoothingError unless 0 < mu < 1/rho.
    void check_smoothing(double mu) const;

    friend bool operator==(const WeaklyConvexFunction& a, const WeaklyConvexFunction& b);

private:
    WeaklyConvexFunction(PenaltyKind kind, std::map<std::string, double> params);

    double shift_at(Eigen::Index i) const { return shift_ ? (*shift_)[i] : 0.0; }
    double numeric_prox(double mu, double t) const;

    PenaltyKind kind_;
    std::map<std::string, double> params_;
    double rho_ = 0.0;
    double lip_ = 0.0;
    std::optional<Vector> shift_;
    // cached parameters
    double lambda_ = 0.0;
    double theta_ = 0.0;
    double a_ = 0.0;
    double xi_ = 0.0;
};

} // namespace varsmooth
