#include "varsmooth/regularizers.hpp"

#include "varsmooth/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

namespace varsmooth {

namespace {

// Stored weak convexity moduli for the robust losses.
constexpr double kTukeyRho = 6.0;
constexpr double kCauchyRho = 6.0;

constexpr double kProxResidualTol = 1e-12;
constexpr int kProxMaxIter = 100;

struct KindInfo {
    PenaltyKind kind;
    std::string_view name;
    std::array<std::string_view, 2> required;
};

constexpr std::array<KindInfo, 7> kKinds{{
    {PenaltyKind::Zero, "zero", {}},
    {PenaltyKind::L1, "l1", {"lambda"}},
    {PenaltyKind::MCP, "mcp", {"lambda", "theta"}},
    {PenaltyKind::SCAD, "scad", {"lambda", "theta"}},
    {PenaltyKind::Fractional, "fractional", {"a"}},
    {PenaltyKind::TukeyBiweight, "tukey", {}},
    {PenaltyKind::CauchyLoss, "cauchy", {"xi"}},
}};

const KindInfo& info(PenaltyKind kind) {
    for (const auto& k : kKinds)
        if (k.kind == kind) return k;
    throw UsageError("unknown penalty kind");
}

double sign(double t) { return (t > 0.0) - (t < 0.0); }

std::string valid_kind_names() {
    std::string out;
    for (const auto& k : kKinds) {
        if (!out.empty()) out += ", ";
        out += k.name;
    }
    return out;
}

// Golden-section maximization of |phi'| on [0, upper]. The slope of the
// smooth losses rises from 0 and then decays, so it is unimodal there.
double max_slope(const WeaklyConvexFunction& f, double upper) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = upper;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = std::abs(f.scalar_derivative(x1)), f2 = std::abs(f.scalar_derivative(x2));
    while (hi - lo > 1e-12 * std::max(1.0, upper)) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = std::abs(f.scalar_derivative(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = std::abs(f.scalar_derivative(x1));
        }
    }
    // Pad the bracket estimate so the result stays an upper bound.
    return std::max(f1, f2) * (1.0 + 1e-12);
}

} // namespace

std::string_view to_string(PenaltyKind kind) { return info(kind).name; }

PenaltyKind penalty_kind_from_string(std::string_view name) {
    for (const auto& k : kKinds)
        if (k.name == name) return k.kind;
    throw ConfigError("unknown regularizer '" + std::string(name) + "'; valid names: " + valid_kind_names());
}

WeaklyConvexFunction::WeaklyConvexFunction(PenaltyKind kind, std::map<std::string, double> params)
    : kind_(kind), params_(std::move(params)) {
    const auto& ki = info(kind);
    std::set<std::string, std::less<>> required;
    for (auto r : ki.required)
        if (!r.empty()) required.emplace(r);
    for (const auto& [name, value] : params_) {
        if (!required.contains(name))
            throw ConfigError("regularizer '" + std::string(ki.name) + "' has no parameter '" + name + "'");
        if (!std::isfinite(value) || value <= 0.0)
            throw ConfigError("regularizer parameter '" + name + "' must be positive and finite");
    }
    for (const auto& r : required)
        if (!params_.contains(r))
            throw ConfigError("regularizer '" + std::string(ki.name) + "' requires parameter '" + r + "'");

    switch (kind_) {
    case PenaltyKind::Zero:
        rho_ = 0.0;
        lip_ = 0.0;
        break;
    case PenaltyKind::L1:
        lambda_ = params_.at("lambda");
        rho_ = 0.0;
        lip_ = lambda_;
        break;
    case PenaltyKind::MCP:
        lambda_ = params_.at("lambda");
        theta_ = params_.at("theta");
        rho_ = 1.0 / theta_;
        lip_ = lambda_;
        break;
    case PenaltyKind::SCAD:
        lambda_ = params_.at("lambda");
        theta_ = params_.at("theta");
        if (!(theta_ > 2.0)) throw ConfigError("SCAD requires theta > 2");
        rho_ = 1.0 / (theta_ - 1.0);
        lip_ = lambda_;
        break;
    case PenaltyKind::Fractional:
        a_ = params_.at("a");
        rho_ = a_;
        lip_ = 1.0;
        break;
    case PenaltyKind::TukeyBiweight:
        rho_ = kTukeyRho;
        lip_ = max_slope(*this, 10.0);
        break;
    case PenaltyKind::CauchyLoss:
        xi_ = params_.at("xi");
        rho_ = kCauchyRho;
        lip_ = max_slope(*this, 10.0 * xi_);
        break;
    }
}

WeaklyConvexFunction WeaklyConvexFunction::zero() { return {PenaltyKind::Zero, {}}; }
WeaklyConvexFunction WeaklyConvexFunction::l1(double lambda) { return {PenaltyKind::L1, {{"lambda", lambda}}}; }
WeaklyConvexFunction WeaklyConvexFunction::mcp(double lambda, double theta) {
    return {PenaltyKind::MCP, {{"lambda", lambda}, {"theta", theta}}};
}
WeaklyConvexFunction WeaklyConvexFunction::scad(double lambda, double theta) {
    return {PenaltyKind::SCAD, {{"lambda", lambda}, {"theta", theta}}};
}
WeaklyConvexFunction WeaklyConvexFunction::fractional(double a) { return {PenaltyKind::Fractional, {{"a", a}}}; }
WeaklyConvexFunction WeaklyConvexFunction::tukey() { return {PenaltyKind::TukeyBiweight, {}}; }
WeaklyConvexFunction WeaklyConvexFunction::cauchy(double xi) { return {PenaltyKind::CauchyLoss, {{"xi", xi}}}; }

WeaklyConvexFunction WeaklyConvexFunction::make(PenaltyKind kind, const std::map<std::string, double>& params) {
    return {kind, params};
}

WeaklyConvexFunction WeaklyConvexFunction::with_shift(Vector b) const {
    if (!b.allFinite()) throw ConfigError("shift vector must be finite");
    WeaklyConvexFunction out = *this;
    out.shift_ = std::move(b);
    return out;
}

WeaklyConvexFunction WeaklyConvexFunction::with_rho(double rho) const {
    if (!std::isfinite(rho) || rho < rho_) {
        std::ostringstream os;
        os << "rho override " << rho << " is below the certified modulus " << rho_;
        throw ConfigError(os.str());
    }
    WeaklyConvexFunction out = *this;
    out.rho_ = rho;
    return out;
}

double WeaklyConvexFunction::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw UsageError("no parameter '" + name + "'");
    return it->second;
}

double WeaklyConvexFunction::lipschitz(Eigen::Index n) const { return std::sqrt(static_cast<double>(n)) * lip_; }

bool WeaklyConvexFunction::kinked_at_origin() const {
    switch (kind_) {
    case PenaltyKind::L1:
    case PenaltyKind::MCP:
    case PenaltyKind::SCAD:
    case PenaltyKind::Fractional:
        return true;
    default:
        return false;
    }
}

double WeaklyConvexFunction::scalar_value(double t) const {
    const double at = std::abs(t);
    switch (kind_) {
    case PenaltyKind::Zero:
        return 0.0;
    case PenaltyKind::L1:
        return lambda_ * at;
    case PenaltyKind::MCP:
        if (at <= theta_ * lambda_) return lambda_ * at - t * t / (2.0 * theta_);
        return theta_ * lambda_ * lambda_ / 2.0;
    case PenaltyKind::SCAD:
        if (at <= lambda_) return lambda_ * at;
        if (at <= theta_ * lambda_)
            return (-t * t + 2.0 * theta_ * lambda_ * at - lambda_ * lambda_) / (2.0 * (theta_ - 1.0));
        return (theta_ + 1.0) * lambda_ * lambda_ / 2.0;
    case PenaltyKind::Fractional:
        return at / (1.0 + a_ * at / 2.0);
    case PenaltyKind::TukeyBiweight:
        return t * t / (1.0 + t * t);
    case PenaltyKind::CauchyLoss:
        return xi_ * xi_ / 2.0 * std::log1p(t * t / (xi_ * xi_));
    }
    return 0.0;
}

double WeaklyConvexFunction::scalar_derivative(double t) const {
    const double at = std::abs(t);
    const double s = sign(t);
    switch (kind_) {
    case PenaltyKind::Zero:
        return 0.0;
    case PenaltyKind::L1:
        return s * lambda_;
    case PenaltyKind::MCP:
        return at <= theta_ * lambda_ ? s * (lambda_ - at / theta_) : 0.0;
    case PenaltyKind::SCAD:
        if (at <= lambda_) return s * lambda_;
        if (at <= theta_ * lambda_) return s * (theta_ * lambda_ - at) / (theta_ - 1.0);
        return 0.0;
    case PenaltyKind::Fractional: {
        const double d = 1.0 + a_ * at / 2.0;
        return s / (d * d);
    }
    case PenaltyKind::TukeyBiweight: {
        const double d = 1.0 + t * t;
        return 2.0 * t / (d * d);
    }
    case PenaltyKind::CauchyLoss:
        return xi_ * xi_ * t / (xi_ * xi_ + t * t);
    }
    return 0.0;
}

double WeaklyConvexFunction::scalar_second_derivative(double t) const {
    const double at = std::abs(t);
    switch (kind_) {
    case PenaltyKind::Zero:
    case PenaltyKind::L1:
        return 0.0;
    case PenaltyKind::MCP:
        return at <= theta_ * lambda_ ? -1.0 / theta_ : 0.0;
    case PenaltyKind::SCAD:
        return (at > lambda_ && at <= theta_ * lambda_) ? -1.0 / (theta_ - 1.0) : 0.0;
    case PenaltyKind::Fractional: {
        const double d = 1.0 + a_ * at / 2.0;
        return -a_ / (d * d * d);
    }
    case PenaltyKind::TukeyBiweight: {
        const double d = 1.0 + t * t;
        return (2.0 - 6.0 * t * t) / (d * d * d);
    }
    case PenaltyKind::CauchyLoss: {
        const double x2 = xi_ * xi_, d = x2 + t * t;
        return x2 * (x2 - t * t) / (d * d);
    }
    }
    return 0.0;
}

double WeaklyConvexFunction::scalar_slope_at_origin() const {
    switch (kind_) {
    case PenaltyKind::L1:
    case PenaltyKind::MCP:
    case PenaltyKind::SCAD:
        return lambda_;
    case PenaltyKind::Fractional:
        return 1.0;
    default:
        return 0.0;
    }
}

Interval WeaklyConvexFunction::scalar_subdifferential(double t) const {
    if (t == 0.0 && kinked_at_origin()) {
        const double s0 = scalar_slope_at_origin();
        return {-s0, s0};
    }
    const double d = scalar_derivative(t);
    return {d, d};
}

void WeaklyConvexFunction::check_smoothing(double mu) const {
    if (!(mu > 0.0) || !std::isfinite(mu) || !(mu * rho_ < 1.0)) {
        std::ostringstream os;
        os << "smoothing parameter mu = " << mu << " must lie in (0, 1/rho) with rho = " << rho_;
        throw InvalidSmoothingError(os.str());
    }
}

double WeaklyConvexFunction::scalar_prox(double mu, double t) const {
    switch (kind_) {
    case PenaltyKind::Zero:
        return t;
    case PenaltyKind::L1:
        return sign(t) * std::max(std::abs(t) - mu * lambda_, 0.0);
    case PenaltyKind::MCP: {
        // firm threshold
        const double at = std::abs(t);
        if (at < mu * lambda_) return 0.0;
        if (at <= theta_ * lambda_) return (t - lambda_ * mu * sign(t)) / (1.0 - mu / theta_);
        return t;
    }
    default:
        return numeric_prox(mu, t);
    }
}

// Solves u + mu*phi'(u) = |t| on [0, |t|] by Newton steps safeguarded with
// bisection. The residual is strictly increasing since 1 + mu*phi'' >= 1 - mu*rho > 0.
double WeaklyConvexFunction::numeric_prox(double mu, double t) const {
    const double target = std::abs(t);
    const double s = sign(t);
    if (target == 0.0) return 0.0;
    if (kinked_at_origin() && target <= mu * scalar_slope_at_origin()) return 0.0;

    auto residual = [&](double u) { return u + mu * scalar_derivative(u) - target; };
    const double scale = std::max(1.0, target);
    const double tol = kProxResidualTol * scale;

    double lo = 0.0, hi = target;
    double u = hi;
    double r = residual(u);
    if (r <= tol) return s * u;
    for (int it = 0; it < kProxMaxIter; ++it) {
        if (r > 0.0)
            hi = u;
        else
            lo = u;
        const double slope = 1.0 + mu * scalar_second_derivative(u);
        double next = slope > 0.0 ? u - r / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        u = next;
        r = residual(u);
        if (std::abs(r) <= tol) return s * u;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) return s * u;
    }
    std::ostringstream os;
    os << "prox root-finder for " << to_string(kind_) << " did not converge (t = " << t << ", mu = " << mu
       << ", residual = " << r << ")";
    throw NumericError(os.str());
}

double WeaklyConvexFunction::eval(const Vector& y) const {
    if (shift_ && shift_->size() != y.size()) throw UsageError("eval: dimension does not match shift vector");
    double total = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) total += scalar_value(y[i] - shift_at(i));
    return total;
}

Vector WeaklyConvexFunction::prox(double mu, const Vector& y) const {
    check_smoothing(mu);
    if (shift_ && shift_->size() != y.size()) throw UsageError("prox: dimension does not match shift vector");
    Vector out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double b = shift_at(i);
        out[i] = b + scalar_prox(mu, y[i] - b);
    }
    return out;
}

Vector WeaklyConvexFunction::subgradient_selection(const Vector& y) const {
    if (shift_ && shift_->size() != y.size())
        throw UsageError("subgradient_selection: dimension does not match shift vector");
    Vector out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double t = y[i] - shift_at(i);
        out[i] = t == 0.0 ? 0.0 : scalar_derivative(t);
    }
    return out;
}

bool operator==(const WeaklyConvexFunction& a, const WeaklyConvexFunction& b) {
    if (a.kind_ != b.kind_ || a.params_ != b.params_ || a.rho_ != b.rho_) return false;
    if (a.shift_.has_value() != b.shift_.has_value()) return false;
    return !a.shift_ || (a.shift_->size() == b.shift_->size() && *a.shift_ == *b.shift_);
}

} // namespace varsmooth
