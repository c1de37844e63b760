#include "varsmooth/moreau.hpp"

#include "varsmooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varsmooth {

MoreauEnvelope::MoreauEnvelope(const WeaklyConvexFunction& f, double mu) : f_(f), mu_(mu) { f.check_smoothing(mu); }

double MoreauEnvelope::value(const Vector& y) const {
    const Vector p = prox(y);
    return f_.get().eval(p) + (p - y).squaredNorm() / (2.0 * mu_);
}

Vector MoreauEnvelope::gradient(const Vector& y) const { return (y - prox(y)) / mu_; }

double MoreauEnvelope::lipschitz() const {
    const double rho = f_.get().rho();
    return std::max(1.0 / mu_, rho / (1.0 - rho * mu_));
}

EnvelopeComparison envelope_compare(const MoreauEnvelope& e1, const MoreauEnvelope& e2, const Vector& y) {
    if (!(e1.function() == e2.function())) throw UsageError("envelope_compare: envelopes wrap different functions");
    const double mu1 = e1.mu(), mu2 = e2.mu();
    if (mu2 > mu1) throw UsageError("envelope_compare: requires mu2 <= mu1");

    const double factor = 0.5 * (mu1 - mu2) / mu2 * mu1;
    const Vector p1 = e1.prox(y);
    const double g1 = e1.function().eval(p1) + (p1 - y).squaredNorm() / (2.0 * mu1);
    const double grad_sq = (y - p1).squaredNorm() / (mu1 * mu1);

    EnvelopeComparison out{};
    out.lhs = e2.value(y);
    out.bound = g1 + factor * grad_sq;
    if (e1.function().is_lipschitz()) {
        const double lg = e1.function().lipschitz(y.size());
        out.lipschitz_bound = g1 + factor * lg * lg;
    } else {
        out.lipschitz_bound = std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace varsmooth
