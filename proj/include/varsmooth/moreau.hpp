#pragma once

#include "varsmooth/regularizers.hpp"

#include <functional>

namespace varsmooth {

/// Moreau envelope g_mu(y) = min_z { g(z) + |z - y|^2 / (2 mu) } of a weakly
/// convex function, evaluated through its proximal operator.
///
/// Holds a reference to the function; the function must outlive the envelope.
/// Construction rejects mu outside (0, 1/rho).
class MoreauEnvelope {
public:
    MoreauEnvelope(const WeaklyConvexFunction& f, double mu);

    const WeaklyConvexFunction& function() const { return f_.get(); }
    double mu() const { return mu_; }

    Vector prox(const Vector& y) const { return f_.get().prox(mu_, y); }

    /// g(p) + |p - y|^2 / (2 mu) with p = prox(y).
    double value(const Vector& y) const;
    /// (y - prox(y)) / mu.
    Vector gradient(const Vector& y) const;
    /// Lipschitz constant of the gradient: max{1/mu, rho / (1 - rho mu)}.
    double lipschitz() const;

private:
    std::reference_wrapper<const WeaklyConvexFunction> f_;
    double mu_;
};

/// Both sides of the envelope comparison inequality between two smoothing
/// levels mu2 <= mu1 of the same function:
///
///   g_{mu2}(y) <= g_{mu1}(y) + (mu1 - mu2) / (2 mu2) * mu1 * |grad g_{mu1}(y)|^2
///              <= g_{mu1}(y) + (mu1 - mu2) / (2 mu2) * mu1 * L_g^2.
struct EnvelopeComparison {
    double lhs;             ///< g_{mu2}(y)
    double bound;           ///< gradient form of the right-hand side
    double lipschitz_bound; ///< L_g^2 form; +inf when g is not Lipschitz
};

/// Throws UsageError when the envelopes wrap different functions or when
/// the smaller parameter belongs to e1.
EnvelopeComparison envelope_compare(const MoreauEnvelope& e1, const MoreauEnvelope& e2, const Vector& y);

} // namespace varsmooth
