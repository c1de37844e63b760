#pragma once

#include "varsmooth/errors.hpp"
#include "varsmooth/linops.hpp"
#include "varsmooth/regularizers.hpp"
#include "varsmooth/smooth.hpp"

#include <optional>
#include <string>
#include <vector>

namespace varsmooth {

/// F(x) = h(x) + g(A x), together with a lower bound on its infimum.
struct CompositeProblem {
    CompositeProblem(SmoothFunction h, WeaklyConvexFunction g, LinearOperator a, double fstar_lower = 0.0);

    SmoothFunction h;
    WeaklyConvexFunction g;
    LinearOperator A;
    double fstar_lower;

    Eigen::Index dim() const { return A.cols(); }
    /// L_g of y -> g(y) on R^n.
    double lipschitz_g() const { return g.lipschitz(A.rows()); }

    /// True objective h(x) + g(Ax).
    double objective(const Vector& x) const;
    /// F_mu(x) = h(x) + g_mu(Ax).
    double smoothed_objective(double mu, const Vector& x) const;
};

/// grad F_mu(x) = grad h(x) + A^T (Ax - prox_{mu g}(Ax)) / mu.
Vector smoothed_gradient(const CompositeProblem& p, double mu, const Vector& x);

/// The smoothing schedule shared by both variable smoothing variants:
/// mu_k = (2 rho)^{-1} k^{-1/3}, L_k = L_h + |A|^2 / mu_k, gamma_k = 1 / L_k.
struct StepSchedule {
    double rho;
    double norm_A_sq;
    double lip_grad_h;

    static StepSchedule for_problem(const CompositeProblem& p);

    double mu(long k) const;
    double lipschitz(long k) const;
    double gamma(long k) const { return 1.0 / lipschitz(k); }
};

/// One row of a solver trace. The first eight fields are serialized; the
/// last two are kept for in-process checks.
///
/// Smoothing methods: quantities are evaluated at x_k with mu_k.
/// Proximal gradient: mu = gamma = lambda, grad_norm = |w_{k+1}|.
/// Subgradient: mu = 0, gamma = c / sqrt(k), grad_norm = |x_k - x_{k+1}| / gamma.
struct TraceRecord {
    long k = 0;
    double mu = 0.0;
    double gamma = 0.0;
    double F_smoothed = 0.0;
    double F_true = 0.0;
    double grad_norm = 0.0;
    double feasibility = 0.0;
    double time_ms = 0.0;

    /// Smoothed objective F_k(x_{k+1}) (true objective for non-smoothing methods).
    double F_smoothed_next = 0.0;
    /// |x_k - x_{k+1}|
    double step_norm = 0.0;
};

struct SolveTrace {
    std::string algorithm;
    std::vector<TraceRecord> records;
};

/// Stationarity evidence at a single iterate x_j.
///
/// criticality upper-bounds dist(-grad h(x_j), A^T dg(z_j)) with
/// z_j = prox_{mu_j g}(A x_j); feasibility is |A x_j - z_j|.
struct Certificate {
    long witness = 0;
    double criticality = 0.0;
    double feasibility = 0.0;
    double mu = 0.0;
    Vector point;
    Vector prox_point;
    /// Least-norm correction x*_j with A x*_j = z_j, when A is surjective.
    std::optional<Vector> surjective_witness;
    std::optional<double> witness_gap;
};

enum class SolveStatus { Completed, Converged, BudgetExhausted };

std::string_view to_string(SolveStatus status);

struct SolveResult {
    SolveTrace trace;
    Certificate certificate;
    Vector x_final;
    SolveStatus status = SolveStatus::Completed;
};

/// Non-finite iterate; carries the trace recorded before the failure.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, SolveTrace trace) : Error(what), trace_(std::move(trace)) {}
    const SolveTrace& trace() const { return trace_; }

private:
    SolveTrace trace_;
};

/// Gradient descent on F_k = h + g_{mu_k} o A for max_iter iterations.
/// Requires rho > 0; for convex g pass g.with_rho(small positive value).
/// The certificate is taken at the first iterate with the smallest
/// |grad F_k(x_k)|. max_iter = 0 yields a certificate at x1 and
/// status BudgetExhausted.
SolveResult variable_smoothing(const CompositeProblem& p, const Vector& x1, long max_iter);

enum class EpochStop {
    /// |A x_{k+1} - prox(A x_{k+1})| <= epsilon
    Feasibility,
    /// |x_{k+1} - x*_{k+1}| <= epsilon, A surjective
    SurjectiveWitness,
};

/// Variable smoothing organized into epochs k = 2^l .. 2^{l+1} - 1. Stops as
/// soon as an epoch-best gradient norm and the stopping measure at that
/// iterate are both <= epsilon (status Converged). Otherwise returns
/// BudgetExhausted with the best certificate seen.
SolveResult variable_smoothing_epochs(const CompositeProblem& p, const Vector& x1, double epsilon, int max_epochs,
                                      EpochStop stop = EpochStop::Feasibility);

/// Largest admissible proximal gradient step min{1/(2 rho), 1/L_h}.
double max_prox_gradient_step(const SmoothFunction& h, const WeaklyConvexFunction& g);

/// x_{k+1} = prox_{lambda g}(x_k - lambda grad h(x_k)) for min h + g.
SolveResult proximal_gradient(const SmoothFunction& h, const WeaklyConvexFunction& g, const Vector& x1,
                              double lambda, long max_iter);

/// x_{k+1} = x_k - (c / sqrt(k)) (grad h(x_k) + A^T v_k), v_k in dg(A x_k).
SolveResult subgradient_method(const CompositeProblem& p, const Vector& x1, double c, long max_iter);

/// x - A^+(Ax - prox_{mu g}(Ax)). Throws UnsupportedOperatorError for
/// non-surjective A.
Vector surjective_witness(const CompositeProblem& p, const Vector& x, double mu);

} // namespace varsmooth
