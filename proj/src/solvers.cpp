#include "varsmooth/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace varsmooth {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Everything the smoothing methods need at one (x, mu) pair.
struct SmoothedState {
    Vector ax;
    Vector prox;
    Vector grad;
    double F_smoothed;
    double F_true;
    double grad_norm;
    double feasibility;
};

SmoothedState evaluate(const CompositeProblem& p, double mu, const Vector& x) {
    SmoothedState s;
    s.ax = p.A.apply(x);
    s.prox = p.g.prox(mu, s.ax);
    const Vector diff = s.ax - s.prox;
    const double hx = p.h.value(x);
    s.feasibility = diff.norm();
    s.F_smoothed = hx + p.g.eval(s.prox) + diff.squaredNorm() / (2.0 * mu);
    s.F_true = hx + p.g.eval(s.ax);
    s.grad = p.h.gradient(x) + p.A.adjoint_apply(diff / mu);
    s.grad_norm = s.grad.norm();
    return s;
}

bool finite(const TraceRecord& r) {
    return std::isfinite(r.F_smoothed) && std::isfinite(r.F_true) && std::isfinite(r.grad_norm) &&
           std::isfinite(r.F_smoothed_next);
}

[[noreturn]] void diverged(SolveTrace trace, long k) {
    std::ostringstream os;
    os << trace.algorithm << ": non-finite iterate at k = " << k;
    throw DivergenceError(os.str(), std::move(trace));
}

Certificate smoothing_certificate(const CompositeProblem& p, long j, double mu, const Vector& x,
                                  const SmoothedState& s) {
    Certificate c;
    c.witness = j;
    c.criticality = s.grad_norm;
    c.feasibility = s.feasibility;
    c.mu = mu;
    c.point = x;
    c.prox_point = s.prox;
    if (p.A.is_surjective()) {
        Vector xs = p.A.least_norm_correct(x, s.prox);
        c.witness_gap = (x - xs).norm();
        c.surjective_witness = std::move(xs);
    }
    return c;
}

void require_positive_rho(const CompositeProblem& p, const char* who) {
    if (!(p.g.rho() > 0.0))
        throw ConfigError(std::string(who) +
                          ": the smoothing schedule needs rho > 0; for convex g use g.with_rho(1e-3)");
}

} // namespace

std::string_view to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::Completed:
        return "completed";
    case SolveStatus::Converged:
        return "converged";
    case SolveStatus::BudgetExhausted:
        return "budget_exhausted";
    }
    return "unknown";
}

CompositeProblem::CompositeProblem(SmoothFunction h_, WeaklyConvexFunction g_, LinearOperator a_, double fstar)
    : h(std::move(h_)), g(std::move(g_)), A(std::move(a_)), fstar_lower(fstar) {
    if (h.dim() != A.cols()) {
        std::ostringstream os;
        os << "composite problem: smooth term has dimension " << h.dim() << " but the operator maps from R^"
           << A.cols();
        throw UsageError(os.str());
    }
    if (g.shift() && g.shift()->size() != A.rows()) throw UsageError("composite problem: shift does not match A");
    if (!std::isfinite(fstar_lower)) throw UsageError("composite problem: fstar_lower must be finite");
}

double CompositeProblem::objective(const Vector& x) const { return h.value(x) + g.eval(A.apply(x)); }

double CompositeProblem::smoothed_objective(double mu, const Vector& x) const {
    const Vector ax = A.apply(x);
    const Vector pr = g.prox(mu, ax);
    return h.value(x) + g.eval(pr) + (pr - ax).squaredNorm() / (2.0 * mu);
}

Vector smoothed_gradient(const CompositeProblem& p, double mu, const Vector& x) {
    const Vector ax = p.A.apply(x);
    return p.h.gradient(x) + p.A.adjoint_apply((ax - p.g.prox(mu, ax)) / mu);
}

StepSchedule StepSchedule::for_problem(const CompositeProblem& p) {
    const double na = p.A.norm_estimate();
    return {p.g.rho(), na * na, p.h.lip_grad()};
}

double StepSchedule::mu(long k) const { return 1.0 / (2.0 * rho * std::cbrt(static_cast<double>(k))); }

double StepSchedule::lipschitz(long k) const { return lip_grad_h + norm_A_sq / mu(k); }

SolveResult variable_smoothing(const CompositeProblem& p, const Vector& x1, long max_iter) {
    require_positive_rho(p, "variable_smoothing");
    if (x1.size() != p.dim() || !x1.allFinite()) throw UsageError("variable_smoothing: bad starting point");
    if (max_iter < 0) throw ConfigError("variable_smoothing: max_iter must be >= 0");

    const auto schedule = StepSchedule::for_problem(p);
    const auto start = Clock::now();
    SolveResult result;
    result.trace.algorithm = "variable_smoothing";

    Vector x = x1;
    if (max_iter == 0) {
        const double mu = schedule.mu(1);
        result.certificate = smoothing_certificate(p, 1, mu, x, evaluate(p, mu, x));
        result.x_final = x;
        result.status = SolveStatus::BudgetExhausted;
        return result;
    }

    double best = std::numeric_limits<double>::infinity();
    result.trace.records.reserve(static_cast<std::size_t>(max_iter));
    for (long k = 1; k <= max_iter; ++k) {
        const double mu = schedule.mu(k);
        const double gamma = schedule.gamma(k);
        const SmoothedState s = evaluate(p, mu, x);
        Vector next = x - gamma * s.grad;

        TraceRecord r;
        r.k = k;
        r.mu = mu;
        r.gamma = gamma;
        r.F_smoothed = s.F_smoothed;
        r.F_true = s.F_true;
        r.grad_norm = s.grad_norm;
        r.feasibility = s.feasibility;
        r.F_smoothed_next = p.smoothed_objective(mu, next);
        r.step_norm = gamma * s.grad_norm;
        r.time_ms = elapsed_ms(start);
        result.trace.records.push_back(r);
        if (!finite(r) || !next.allFinite()) diverged(std::move(result.trace), k);

        if (s.grad_norm < best) {
            best = s.grad_norm;
            result.certificate = smoothing_certificate(p, k, mu, x, s);
        }
        x = std::move(next);
    }
    result.x_final = std::move(x);
    result.status = SolveStatus::Completed;
    return result;
}

SolveResult variable_smoothing_epochs(const CompositeProblem& p, const Vector& x1, double epsilon, int max_epochs,
                                      EpochStop stop) {
    require_positive_rho(p, "variable_smoothing_epochs");
    if (x1.size() != p.dim() || !x1.allFinite()) throw UsageError("variable_smoothing_epochs: bad starting point");
    if (!(epsilon > 0.0)) throw ConfigError("variable_smoothing_epochs: epsilon must be positive");
    if (max_epochs < 0 || max_epochs > 62) throw ConfigError("variable_smoothing_epochs: max_epochs out of range");
    if (stop == EpochStop::SurjectiveWitness && !p.A.is_surjective())
        throw UnsupportedOperatorError("variable_smoothing_epochs: witness stopping rule needs a surjective A");

    const auto schedule = StepSchedule::for_problem(p);
    const auto start = Clock::now();
    SolveResult result;
    result.trace.algorithm = "epochs";

    Vector x = x1;
    SmoothedState state = evaluate(p, schedule.mu(1), x);
    result.certificate = smoothing_certificate(p, 1, schedule.mu(1), x, state);
    double best_score = std::numeric_limits<double>::infinity();

    for (int l = 0; l < max_epochs; ++l) {
        double epoch_best = std::numeric_limits<double>::infinity();
        const long first = 1L << l;
        const long last = (1L << (l + 1)) - 1;
        for (long k = first; k <= last; ++k) {
            const double mu = schedule.mu(k);
            const double gamma = schedule.gamma(k);
            Vector next = x - gamma * state.grad;

            TraceRecord r;
            r.k = k;
            r.mu = mu;
            r.gamma = gamma;
            r.F_smoothed = state.F_smoothed;
            r.F_true = state.F_true;
            r.grad_norm = state.grad_norm;
            r.feasibility = state.feasibility;
            r.F_smoothed_next = p.smoothed_objective(mu, next);
            r.step_norm = gamma * state.grad_norm;
            r.time_ms = elapsed_ms(start);
            result.trace.records.push_back(r);
            if (!finite(r) || !next.allFinite()) diverged(std::move(result.trace), k);

            const double mu_next = schedule.mu(k + 1);
            SmoothedState next_state = evaluate(p, mu_next, next);
            if (next_state.grad_norm <= epoch_best) {
                epoch_best = next_state.grad_norm;
                Certificate cert = smoothing_certificate(p, k + 1, mu_next, next, next_state);
                const double measure =
                    stop == EpochStop::Feasibility ? next_state.feasibility : cert.witness_gap.value();
                const double score = std::max(epoch_best, measure);
                if (epoch_best <= epsilon && measure <= epsilon) {
                    result.certificate = std::move(cert);
                    result.x_final = std::move(next);
                    result.status = SolveStatus::Converged;
                    return result;
                }
                if (score < best_score) {
                    best_score = score;
                    result.certificate = std::move(cert);
                }
            }
            x = std::move(next);
            state = std::move(next_state);
        }
    }
    result.x_final = std::move(x);
    result.status = SolveStatus::BudgetExhausted;
    return result;
}

double max_prox_gradient_step(const SmoothFunction& h, const WeaklyConvexFunction& g) {
    const double inf = std::numeric_limits<double>::infinity();
    const double from_rho = g.rho() > 0.0 ? 0.5 / g.rho() : inf;
    const double from_h = h.lip_grad() > 0.0 ? 1.0 / h.lip_grad() : inf;
    return std::min(from_rho, from_h);
}

SolveResult proximal_gradient(const SmoothFunction& h, const WeaklyConvexFunction& g, const Vector& x1,
                              double lambda, long max_iter) {
    const double cap = max_prox_gradient_step(h, g);
    if (!(lambda > 0.0) || !std::isfinite(lambda) || lambda > cap * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "proximal_gradient: step " << lambda << " outside (0, " << cap << "]";
        throw ConfigError(os.str());
    }
    if (x1.size() != h.dim() || !x1.allFinite()) throw UsageError("proximal_gradient: bad starting point");
    if (g.shift() && g.shift()->size() != h.dim()) throw UsageError("proximal_gradient: shift does not match h");
    if (max_iter < 0) throw ConfigError("proximal_gradient: max_iter must be >= 0");

    const auto start = Clock::now();
    SolveResult result;
    result.trace.algorithm = "prox_grad";

    Vector x = x1;
    Vector grad = h.gradient(x);
    double F = h.value(x) + g.eval(x);
    result.certificate.witness = 1;
    result.certificate.point = x;
    result.certificate.prox_point = x;
    result.certificate.mu = lambda;
    result.certificate.criticality = std::numeric_limits<double>::infinity();

    double best = std::numeric_limits<double>::infinity();
    for (long k = 1; k <= max_iter; ++k) {
        Vector next = g.prox(lambda, x - lambda * grad);
        Vector grad_next = h.gradient(next);
        const Vector w = (x - next) / lambda + grad_next - grad;
        const double F_next = h.value(next) + g.eval(next);

        TraceRecord r;
        r.k = k;
        r.mu = lambda;
        r.gamma = lambda;
        r.F_smoothed = F;
        r.F_true = F;
        r.grad_norm = w.norm();
        r.feasibility = 0.0;
        r.F_smoothed_next = F_next;
        r.step_norm = (x - next).norm();
        r.time_ms = elapsed_ms(start);
        result.trace.records.push_back(r);
        if (!finite(r) || !next.allFinite()) diverged(std::move(result.trace), k);

        if (r.grad_norm < best) {
            best = r.grad_norm;
            result.certificate.witness = k + 1;
            result.certificate.criticality = r.grad_norm;
            result.certificate.point = next;
            result.certificate.prox_point = next;
        }
        x = std::move(next);
        grad = std::move(grad_next);
        F = F_next;
    }
    result.x_final = std::move(x);
    result.status = max_iter == 0 ? SolveStatus::BudgetExhausted : SolveStatus::Completed;
    return result;
}

SolveResult subgradient_method(const CompositeProblem& p, const Vector& x1, double c, long max_iter) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("subgradient_method: c must be positive");
    if (x1.size() != p.dim() || !x1.allFinite()) throw UsageError("subgradient_method: bad starting point");
    if (max_iter < 0) throw ConfigError("subgradient_method: max_iter must be >= 0");

    const auto start = Clock::now();
    SolveResult result;
    result.trace.algorithm = "subgradient";

    Vector x = x1;
    double F = p.objective(x);
    result.certificate.witness = 1;
    result.certificate.point = x;
    result.certificate.prox_point = p.A.apply(x);
    result.certificate.criticality = std::numeric_limits<double>::infinity();

    double best = std::numeric_limits<double>::infinity();
    for (long k = 1; k <= max_iter; ++k) {
        const Vector ax = p.A.apply(x);
        const Vector direction = p.h.gradient(x) + p.A.adjoint_apply(p.g.subgradient_selection(ax));
        const double step = c / std::sqrt(static_cast<double>(k));
        Vector next = x - step * direction;
        const double F_next = p.objective(next);

        TraceRecord r;
        r.k = k;
        r.mu = 0.0;
        r.gamma = step;
        r.F_smoothed = F;
        r.F_true = F;
        r.step_norm = (x - next).norm();
        r.grad_norm = r.step_norm / step;
        r.feasibility = 0.0;
        r.F_smoothed_next = F_next;
        r.time_ms = elapsed_ms(start);
        result.trace.records.push_back(r);
        if (!finite(r) || !next.allFinite()) diverged(std::move(result.trace), k);

        if (r.grad_norm < best) {
            best = r.grad_norm;
            result.certificate.witness = k;
            result.certificate.criticality = r.grad_norm;
            result.certificate.point = x;
            result.certificate.prox_point = ax;
        }
        x = std::move(next);
        F = F_next;
    }
    result.x_final = std::move(x);
    result.status = max_iter == 0 ? SolveStatus::BudgetExhausted : SolveStatus::Completed;
    return result;
}

Vector surjective_witness(const CompositeProblem& p, const Vector& x, double mu) {
    if (!p.A.is_surjective())
        throw UnsupportedOperatorError("surjective_witness: operator is not surjective");
    return p.A.least_norm_correct(x, p.g.prox(mu, p.A.apply(x)));
}

} // namespace varsmooth
