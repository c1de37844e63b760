#include "doctest.h"
#include "oracles.hpp"

#include "varsmooth/errors.hpp"
#include "varsmooth/regularizers.hpp"

#include <random>
#include <vector>

using namespace varsmooth;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

// Reference scalar penalty for each kind, written independently.
std::function<double(double)> reference_phi(const WeaklyConvexFunction& f) {
    switch (f.kind()) {
    case PenaltyKind::Zero:
        return [](double) { return 0.0; };
    case PenaltyKind::L1:
        return [l = f.param("lambda")](double t) { return l * std::abs(t); };
    case PenaltyKind::MCP:
        return [l = f.param("lambda"), th = f.param("theta")](double t) { return oracle::mcp(t, l, th); };
    case PenaltyKind::SCAD:
        return [l = f.param("lambda"), th = f.param("theta")](double t) { return oracle::scad(t, l, th); };
    case PenaltyKind::Fractional:
        return [a = f.param("a")](double t) { return oracle::fractional(t, a); };
    case PenaltyKind::TukeyBiweight:
        return [](double t) { return oracle::tukey(t); };
    case PenaltyKind::CauchyLoss:
        return [xi = f.param("xi")](double t) { return oracle::cauchy(t, xi); };
    }
    return {};
}

std::vector<WeaklyConvexFunction> zoo() {
    return {WeaklyConvexFunction::zero(),        WeaklyConvexFunction::l1(0.7),
            WeaklyConvexFunction::mcp(1.0, 2.0),  WeaklyConvexFunction::mcp(0.3, 5.0),
            WeaklyConvexFunction::scad(1.0, 3.0), WeaklyConvexFunction::scad(0.5, 3.7),
            WeaklyConvexFunction::fractional(1.5), WeaklyConvexFunction::tukey(),
            WeaklyConvexFunction::cauchy(1.0),    WeaklyConvexFunction::cauchy(0.4)};
}

} // namespace

TEST_SUITE("regularizers") {

TEST_CASE("eval examples") {
    CHECK(WeaklyConvexFunction::mcp(1, 2).eval(vec({0.0})) == 0.0);
    CHECK(WeaklyConvexFunction::mcp(1, 2).eval(vec({3.0})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(WeaklyConvexFunction::scad(1, 3).eval(vec({2.0})) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(WeaklyConvexFunction::tukey().eval(vec({1.0})) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("eval matches reference penalties and sums coordinates") {
    std::mt19937_64 rng(11);
    for (const auto& f : zoo()) {
        const auto phi = reference_phi(f);
        const Vector y = oracle::random_vector(rng, 6, 3.0);
        double expect = 0.0;
        for (double t : y) expect += phi(t);
        CHECK(f.eval(y) == doctest::Approx(expect).epsilon(1e-13));
        CHECK(f.eval(y) >= 0.0);
    }
}

TEST_CASE("shifted eval and prox") {
    const auto f = WeaklyConvexFunction::mcp(1, 2).with_shift(vec({1.0, -2.0}));
    CHECK(f.eval(vec({1.0, -2.0})) == 0.0);
    CHECK(f.eval(vec({4.0, -2.0})) == doctest::Approx(1.0));
    const Vector p = f.prox(0.5, vec({2.0, -2.3}));
    CHECK(p[0] == doctest::Approx(1.0 + 2.0 / 3.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(-2.0));
}

TEST_CASE("SCAD is continuous at its branch points") {
    const auto f = WeaklyConvexFunction::scad(0.8, 3.5);
    for (double b : {0.8, 0.8 * 3.5}) {
        CHECK(f.scalar_value(b - 1e-12) == doctest::Approx(f.scalar_value(b + 1e-12)).epsilon(1e-10));
    }
}

TEST_CASE("MCP firm threshold examples") {
    const auto f = WeaklyConvexFunction::mcp(1, 2);
    CHECK(f.prox(0.5, vec({0.3}))[0] == 0.0);
    CHECK(f.prox(0.5, vec({1.0}))[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(f.prox(0.5, vec({5.0}))[0] == 5.0);
    const double brute =
        oracle::prox_by_search([](double t) { return oracle::mcp(t, 1, 2); }, 0.5, 1.0, 1.0);
    CHECK(brute == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("MCP prox is exactly the identity beyond theta * lambda") {
    const auto f = WeaklyConvexFunction::mcp(0.4, 3.0);
    for (double y : {1.2000001, 2.0, -7.5, 1e6}) CHECK(f.prox(0.9, vec({y}))[0] == y);
}

TEST_CASE("zero function prox is the identity") {
    const auto f = WeaklyConvexFunction::zero();
    const Vector y = vec({-3.0, 0.0, 2.5});
    CHECK(f.prox(1e-8, y) == y);
    CHECK(f.prox(10.0, y) == y);
}

TEST_CASE("prox matches golden-section search on the scalar subproblem") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& f : zoo()) {
        const auto phi = reference_phi(f);
        const double mu_cap = f.rho() > 0 ? 0.9 / f.rho() : 2.0;
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double y = (unit(rng) - 0.5) * 12.0;
            const double mu = mu_cap * std::max(unit(rng), 1e-3);
            const double got = f.scalar_prox(mu, y);
            worst = std::max(worst, std::abs(got - oracle::prox_by_search(phi, mu, y, f.lipschitz())));
        }
        INFO(to_string(f.kind()));
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("stored rho certifies weak convexity on a grid") {
    for (const auto& f : zoo()) {
        const auto phi = reference_phi(f);
        const double h = 1e-3;
        double worst = 0.0;
        for (double t = -15.0; t <= 15.0; t += 0.0137) {
            auto q = [&](double s) { return phi(s) + 0.5 * f.rho() * s * s; };
            worst = std::min(worst, q(t + h) - 2 * q(t) + q(t - h));
        }
        INFO(to_string(f.kind()));
        CHECK(worst >= -1e-9);
    }
}

TEST_CASE("stored rho is tight for MCP and SCAD, loose for the robust losses") {
    // Minimum of phi'' sampled off the kinks.
    auto min_curv = [](const WeaklyConvexFunction& f) {
        double m = 0.0;
        for (double t = 1e-3; t < 20.0; t += 1e-3) m = std::min(m, f.scalar_second_derivative(t));
        return -m;
    };
    CHECK(min_curv(WeaklyConvexFunction::mcp(1, 2)) == doctest::Approx(0.5));
    CHECK(min_curv(WeaklyConvexFunction::scad(1, 3)) == doctest::Approx(0.5));
    CHECK(min_curv(WeaklyConvexFunction::tukey()) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(min_curv(WeaklyConvexFunction::cauchy(0.5)) == doctest::Approx(0.125).epsilon(1e-4));
    CHECK(WeaklyConvexFunction::tukey().rho() == 6.0);
    CHECK(WeaklyConvexFunction::cauchy(0.5).rho() == 6.0);
}

TEST_CASE("Lipschitz certificate holds on sampled pairs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (const auto& f : zoo()) {
        REQUIRE(f.is_lipschitz());
        double worst = 0.0;
        for (int i = 0; i < 5000; ++i) {
            const double s = u(rng), t = u(rng);
            if (s == t) continue;
            worst = std::max(worst, std::abs(f.scalar_value(s) - f.scalar_value(t)) / std::abs(s - t));
        }
        CHECK(worst <= f.lipschitz() * (1 + 1e-12));
    }
    CHECK(WeaklyConvexFunction::tukey().lipschitz() == doctest::Approx(9.0 / (8.0 * std::sqrt(3.0))).epsilon(1e-10));
    CHECK(WeaklyConvexFunction::cauchy(0.4).lipschitz() == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(WeaklyConvexFunction::mcp(1, 2).lipschitz(4) == doctest::Approx(2.0));
}

TEST_CASE("prox displacement is bounded by mu * L_g") {
    std::mt19937_64 rng(8);
    for (const auto& f : zoo()) {
        const double mu = f.rho() > 0 ? 0.5 / f.rho() : 0.8;
        const Vector y = oracle::random_vector(rng, 20, 4.0);
        const Vector p = f.prox(mu, y);
        CHECK((y - p).cwiseAbs().maxCoeff() <= mu * f.lipschitz() * (1 + 1e-12) + 1e-15);
    }
}

TEST_CASE("subgradient selection examples") {
    CHECK(WeaklyConvexFunction::l1(1).subgradient_selection(vec({2.0}))[0] == 1.0);
    CHECK(WeaklyConvexFunction::l1(1).subgradient_selection(vec({0.0}))[0] == 0.0);
    CHECK(WeaklyConvexFunction::mcp(1, 2).subgradient_selection(vec({1.0}))[0] == doctest::Approx(0.5));
    CHECK(WeaklyConvexFunction::mcp(1, 2).subgradient_selection(vec({-3.0}))[0] == 0.0);
}

TEST_CASE("subgradient selection lies in the subdifferential") {
    std::mt19937_64 rng(9);
    for (const auto& f : zoo()) {
        Vector y = oracle::random_vector(rng, 30, 4.0);
        y[0] = 0.0;
        const Vector s = f.subgradient_selection(y);
        for (Eigen::Index i = 0; i < y.size(); ++i) CHECK(f.scalar_subdifferential(y[i]).contains(s[i], 1e-12));
    }
}

TEST_CASE("derivative matches finite differences away from kinks") {
    for (const auto& f : zoo()) {
        const auto phi = reference_phi(f);
        for (double t : {-4.1, -0.37, 0.21, 0.9, 2.6, 8.3}) {
            const double h = 1e-6;
            const double fd = (phi(t + h) - phi(t - h)) / (2 * h);
            CHECK(f.scalar_derivative(t) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(WeaklyConvexFunction::scad(1, 2), ConfigError);
    CHECK_THROWS_AS(WeaklyConvexFunction::mcp(0, 2), ConfigError);
    CHECK_THROWS_AS(WeaklyConvexFunction::mcp(1, -1), ConfigError);
    CHECK_THROWS_AS(WeaklyConvexFunction::fractional(0), ConfigError);
    CHECK_THROWS_AS(WeaklyConvexFunction::make(PenaltyKind::MCP, {{"lambda", 1}}), ConfigError);
    CHECK_THROWS_AS(WeaklyConvexFunction::make(PenaltyKind::L1, {{"lambda", 1}, {"theta", 2}}), ConfigError);
    CHECK_THROWS_AS(WeaklyConvexFunction::mcp(1, 2).with_rho(0.1), ConfigError);
    CHECK(WeaklyConvexFunction::mcp(1, 2).with_rho(3.0).rho() == 3.0);
}

TEST_CASE("unknown names list the valid set") {
    try {
        penalty_kind_from_string("huber");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        for (const char* name : {"zero", "l1", "mcp", "scad", "fractional", "tukey", "cauchy"})
            CHECK(msg.find(name) != std::string::npos);
    }
    CHECK(penalty_kind_from_string("scad") == PenaltyKind::SCAD);
}

TEST_CASE("prox rejects mu outside (0, 1/rho)") {
    const auto f = WeaklyConvexFunction::mcp(1, 2);
    CHECK_THROWS_AS(f.prox(2.0, vec({1.0})), InvalidSmoothingError);
    CHECK_THROWS_AS(f.prox(0.0, vec({1.0})), InvalidSmoothingError);
    CHECK_THROWS_AS(f.prox(-1.0, vec({1.0})), InvalidSmoothingError);
    CHECK_NOTHROW(f.prox(1.999, vec({1.0})));
}

} // TEST_SUITE
