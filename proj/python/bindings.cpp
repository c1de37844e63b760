#include "varsmooth/harness.hpp"
#include "varsmooth/moreau.hpp"
#include "varsmooth/solvers.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace varsmooth;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

ImageBuffer to_image(const Eigen::Ref<const RowMatrix>& a) {
    const RowMatrix copy = a;
    return ImageBuffer(copy.rows(), copy.cols(), Eigen::Map<const Vector>(copy.data(), copy.size()));
}

RowMatrix from_image(const ImageBuffer& img) {
    return Eigen::Map<const RowMatrix>(img.pixels.data(), img.height, img.width);
}

// Trace as a dict of equal-length columns.
py::dict trace_columns(const SolveTrace& t) {
    const auto n = static_cast<Eigen::Index>(t.records.size());
    Eigen::VectorXi k(n);
    Vector mu(n), gamma(n), fs(n), ft(n), grad(n), feas(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = t.records[static_cast<std::size_t>(i)];
        k[i] = static_cast<int>(r.k);
        mu[i] = r.mu;
        gamma[i] = r.gamma;
        fs[i] = r.F_smoothed;
        ft[i] = r.F_true;
        grad[i] = r.grad_norm;
        feas[i] = r.feasibility;
    }
    py::dict d;
    d["algorithm"] = t.algorithm;
    d["k"] = k;
    d["mu"] = mu;
    d["gamma"] = gamma;
    d["F_smoothed"] = fs;
    d["F_true"] = ft;
    d["grad_norm"] = grad;
    d["feasibility"] = feas;
    return d;
}

} // namespace

PYBIND11_MODULE(_varsmooth, m) {
    m.doc() = "Variable smoothing for weakly convex composite problems";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<UsageError>(m, "UsageError", error.ptr());
    py::register_exception<InvalidSmoothingError>(m, "InvalidSmoothingError", error.ptr());
    py::register_exception<UnsupportedOperatorError>(m, "UnsupportedOperatorError", error.ptr());
    py::register_exception<NumericError>(m, "NumericError", error.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", error.ptr());

    py::class_<WeaklyConvexFunction>(m, "WeaklyConvexFunction")
        .def_static("zero", &WeaklyConvexFunction::zero)
        .def_static("l1", &WeaklyConvexFunction::l1, py::arg("lam"))
        .def_static("mcp", &WeaklyConvexFunction::mcp, py::arg("lam"), py::arg("theta"))
        .def_static("scad", &WeaklyConvexFunction::scad, py::arg("lam"), py::arg("theta"))
        .def_static("fractional", &WeaklyConvexFunction::fractional, py::arg("a"))
        .def_static("tukey", &WeaklyConvexFunction::tukey)
        .def_static("cauchy", &WeaklyConvexFunction::cauchy, py::arg("xi"))
        .def_static(
            "make",
            [](const std::string& kind, const std::map<std::string, double>& params) {
                return WeaklyConvexFunction::make(penalty_kind_from_string(kind), params);
            },
            py::arg("kind"), py::arg("params") = std::map<std::string, double>{})
        .def("with_shift", &WeaklyConvexFunction::with_shift, py::arg("b"))
        .def("with_rho", &WeaklyConvexFunction::with_rho, py::arg("rho"))
        .def_property_readonly("kind", [](const WeaklyConvexFunction& f) { return std::string(to_string(f.kind())); })
        .def_property_readonly("params", &WeaklyConvexFunction::params)
        .def_property_readonly("rho", &WeaklyConvexFunction::rho)
        .def("lipschitz", [](const WeaklyConvexFunction& f, Eigen::Index n) { return f.lipschitz(n); },
             py::arg("n") = 1)
        .def("eval", &WeaklyConvexFunction::eval, py::arg("y"))
        .def("prox", &WeaklyConvexFunction::prox, py::arg("mu"), py::arg("y"))
        .def("subgradient", &WeaklyConvexFunction::subgradient_selection, py::arg("y"))
        .def("__eq__", [](const WeaklyConvexFunction& a, const WeaklyConvexFunction& b) { return a == b; });

    py::class_<MoreauEnvelope>(m, "MoreauEnvelope")
        .def(py::init<const WeaklyConvexFunction&, double>(), py::arg("f"), py::arg("mu"), py::keep_alive<1, 2>())
        .def_property_readonly("mu", &MoreauEnvelope::mu)
        .def("prox", &MoreauEnvelope::prox, py::arg("y"))
        .def("value", &MoreauEnvelope::value, py::arg("y"))
        .def("gradient", &MoreauEnvelope::gradient, py::arg("y"))
        .def("lipschitz", &MoreauEnvelope::lipschitz);

    m.def(
        "envelope_compare",
        [](const MoreauEnvelope& e1, const MoreauEnvelope& e2, const Vector& y) {
            const auto r = envelope_compare(e1, e2, y);
            return py::make_tuple(r.lhs, r.bound, r.lipschitz_bound);
        },
        py::arg("e1"), py::arg("e2"), py::arg("y"), "Returns (lhs, bound, lipschitz_bound).");

    py::class_<LinearOperator>(m, "LinearOperator")
        .def_static("identity", &LinearOperator::identity, py::arg("dim"))
        .def_static("dense", &LinearOperator::dense, py::arg("matrix"))
        .def_static("grad2d", &LinearOperator::grad2d, py::arg("height"), py::arg("width"))
        .def_static("scaled", &LinearOperator::scaled, py::arg("factor"), py::arg("inner"))
        .def_property_readonly("shape", [](const LinearOperator& a) { return py::make_tuple(a.rows(), a.cols()); })
        .def("apply", &LinearOperator::apply, py::arg("x"))
        .def("adjoint_apply", &LinearOperator::adjoint_apply, py::arg("y"))
        .def("norm_estimate", &LinearOperator::norm_estimate)
        .def("is_surjective", &LinearOperator::is_surjective)
        .def("sigma_min", &LinearOperator::sigma_min)
        .def("least_norm_correct", &LinearOperator::least_norm_correct, py::arg("x"), py::arg("z"));

    py::class_<SmoothFunction>(m, "SmoothFunction")
        .def_static("zero", &SmoothFunction::zero, py::arg("dim"))
        .def_static("quadratic", &SmoothFunction::quadratic, py::arg("q"), py::arg("c"))
        .def_static("least_squares", &SmoothFunction::least_squares, py::arg("op"), py::arg("b"))
        .def_static("scaled_norm_sq", &SmoothFunction::scaled_norm_sq, py::arg("weight"), py::arg("dim"))
        .def_property_readonly("dim", &SmoothFunction::dim)
        .def_property_readonly("lip_grad", &SmoothFunction::lip_grad)
        .def("value", &SmoothFunction::value, py::arg("x"))
        .def("gradient", &SmoothFunction::gradient, py::arg("x"));

    py::class_<CompositeProblem>(m, "CompositeProblem")
        .def(py::init<SmoothFunction, WeaklyConvexFunction, LinearOperator, double>(), py::arg("h"), py::arg("g"),
             py::arg("A"), py::arg("fstar_lower") = 0.0)
        .def_readonly("h", &CompositeProblem::h)
        .def_readonly("g", &CompositeProblem::g)
        .def_readonly("A", &CompositeProblem::A)
        .def_readonly("fstar_lower", &CompositeProblem::fstar_lower)
        .def_property_readonly("dim", &CompositeProblem::dim)
        .def("lipschitz_g", &CompositeProblem::lipschitz_g)
        .def("objective", &CompositeProblem::objective, py::arg("x"))
        .def("smoothed_objective", &CompositeProblem::smoothed_objective, py::arg("mu"), py::arg("x"))
        .def("smoothed_gradient",
             [](const CompositeProblem& p, double mu, const Vector& x) { return smoothed_gradient(p, mu, x); },
             py::arg("mu"), py::arg("x"));

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("witness", &Certificate::witness)
        .def_readonly("criticality", &Certificate::criticality)
        .def_readonly("feasibility", &Certificate::feasibility)
        .def_readonly("mu", &Certificate::mu)
        .def_readonly("point", &Certificate::point)
        .def_readonly("prox_point", &Certificate::prox_point)
        .def_readonly("surjective_witness", &Certificate::surjective_witness)
        .def_readonly("witness_gap", &Certificate::witness_gap);

    py::class_<SolveResult>(m, "SolveResult")
        .def_property_readonly("trace", [](const SolveResult& r) { return trace_columns(r.trace); })
        .def_readonly("certificate", &SolveResult::certificate)
        .def_readonly("x_final", &SolveResult::x_final)
        .def_property_readonly("status", [](const SolveResult& r) { return std::string(to_string(r.status)); });

    m.def("variable_smoothing", &variable_smoothing, py::arg("problem"), py::arg("x1"), py::arg("max_iter"));
    m.def(
        "variable_smoothing_epochs",
        [](const CompositeProblem& p, const Vector& x1, double eps, int max_epochs, const std::string& stop) {
            EpochStop s = EpochStop::Feasibility;
            if (stop == "witness")
                s = EpochStop::SurjectiveWitness;
            else if (stop != "feasibility")
                throw ConfigError("unknown stop rule '" + stop + "' (valid: feasibility, witness)");
            return variable_smoothing_epochs(p, x1, eps, max_epochs, s);
        },
        py::arg("problem"), py::arg("x1"), py::arg("epsilon"), py::arg("max_epochs") = 20,
        py::arg("stop") = "feasibility");
    m.def("max_prox_gradient_step", &max_prox_gradient_step, py::arg("h"), py::arg("g"));
    m.def("proximal_gradient", &proximal_gradient, py::arg("h"), py::arg("g"), py::arg("x1"), py::arg("lam"),
          py::arg("max_iter"));
    m.def("subgradient_method", &subgradient_method, py::arg("problem"), py::arg("x1"), py::arg("c"),
          py::arg("max_iter"));
    m.def("surjective_witness", &surjective_witness, py::arg("problem"), py::arg("x"), py::arg("mu"));

    m.def(
        "synthetic_image",
        [](const std::string& kind, Eigen::Index h, Eigen::Index w, std::uint64_t seed) {
            return from_image(generate_synthetic_image(synthetic_kind_from_string(kind), h, w, seed));
        },
        py::arg("kind"), py::arg("height"), py::arg("width"), py::arg("seed") = 0);
    m.def(
        "add_gaussian_noise",
        [](const Eigen::Ref<const RowMatrix>& img, double sigma, std::uint64_t seed) {
            return from_image(add_gaussian_noise(to_image(img), sigma, seed));
        },
        py::arg("image"), py::arg("sigma"), py::arg("seed"));
    m.def(
        "ssim",
        [](const Eigen::Ref<const RowMatrix>& a, const Eigen::Ref<const RowMatrix>& b, int window) {
            return ssim(to_image(a), to_image(b), window);
        },
        py::arg("a"), py::arg("b"), py::arg("window") = 7);
    m.def(
        "build_tv_mcp_denoising",
        [](const Eigen::Ref<const RowMatrix>& noisy, double lam, double theta) {
            return build_tv_mcp_denoising(to_image(noisy), lam, theta);
        },
        py::arg("noisy"), py::arg("lam"), py::arg("theta"));
    m.def("build_lasso_mcp", &build_lasso_mcp, py::arg("design"), py::arg("response"), py::arg("lam"),
          py::arg("theta"));
    m.def(
        "build_robust_regression",
        [](const Matrix& design, const Vector& response, const std::string& loss, double reg_weight, double xi) {
            RobustLoss l = RobustLoss::Tukey;
            if (loss == "cauchy")
                l = RobustLoss::Cauchy;
            else if (loss != "tukey")
                throw ConfigError("unknown robust loss '" + loss + "' (valid: tukey, cauchy)");
            return build_robust_regression(design, response, l, {reg_weight, xi});
        },
        py::arg("design"), py::arg("response"), py::arg("loss") = "tukey", py::arg("reg_weight") = 0.0,
        py::arg("xi") = 1.0);
}
