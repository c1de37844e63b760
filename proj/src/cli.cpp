#include "varsmooth/cli.hpp"

#include "varsmooth/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace varsmooth::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kDefaultConvexRho = 1e-3;
constexpr int kDefaultSsimWindow = 7;

const std::vector<std::string> kAlgorithmNames{"variable_smoothing", "epochs", "prox_grad", "subgradient"};
const std::vector<std::string> kProblemKinds{"composite", "denoise_tv_mcp", "robust_regression", "lasso_mcp"};

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    require_object(j, where);
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key)) {
            std::vector<std::string> names(allowed.begin(), allowed.end());
            throw ConfigError(where + ": unknown field '" + key + "'; valid fields: " + join(names));
        }
}

double number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& where, double fallback) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

long integer(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    if (!j.at(key).is_number_integer()) throw ConfigError(where + ": field '" + key + "' must be an integer");
    return j.at(key).get<long>();
}

long integer_or(const json& j, const std::string& key, const std::string& where, long fallback) {
    return j.contains(key) ? integer(j, key, where) : fallback;
}

std::string string_field(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    if (!j.at(key).is_string()) throw ConfigError(where + ": field '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

Vector vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(where + " must be an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a nonempty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ConfigError(where + " must be a nonempty array of rows");
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw ConfigError(where + ": ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw ConfigError(where + ": entries must be numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return m;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

// Matrix given inline under `key` or as a CSV path under `key + "_csv"`.
std::optional<Matrix> matrix_entry(const json& j, const std::string& key, const std::string& where,
                                   const fs::path& base) {
    if (j.contains(key) && j.contains(key + "_csv")) throw ConfigError(where + ": give either '" + key + "' or '" + key + "_csv'");
    if (j.contains(key)) return matrix_from_json(j.at(key), where + "." + key);
    if (j.contains(key + "_csv")) return read_matrix_csv(resolve(base, string_field(j, key + "_csv", where)));
    return std::nullopt;
}

std::optional<Vector> vector_entry(const json& j, const std::string& key, const std::string& where,
                                   const fs::path& base) {
    if (j.contains(key) && j.contains(key + "_csv")) throw ConfigError(where + ": give either '" + key + "' or '" + key + "_csv'");
    if (j.contains(key)) return vector_from_json(j.at(key), where + "." + key);
    if (j.contains(key + "_csv")) {
        const Matrix m = read_matrix_csv(resolve(base, string_field(j, key + "_csv", where)));
        return Vector(m.reshaped<Eigen::RowMajor>());
    }
    return std::nullopt;
}

AlgorithmSpec parse_algorithm(const json& j, std::size_t index) {
    const std::string where = "algorithms[" + std::to_string(index) + "]";
    check_keys(j, where, {"name", "max_iter", "epsilon", "max_epochs", "lambda", "c", "stop"});
    AlgorithmSpec a;
    a.name = string_field(j, "name", where);
    if (std::find(kAlgorithmNames.begin(), kAlgorithmNames.end(), a.name) == kAlgorithmNames.end())
        throw ConfigError(where + ": unknown algorithm '" + a.name + "'; valid names: " + join(kAlgorithmNames));
    a.max_iter = integer_or(j, "max_iter", where, a.max_iter);
    if (a.max_iter < 0) throw ConfigError(where + ": max_iter must be >= 0");
    a.epsilon = number_or(j, "epsilon", where, a.epsilon);
    if (!(a.epsilon > 0.0)) throw ConfigError(where + ": epsilon must be positive");
    a.max_epochs = static_cast<int>(integer_or(j, "max_epochs", where, a.max_epochs));
    if (a.max_epochs < 0 || a.max_epochs > 40) throw ConfigError(where + ": max_epochs must be in [0, 40]");
    if (j.contains("lambda")) {
        a.lambda = number(j, "lambda", where);
        if (!(*a.lambda > 0.0)) throw ConfigError(where + ": lambda must be positive");
    }
    a.c = number_or(j, "c", where, a.c);
    if (!(a.c > 0.0)) throw ConfigError(where + ": c must be positive");
    if (j.contains("stop")) {
        const auto stop = string_field(j, "stop", where);
        if (stop == "feasibility")
            a.stop = EpochStop::Feasibility;
        else if (stop == "witness")
            a.stop = EpochStop::SurjectiveWitness;
        else
            throw ConfigError(where + ": unknown stop rule '" + stop + "'; valid names: feasibility, witness");
    }
    return a;
}

LinearOperator operator_from_json(const json& j, const fs::path& base) {
    const std::string where = "operator";
    check_keys(j, where, {"kind", "matrix", "matrix_csv", "height", "width", "dim", "scale"});
    const auto kind = string_field(j, "kind", where);
    auto finish = [&](LinearOperator op) {
        if (j.contains("scale")) return LinearOperator::scaled(number(j, "scale", where), std::move(op));
        return op;
    };
    if (kind == "identity") return finish(LinearOperator::identity(integer(j, "dim", where)));
    if (kind == "grad2d") return finish(LinearOperator::grad2d(integer(j, "height", where), integer(j, "width", where)));
    if (kind == "dense") {
        auto m = matrix_entry(j, "matrix", where, base);
        if (!m) throw ConfigError("operator: dense operator needs 'matrix' or 'matrix_csv'");
        return finish(LinearOperator::dense(std::move(*m)));
    }
    throw ConfigError("operator: unknown kind '" + kind + "'; valid names: identity, dense, grad2d");
}

SmoothFunction smooth_from_json(const json& j, const fs::path& base) {
    const std::string where = "problem.smooth";
    check_keys(j, where, {"kind", "matrix", "matrix_csv", "vector", "vector_csv", "weight", "dim"});
    const auto kind = string_field(j, "kind", where);
    if (kind == "zero") return SmoothFunction::zero(integer(j, "dim", where));
    if (kind == "scaled_norm_sq") return SmoothFunction::scaled_norm_sq(number(j, "weight", where), integer(j, "dim", where));
    if (kind == "least_squares") {
        auto b = vector_entry(j, "vector", where, base);
        if (!b) throw ConfigError(where + ": least_squares needs 'vector'");
        auto m = matrix_entry(j, "matrix", where, base);
        if (!m) {
            auto eye = LinearOperator::identity(b->size());
            return SmoothFunction::least_squares(std::move(eye), std::move(*b));
        }
        return SmoothFunction::least_squares(LinearOperator::dense(std::move(*m)), std::move(*b));
    }
    if (kind == "quadratic") {
        auto q = matrix_entry(j, "matrix", where, base);
        auto c = vector_entry(j, "vector", where, base);
        if (!q) throw ConfigError(where + ": quadratic needs 'matrix'");
        Vector cv = c ? std::move(*c) : Vector::Zero(q->rows());
        return SmoothFunction::quadratic(std::move(*q), std::move(cv));
    }
    throw ConfigError(where + ": unknown kind '" + kind + "'; valid names: zero, least_squares, quadratic, scaled_norm_sq");
}

std::uint64_t require_seed(const ExperimentSpec& spec, const std::string& why) {
    if (!spec.seed) throw ConfigError("'seed' is required when " + why);
    return *spec.seed;
}

// A problem instance plus what the commands need around it.
struct BuiltProblem {
    std::optional<CompositeProblem> problem;
    Vector x1;
    std::optional<ImageBuffer> noisy;
    std::optional<ImageBuffer> truth;
    int ssim_window = kDefaultSsimWindow;
};

void reject_operator(const ExperimentSpec& spec, const std::string& implied) {
    if (spec.op && string_field(*spec.op, "kind", "operator") != implied)
        throw ConfigError("operator: problem kind implies a '" + implied + "' operator");
}

BuiltProblem build_problem(const ExperimentSpec& spec, const fs::path& base, const std::optional<ImageBuffer>& input_image) {
    const json& pj = spec.problem;
    const auto kind = string_field(pj, "kind", "problem");
    const auto g = regularizer_from_json(spec.regularizer);
    BuiltProblem out;

    if (kind == "composite") {
        check_keys(pj, "problem", {"kind", "smooth", "x0", "fstar_lower"});
        if (!spec.op) throw ConfigError("composite problems need an 'operator'");
        if (!pj.contains("smooth")) throw ConfigError("problem: missing field 'smooth'");
        auto h = smooth_from_json(pj.at("smooth"), base);
        auto a = operator_from_json(*spec.op, base);
        out.problem.emplace(std::move(h), g, std::move(a), number_or(pj, "fstar_lower", "problem", 0.0));
        out.x1 = pj.contains("x0") ? vector_from_json(pj.at("x0"), "problem.x0") : Vector::Zero(out.problem->dim());
        if (out.x1.size() != out.problem->dim()) throw ConfigError("problem.x0 has the wrong dimension");
        return out;
    }

    if (kind == "denoise_tv_mcp") {
        check_keys(pj, "problem", {"kind", "image", "noise_sigma", "ground_truth", "ssim_window"});
        if (g.kind() != PenaltyKind::MCP) throw ConfigError("denoise_tv_mcp requires an 'mcp' regularizer");
        out.ssim_window = static_cast<int>(integer_or(pj, "ssim_window", "problem", kDefaultSsimWindow));
        ImageBuffer img;
        if (input_image) {
            if (pj.contains("image")) throw ConfigError("problem.image conflicts with the image given on the command line");
            img = *input_image;
        } else {
            if (!pj.contains("image")) throw ConfigError("problem: missing field 'image'");
            const json& ij = pj.at("image");
            check_keys(ij, "problem.image", {"synthetic", "height", "width", "path"});
            if (ij.contains("path")) {
                img = read_image(resolve(base, string_field(ij, "path", "problem.image")));
            } else {
                const auto sk = synthetic_kind_from_string(string_field(ij, "synthetic", "problem.image"));
                img = generate_synthetic_image(sk, integer(ij, "height", "problem.image"),
                                               integer(ij, "width", "problem.image"),
                                               require_seed(spec, "a synthetic image is generated"));
                out.truth = img;
            }
        }
        if (pj.contains("ground_truth")) out.truth = read_image(resolve(base, string_field(pj, "ground_truth", "problem")));
        const double sigma = number_or(pj, "noise_sigma", "problem", 0.0);
        if (sigma < 0.0) throw ConfigError("problem.noise_sigma must be >= 0");
        if (sigma > 0.0) img = add_gaussian_noise(img, sigma, require_seed(spec, "noise is generated"));
        if (out.truth && (out.truth->height != img.height || out.truth->width != img.width))
            throw ConfigError("ground truth and input image differ in size");
        reject_operator(spec, "grad2d");
        out.problem.emplace(build_tv_mcp_denoising(img, g.param("lambda"), g.param("theta")));
        out.x1 = img.pixels;
        out.noisy = std::move(img);
        return out;
    }

    if (kind == "robust_regression") {
        check_keys(pj, "problem", {"kind", "design", "design_csv", "response", "response_csv", "synthetic", "reg_weight"});
        if (g.kind() != PenaltyKind::TukeyBiweight && g.kind() != PenaltyKind::CauchyLoss)
            throw ConfigError("robust_regression requires a 'tukey' or 'cauchy' regularizer");
        Matrix design;
        Vector response;
        if (pj.contains("synthetic")) {
            const json& sj = pj.at("synthetic");
            check_keys(sj, "problem.synthetic", {"rows", "cols", "outlier_fraction", "noise_sigma"});
            auto data = generate_regression_data(integer(sj, "rows", "problem.synthetic"), integer(sj, "cols", "problem.synthetic"),
                                                 number_or(sj, "outlier_fraction", "problem.synthetic", 0.0),
                                                 number_or(sj, "noise_sigma", "problem.synthetic", 0.0),
                                                 require_seed(spec, "synthetic regression data is generated"));
            design = std::move(data.design);
            response = std::move(data.response);
        } else {
            auto m = matrix_entry(pj, "design", "problem", base);
            auto b = vector_entry(pj, "response", "problem", base);
            if (!m || !b) throw ConfigError("robust_regression needs 'design' and 'response' or 'synthetic'");
            design = std::move(*m);
            response = std::move(*b);
        }
        reject_operator(spec, "dense");
        const double w = number_or(pj, "reg_weight", "problem", 0.0);
        if (w < 0.0) throw ConfigError("problem.reg_weight must be >= 0");
        auto h = w > 0.0 ? SmoothFunction::scaled_norm_sq(w, design.cols()) : SmoothFunction::zero(design.cols());
        out.problem.emplace(std::move(h), g.with_shift(response), LinearOperator::dense(std::move(design)), 0.0);
        out.x1 = Vector::Zero(out.problem->dim());
        return out;
    }

    if (kind == "lasso_mcp") {
        check_keys(pj, "problem", {"kind", "design", "design_csv", "response", "response_csv"});
        if (g.kind() != PenaltyKind::MCP) throw ConfigError("lasso_mcp requires an 'mcp' regularizer");
        auto m = matrix_entry(pj, "design", "problem", base);
        auto b = vector_entry(pj, "response", "problem", base);
        if (!m || !b) throw ConfigError("lasso_mcp needs 'design' and 'response'");
        reject_operator(spec, "identity");
        const Eigen::Index d = m->cols();
        out.problem.emplace(SmoothFunction::least_squares(LinearOperator::dense(std::move(*m)), std::move(*b)), g,
                            LinearOperator::identity(d), 0.0);
        out.x1 = Vector::Zero(d);
        return out;
    }

    throw ConfigError("problem: unknown kind '" + kind + "'; valid names: " + join(kProblemKinds));
}

BuiltProblem build_checked(const ExperimentSpec& spec, const fs::path& base, const std::optional<ImageBuffer>& image) {
    try {
        return build_problem(spec, base, image);
    } catch (const UsageError& e) {
        throw ConfigError(e.what());
    } catch (const UnsupportedOperatorError& e) {
        throw ConfigError(e.what());
    }
}

SolveResult run_algorithm(const CompositeProblem& p, const Vector& x1, const AlgorithmSpec& a) {
    if (a.name == "variable_smoothing" || a.name == "epochs") {
        // The smoothing schedule needs rho > 0; substitute a small modulus for convex g.
        const CompositeProblem* use = &p;
        std::optional<CompositeProblem> adjusted;
        if (!(p.g.rho() > 0.0)) {
            adjusted.emplace(p.h, p.g.with_rho(kDefaultConvexRho), p.A, p.fstar_lower);
            use = &*adjusted;
        }
        if (a.name == "variable_smoothing") return variable_smoothing(*use, x1, a.max_iter);
        return variable_smoothing_epochs(*use, x1, a.epsilon, a.max_epochs, a.stop);
    }
    if (a.name == "prox_grad") {
        if (p.A.kind() != LinearOperator::Kind::Identity)
            throw ConfigError("prox_grad applies only to problems with an identity operator");
        double lambda = a.lambda.value_or(max_prox_gradient_step(p.h, p.g));
        if (!std::isfinite(lambda)) throw ConfigError("prox_grad: give 'lambda' explicitly for this problem");
        return proximal_gradient(p.h, p.g, x1, lambda, a.max_iter);
    }
    return subgradient_method(p, x1, a.c, a.max_iter);
}

std::optional<double> finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return std::nullopt;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

bool timing_enabled() {
    const char* v = std::getenv("VARSMOOTH_RECORD_TIME");
    return v && std::string(v) == "1";
}

std::vector<std::string> labels_for(const std::vector<AlgorithmSpec>& algs) {
    std::map<std::string, int> count;
    for (const auto& a : algs) ++count[a.name];
    std::vector<std::string> out;
    for (std::size_t i = 0; i < algs.size(); ++i)
        out.push_back(count[algs[i].name] > 1 ? algs[i].name + "_" + std::to_string(i) : algs[i].name);
    return out;
}

void write_report(const fs::path& dir, const RunReport& report) {
    std::ofstream out(dir / "report.json");
    if (!out) throw IoError("cannot write report.json");
    out << std::setw(2) << to_json(report) << '\n';
}

struct Runner {
    const ExperimentSpec& spec;
    BuiltProblem built;
    RunReport report;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void run_all(bool write_images) {
        const auto labels = labels_for(spec.algorithms);
        fs::create_directories(spec.output_dir);
        if (built.noisy && built.truth) report.ssim_input = ssim(*built.noisy, *built.truth, built.ssim_window);
        for (std::size_t i = 0; i < spec.algorithms.size(); ++i) {
            const auto& a = spec.algorithms[i];
            AlgorithmReport ar;
            ar.label = labels[i];
            ar.name = a.name;
            const fs::path trace_path = spec.output_dir / ("trace_" + labels[i] + ".csv");
            ar.trace_path = trace_path.string();
            SolveResult res;
            try {
                res = run_algorithm(*built.problem, built.x1, a);
            } catch (const DivergenceError& e) {
                write_trace_csv(trace_path, e.trace(), timing_enabled());
                ar.status = "diverged";
                ar.iterations = static_cast<long>(e.trace().records.size());
                report.algorithms.push_back(ar);
                report.error = e.what();
                finish();
                throw RunDiverged(e.what(), report);
            }
            write_trace_csv(trace_path, res.trace, timing_enabled());
            ar.status = std::string(to_string(res.status));
            ar.iterations = static_cast<long>(res.trace.records.size());
            ar.certificate.witness = res.certificate.witness;
            ar.certificate.criticality = finite_or_null(res.certificate.criticality);
            ar.certificate.feasibility = finite_or_null(res.certificate.feasibility);
            ar.certificate.mu = res.certificate.mu;
            ar.certificate.witness_gap = res.certificate.witness_gap;
            ar.final_F_true = built.problem->objective(res.x_final);
            if (built.noisy) {
                ImageBuffer out_img{built.noisy->height, built.noisy->width, res.x_final};
                if (built.truth) ar.ssim = ssim(out_img, *built.truth, built.ssim_window);
                if (write_images) {
                    const fs::path stem = spec.output_dir / ("denoised_" + labels[i]);
                    write_image_csv(fs::path(stem.string() + ".csv"), out_img);
                    write_pgm(fs::path(stem.string() + ".pgm"), out_img);
                    ar.image_path = stem.string() + ".pgm";
                }
            }
            report.algorithms.push_back(std::move(ar));
        }
        finish();
    }

    void finish() {
        report.total_wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        write_report(spec.output_dir, report);
    }
};

} // namespace

WeaklyConvexFunction regularizer_from_json(const json& j) {
    require_object(j, "regularizer");
    const auto kind = penalty_kind_from_string(string_field(j, "kind", "regularizer"));
    std::map<std::string, double> params;
    std::optional<double> rho;
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") continue;
        if (!value.is_number()) throw ConfigError("regularizer: field '" + key + "' must be a number");
        if (key == "rho")
            rho = value.get<double>();
        else
            params[key] = value.get<double>();
    }
    auto g = WeaklyConvexFunction::make(kind, params);
    return rho ? g.with_rho(*rho) : g;
}

json regularizer_to_json(const WeaklyConvexFunction& g) {
    json j;
    j["kind"] = std::string(to_string(g.kind()));
    for (const auto& [k, v] : g.params()) j[k] = v;
    if (g.rho() != WeaklyConvexFunction::make(g.kind(), g.params()).rho()) j["rho"] = g.rho();
    return j;
}

ExperimentSpec parse_spec(const json& config) {
    check_keys(config, "config", {"problem", "regularizer", "operator", "algorithms", "seed", "output_dir"});
    ExperimentSpec spec;
    spec.raw = config;
    if (!config.contains("problem")) throw ConfigError("config: missing field 'problem'");
    if (!config.contains("regularizer")) throw ConfigError("config: missing field 'regularizer'");
    if (!config.contains("algorithms")) throw ConfigError("config: missing field 'algorithms'");
    spec.problem = config.at("problem");
    require_object(spec.problem, "problem");
    const auto kind = string_field(spec.problem, "kind", "problem");
    if (std::find(kProblemKinds.begin(), kProblemKinds.end(), kind) == kProblemKinds.end())
        throw ConfigError("problem: unknown kind '" + kind + "'; valid names: " + join(kProblemKinds));
    spec.regularizer = config.at("regularizer");
    regularizer_from_json(spec.regularizer);
    if (config.contains("operator")) {
        spec.op = config.at("operator");
        require_object(*spec.op, "operator");
    }
    const json& algs = config.at("algorithms");
    if (!algs.is_array() || algs.empty()) throw ConfigError("config: 'algorithms' must be a nonempty array");
    for (std::size_t i = 0; i < algs.size(); ++i) spec.algorithms.push_back(parse_algorithm(algs[i], i));
    if (config.contains("seed")) {
        if (!config.at("seed").is_number_unsigned()) throw ConfigError("config: 'seed' must be a nonnegative integer");
        spec.seed = config.at("seed").get<std::uint64_t>();
    }
    if (const char* env = std::getenv("VARSMOOTH_OUTPUT_DIR"); env && *env) {
        spec.output_dir = env;
    } else {
        spec.output_dir = string_field(config, "output_dir", "config");
    }
    return spec;
}

ExperimentSpec load_spec(const fs::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config '" + config_path.string() + "'");
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in '" + config_path.string() + "': " + e.what());
    }
    return parse_spec(config);
}

json to_json(const RunReport& r) {
    json j;
    j["command"] = r.command;
    j["spec"] = r.spec;
    j["algorithms"] = json::array();
    for (const auto& a : r.algorithms) {
        json aj;
        aj["label"] = a.label;
        aj["name"] = a.name;
        aj["status"] = a.status;
        aj["iterations"] = a.iterations;
        aj["certificate"] = {{"witness", a.certificate.witness},
                             {"criticality", optional_json(a.certificate.criticality)},
                             {"feasibility", optional_json(a.certificate.feasibility)},
                             {"mu", a.certificate.mu},
                             {"witness_gap", optional_json(a.certificate.witness_gap)}};
        aj["trace_path"] = a.trace_path;
        aj["final_F_true"] = finite_or_null(a.final_F_true) ? json(a.final_F_true) : json(nullptr);
        aj["ssim"] = optional_json(a.ssim);
        aj["image_path"] = a.image_path ? json(*a.image_path) : json(nullptr);
        j["algorithms"].push_back(std::move(aj));
    }
    j["ssim_input"] = optional_json(r.ssim_input);
    j["total_wall_time_ms"] = r.total_wall_time_ms;
    j["error"] = r.error ? json(*r.error) : json(nullptr);
    return j;
}

RunReport report_from_json(const json& j) {
    check_keys(j, "report", {"command", "spec", "algorithms", "ssim_input", "total_wall_time_ms", "error"});
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.spec = j.at("spec");
    for (const auto& aj : j.at("algorithms")) {
        check_keys(aj, "report.algorithms[]", {"label", "name", "status", "iterations", "certificate", "trace_path",
                                              "final_F_true", "ssim", "image_path"});
        AlgorithmReport a;
        a.label = aj.at("label").get<std::string>();
        a.name = aj.at("name").get<std::string>();
        a.status = aj.at("status").get<std::string>();
        a.iterations = aj.at("iterations").get<long>();
        const json& cj = aj.at("certificate");
        check_keys(cj, "report.certificate", {"witness", "criticality", "feasibility", "mu", "witness_gap"});
        a.certificate.witness = cj.at("witness").get<long>();
        a.certificate.criticality = optional_from(cj, "criticality");
        a.certificate.feasibility = optional_from(cj, "feasibility");
        a.certificate.mu = cj.at("mu").get<double>();
        a.certificate.witness_gap = optional_from(cj, "witness_gap");
        a.trace_path = aj.at("trace_path").get<std::string>();
        a.final_F_true = aj.at("final_F_true").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                          : aj.at("final_F_true").get<double>();
        a.ssim = optional_from(aj, "ssim");
        if (!aj.at("image_path").is_null()) a.image_path = aj.at("image_path").get<std::string>();
        r.algorithms.push_back(std::move(a));
    }
    r.ssim_input = optional_from(j, "ssim_input");
    r.total_wall_time_ms = j.at("total_wall_time_ms").get<double>();
    if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
    return r;
}

RunReport cmd_solve(const fs::path& config_path) {
    const auto spec = load_spec(config_path);
    Runner runner{spec, build_checked(spec, config_path.parent_path(), std::nullopt), {}};
    runner.report.command = "solve";
    runner.report.spec = spec.raw;
    runner.run_all(false);
    return runner.report;
}

RunReport cmd_denoise(const fs::path& image_path, const fs::path& config_path) {
    const auto spec = load_spec(config_path);
    if (string_field(spec.problem, "kind", "problem") != "denoise_tv_mcp")
        throw ConfigError("denoise expects problem kind 'denoise_tv_mcp'");
    ImageBuffer input;
    try {
        input = read_image(image_path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    Runner runner{spec, build_checked(spec, config_path.parent_path(), input), {}};
    runner.report.command = "denoise";
    runner.report.spec = spec.raw;
    runner.run_all(true);
    return runner.report;
}

RunReport cmd_compare(const fs::path& config_path) {
    const auto spec = load_spec(config_path);
    if (spec.algorithms.size() < 2) throw ConfigError("compare needs at least two algorithms");
    Runner runner{spec, build_checked(spec, config_path.parent_path(), std::nullopt), {}};
    runner.report.command = "compare";
    runner.report.spec = spec.raw;
    runner.run_all(false);
    return runner.report;
}

namespace {

void print_summary(const RunReport& r) {
    auto fmt = [](const std::optional<double>& v) {
        if (!v) return std::string("-");
        std::ostringstream os;
        os << std::setprecision(6) << *v;
        return os.str();
    };
    std::cout << std::left << std::setw(24) << "algorithm" << std::setw(18) << "status" << std::setw(10) << "iters"
              << std::setw(14) << "F_true" << std::setw(14) << "criticality" << std::setw(14) << "feasibility"
              << "ssim\n";
    for (const auto& a : r.algorithms) {
        std::cout << std::left << std::setw(24) << a.label << std::setw(18) << a.status << std::setw(10)
                  << a.iterations << std::setw(14) << fmt(a.final_F_true) << std::setw(14)
                  << fmt(a.certificate.criticality) << std::setw(14) << fmt(a.certificate.feasibility) << fmt(a.ssim)
                  << '\n';
    }
    if (r.ssim_input) std::cout << "input ssim: " << *r.ssim_input << '\n';
}

} // namespace

int run_and_report(const std::function<RunReport()>& command) {
    try {
        print_summary(command());
        return kExitOk;
    } catch (const RunDiverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace varsmooth::cli
