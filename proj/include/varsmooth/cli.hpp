#pragma once

#include "varsmooth/harness.hpp"
#include "varsmooth/solvers.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace varsmooth::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDivergence = 3;

struct AlgorithmSpec {
    std::string name; ///< variable_smoothing | epochs | prox_grad | subgradient
    long max_iter = 1000;
    double epsilon = 1e-2;
    int max_epochs = 20;
    std::optional<double> lambda;
    double c = 1.0;
    EpochStop stop = EpochStop::Feasibility;
};

/// A validated run configuration. Everything is checked before any output
/// is produced.
struct ExperimentSpec {
    json raw;
    json problem;
    json regularizer;
    std::optional<json> op;
    std::vector<AlgorithmSpec> algorithms;
    std::optional<std::uint64_t> seed;
    std::filesystem::path output_dir;
};

/// Parses and validates a config. VARSMOOTH_OUTPUT_DIR, when set, replaces
/// output_dir. Throws ConfigError on any schema violation.
ExperimentSpec parse_spec(const json& config);
ExperimentSpec load_spec(const std::filesystem::path& config_path);

/// Regularizer from {"kind": ..., <params>, "rho": optional override}.
WeaklyConvexFunction regularizer_from_json(const json& spec);
json regularizer_to_json(const WeaklyConvexFunction& g);

struct CertificateReport {
    long witness = 0;
    std::optional<double> criticality;
    std::optional<double> feasibility;
    double mu = 0.0;
    std::optional<double> witness_gap;
};

struct AlgorithmReport {
    std::string label;
    std::string name;
    std::string status;
    long iterations = 0;
    CertificateReport certificate;
    std::string trace_path;
    double final_F_true = 0.0;
    std::optional<double> ssim;
    std::optional<std::string> image_path;
};

struct RunReport {
    std::string command;
    json spec;
    std::vector<AlgorithmReport> algorithms;
    std::optional<double> ssim_input;
    double total_wall_time_ms = 0.0;
    /// Set when a solver diverged; the partial trace is still written.
    std::optional<std::string> error;
};

json to_json(const RunReport& report);
RunReport report_from_json(const json& j);

/// Thrown by the commands when a solver diverges after the partial outputs
/// have been written.
class RunDiverged : public Error {
public:
    RunDiverged(const std::string& what, RunReport report) : Error(what), report_(std::move(report)) {}
    const RunReport& report() const { return report_; }

private:
    RunReport report_;
};

RunReport cmd_solve(const std::filesystem::path& config_path);
RunReport cmd_denoise(const std::filesystem::path& image_path, const std::filesystem::path& config_path);
RunReport cmd_compare(const std::filesystem::path& config_path);

/// Runs a command and maps failures to exit codes (0, 2, 3; 1 for anything
/// unexpected), printing diagnostics to stderr.
int run_and_report(const std::function<RunReport()>& command);

} // namespace varsmooth::cli
