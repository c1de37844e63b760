#include "varsmooth/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    namespace vc = varsmooth::cli;

    CLI::App app{"Variable smoothing for weakly convex composite problems"};
    app.require_subcommand(1);

    std::string config;
    std::string image;

    auto* solve = app.add_subcommand("solve", "Run the configured algorithms on one problem");
    solve->add_option("config", config, "JSON config")->required();

    auto* denoise = app.add_subcommand("denoise", "Denoise an image (.pgm or .csv) with MCP-TV");
    denoise->add_option("image", image, "Input image")->required();
    denoise->add_option("config", config, "JSON config")->required();

    auto* compare = app.add_subcommand("compare", "Run two or more algorithms from a shared start");
    compare->add_option("config", config, "JSON config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : vc::kExitValidation;
    }

    if (solve->parsed()) return vc::run_and_report([&] { return vc::cmd_solve(config); });
    if (denoise->parsed()) return vc::run_and_report([&] { return vc::cmd_denoise(image, config); });
    return vc::run_and_report([&] { return vc::cmd_compare(config); });
}
