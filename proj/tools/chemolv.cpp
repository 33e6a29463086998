// Command-line entry point: check | steady | bounds | simulate | rectangles.

#include <chemolv/app/commands.hpp>

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using chemolv::app::CommandResult;

int emit(const CommandResult& r, const std::optional<std::filesystem::path>& out, const std::string& file) {
    const std::string text = r.document.dump(2) + "\n";
    std::cout << text;
    if (out && !file.empty()) {
        std::filesystem::create_directories(*out);
        std::ofstream(*out / file, std::ios::binary) << text;
    }
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-species chemotaxis with nonlocal Lotka-Volterra kinetics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int n_dim = 1;
    std::string trajectory;

    auto* check = app.add_subcommand("check", "Evaluate every parameter hypothesis and classify the regime");
    auto* steady = app.add_subcommand("steady", "Constant steady states");
    auto* bounds = app.add_subcommand("bounds", "A-priori bound constants");
    auto* simulate = app.add_subcommand("simulate", "Run the PDE; write trajectory CSV and summary");
    auto* rects = app.add_subcommand("rectangles", "Integrate the rectangle ODE and check the enclosure");
    for (auto* sub : {check, steady, bounds, simulate, rects}) {
        sub->add_option("--config", config_path, "Scenario JSON file")->required();
        sub->add_option("--out", out_dir, "Output directory");
    }
    check->add_option("--n-dim", n_dim, "Spatial dimension used by dimension-dependent hypotheses")
        ->check(CLI::PositiveNumber);
    rects->add_option("--trajectory", trajectory, "Existing trajectory CSV instead of a fresh simulation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : chemolv::app::kExitConfig;
    }

    const std::optional<std::filesystem::path> out =
        out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);
    const std::filesystem::path out_or_cwd = out.value_or(std::filesystem::path("."));

    try {
        const auto cfg = chemolv::app::load_scenario(config_path);
        if (check->parsed()) return emit(chemolv::app::cmd_check(cfg, n_dim), out, "check.json");
        if (steady->parsed()) return emit(chemolv::app::cmd_steady(cfg), out, "steady.json");
        if (bounds->parsed()) return emit(chemolv::app::cmd_bounds(cfg), out, "bounds.json");
        if (simulate->parsed()) return emit(chemolv::app::cmd_simulate(cfg, out_or_cwd), std::nullopt, "");
        if (rects->parsed()) {
            std::optional<std::filesystem::path> tr;
            if (!trajectory.empty()) tr = trajectory;
            return emit(chemolv::app::cmd_rectangles(cfg, out_or_cwd, tr), std::nullopt, "");
        }
    } catch (const chemolv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return chemolv::app::kExitConfig;
    } catch (const chemolv::PreconditionError& e) {
        std::cerr << "precondition failure: " << e.what() << '\n';
        return chemolv::app::kExitPrecondition;
    } catch (const chemolv::NumericalGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << '\n';
        return chemolv::app::kExitNumericalGuard;
    }
    return chemolv::app::kExitConfig;
}
