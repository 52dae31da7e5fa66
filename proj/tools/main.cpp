#include "commands.hpp"
#include "config.hpp"

#include "curvbill/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <regex>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

curvbill::PhaseGrid parse_grid(const std::string& s) {
    static const std::regex re(R"((\d+)x(\d+))");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw curvbill::ValidationError("--grid: expected <nx>x<nphi>, got '" + s + "'");
    const int nx = std::stoi(m[1]);
    const int nphi = std::stoi(m[2]);
    if (nx < 16 || nphi < 16) throw curvbill::ValidationError("--grid: both sizes must be >= 16");
    return {nx, nphi};
}

int env_threads() {
    const char* v = std::getenv("CURVBILL_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) throw curvbill::ValidationError("CURVBILL_THREADS: expected an integer in [1, 1024]");
    return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvbill: billiards in constant-curvature domains"};
    app.set_version_flag("--version", curvbill::cli::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> grid;
    app.add_option("--config", config_path, "experiment configuration (JSON)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (overrides CURVBILL_THREADS)")->check(CLI::Range(1, 1024));
    app.add_option("--seed", seed, "random seed");
    app.add_option("--grid", grid, "phase quadrature grid <nx>x<nphi>");

    const char* subs[][2] = {
        {"curve", "build the curve; Gauss-Bonnet and curvature table"},
        {"orbit", "dump an orbit with chord data"},
        {"conjugate", "conjugate-point sweep over launch points"},
        {"cocycle", "stable Jacobi field estimates along an orbit"},
        {"mirror", "mirror-equation residuals along an orbit"},
        {"santalo", "phase-space integral of chord length"},
        {"audit", "full rigidity audit"},
        {"selftest", "run the acceptance suite"},
    };
    for (const auto& s : subs) app.add_subcommand(s[0], s[1])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        curvbill::cli::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = curvbill::cli::load_config(config_path);
        else if (sub != "selftest") throw curvbill::ValidationError("--config: required for '" + sub + "'");

        if (const int t = env_threads(); t > 0) cfg.threads = t;
        if (threads) cfg.threads = *threads;
        if (seed) cfg.seed = *seed;
        if (grid) cfg.grid = parse_grid(*grid);
        if (out_dir) cfg.out = *out_dir;

        return curvbill::cli::run(sub, cfg, std::cout);
    } catch (const curvbill::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const curvbill::GrazingError& e) {
        std::cerr << "numerical failure: " << e.what() << " (step " << e.index() << ")\n";
        return kExitNumerical;
    } catch (const curvbill::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
