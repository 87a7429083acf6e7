#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"loewner: Loewner-evolution engine on hyperbolic model domains"};
    loewner::cli::Options options;

    app.add_option("command", options.command,
                   "solve | picard | herglotz-check | verify-family | variational | recover | demo");
    app.add_option("--config", options.config_path, "JSON run configuration");
    app.add_option("--out", options.out_dir, "output directory for artifacts");

    std::uint64_t seed = 0;
    double tol = 0.0;
    auto* seed_opt = app.add_option("--seed", seed, "sampling seed override");
    auto* tol_opt = app.add_option("--tol", tol, "tolerance override");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) options.seed = seed;
    if (*tol_opt) options.tol = tol;

    return loewner::cli::run(options);
}
