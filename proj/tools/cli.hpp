#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace loewner::cli {

struct Options {
    std::string command;              // empty: taken from the config file
    std::string config_path;          // empty only for `demo`
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

/// Executes one command and writes its artifacts.
/// Exit codes: 0 pass/success, 1 verification failure, 2 advisory-only
/// results, 3 input error.
int run(const Options& options);

} // namespace loewner::cli
