#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nrcdt/cdt.hpp>
#include <nrcdt/classify.hpp>

namespace nrcdt::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeError = 1, kUsageError = 2 };

/// Knobs shared by the subcommands after flags, config file and defaults
/// have been merged (flags win over the config file).
struct RunConfig {
    std::size_t angles = 16;
    std::size_t quantiles = 64;
    CurveNorm norm = CurveNorm::chebyshev;
    std::uint64_t seed = 0;
    std::size_t folds = 10;
    Representation representation = Representation::mnrcdt;
    double eps_std = 1e-8;
    std::filesystem::path output_path;
};

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrcdt::cli
