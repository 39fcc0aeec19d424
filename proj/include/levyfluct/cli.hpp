#pragma once

#include <optional>
#include <string>

namespace levyfluct {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<double> tilt;
    double level = 0.01;            ///< statistical level for the KS gates
    bool negative_control = false;  ///< verify-rw test hook: corrupts the RHS
};

/// Exit codes: 0 all checks pass, 1 a verification failed.
/// Configuration and assumption violations are reported by throwing
/// config_error / assumption_error, which the entry point maps to exit 2.
int cmd_verify_rw(const CliOptions& opt);
int cmd_verify_passage(const CliOptions& opt);
int cmd_verify_asymptotic(const CliOptions& opt);
int cmd_eval(const CliOptions& opt);

}  // namespace levyfluct
