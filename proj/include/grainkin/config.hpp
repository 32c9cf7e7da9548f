#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Flat `key = value` experiment configuration.

namespace grainkin {

struct ExperimentConfig {
    std::string experiment = "constants";
    double gamma = 0.0;
    double c = 0.25;
    double L = 200.0;
    std::size_t N = 16384;
    double xi_max = 60.0;
    std::size_t M = 8192;
    double dt = 0.01;
    double T = 50.0;
    std::vector<double> k_list = {2.2, 2.5, 2.8};
    double a = 2.5;
    double tol = 1e-4;
    std::uint64_t seed = 1;
    /// Extra gamma values for the limiting-temperature sweep of the profile experiment.
    std::vector<double> sweep;
    std::string output_dir = "grainkin-out";
};

/// Experiment names in listing order.
const std::vector<std::string>& experiment_names();

/// Defaults of every key for one experiment; throws ConfigError("experiment", ...) for unknown names.
ExperimentConfig default_config(const std::string& experiment);

/// Parses `key = value` lines (`#` starts a comment), then applies `overrides` ("key=value").
/// Keys left unset take the defaults of the chosen experiment. Unknown keys, unparsable values and
/// precondition violations throw ConfigError naming the key.
ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Throws ConfigError if a parameter violates the preconditions of the operations it feeds.
void validate(const ExperimentConfig& cfg);

/// Effective configuration in the input format, one key per line, in a fixed order.
std::string echo_config(const ExperimentConfig& cfg);

}  // namespace grainkin
