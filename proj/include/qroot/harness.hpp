#pragma once

#include "qroot/fit.hpp"
#include "qroot/nonlinear_system.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qroot {

enum class Command { Dissect, Newton, Lm, Linear, Circulant, Poisson, Masses, Dynamics, Lyapunov, Scaling };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

/// Malformed or missing configuration; what() carries the file, line or field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Command command = Command::Scaling;
    nlohmann::json input = nlohmann::json::object();
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 1;
    std::optional<double> eps;
    std::string suite;
    std::vector<long> sizes;
    int repetitions = 1;

    nlohmann::json to_json() const;
};

/// Parses a JSON document, reporting line and column on failure.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Builds a config from a document; "input_path" entries resolve against base_dir.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");

/// Deterministic per-task seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t task);

/// 0.5·I plus a dense perturbation of norm about 0.23, with a root in [-0.3, 0.3]^n.
FunctionFamily random_linear_system(Index n, std::uint64_t seed, RVector* root = nullptr);

/// Shared-form a1·x + a2·x² + c with a known root; start is the root plus a 0.05 perturbation.
FunctionFamily random_shared_quadratic(Index n, std::uint64_t seed, RVector* root = nullptr, RVector* start = nullptr);

struct ScalingRow {
    long n = 0;
    int repetition = 0;
    double cost = 0.0;
};

struct ScalingResult {
    std::string suite;
    std::string metric;
    std::vector<ScalingRow> rows;
    FitResult fit;
    nlohmann::json summary;
};

std::vector<std::string> registered_suites();
std::vector<long> default_sizes(const std::string& suite);

/// Per-size ledger costs for a registered suite and a fit against the claimed form.
ScalingResult scaling_suite(const std::string& name, const std::vector<long>& sizes, int repetitions,
                            std::uint64_t seed, double eps);

void write_scaling_csv(std::ostream& os, const ScalingResult& r);

struct RunResult {
    int status = 0;
    std::string message;
    std::vector<std::filesystem::path> artifacts;
};

inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

/// Executes one experiment and writes its artifacts under config.out_dir.
RunResult run(const ExperimentConfig& config);

/// Sets the log level from QROOT_LOG (trace, debug, info, warn, error, off).
void configure_logging();

}  // namespace qroot
