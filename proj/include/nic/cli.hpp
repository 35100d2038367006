#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nic/assembly.hpp"

namespace nic {

enum class Experiment { OneD, Mode2D, Scatter, Dispersion, LayerDemo, Converge, CheckGeom };

/// Which radial problem a convergence study sweeps.
enum class ConvergeTarget { OneD, Mode2D, Scatter };

struct RunConfig {
    Experiment experiment = Experiment::OneD;
    double k = 40.0;
    std::optional<double> K; ///< default k for oned, 1 otherwise
    int m = 20;
    double a = 1.0;
    double R0 = 1.0;
    double R = 2.0;
    double S = 2.2;
    int n = 2;
    double sigma = 1.0;
    Scheme scheme = Scheme::Chebyshev;
    std::optional<int> N;
    std::string geometry = "nic";
    std::optional<int> modes;
    int theta_count = 128;
    std::vector<int> N_list;
    int samples = 100;
    ConvergeTarget target = ConvergeTarget::OneD;
    bool undamped = false;
    std::string out = ".";

    double resolved_K() const;
    int resolved_N() const;
    /// Flat JSON object keyed like the long flags.
    nlohmann::json to_json() const;
};

std::string experiment_name(Experiment experiment);

/// Exit codes of run() and cli_main().
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/**
 * Build a validated config from a flat JSON object (config file contents)
 * overridden key by key by `flags`. Both objects use the long flag names
 * without dashes. Throws ConfigurationError on unknown keys or bad values.
 */
RunConfig resolve_config(Experiment experiment, const nlohmann::json& file,
                         const nlohmann::json& flags);

/// Run one experiment and write its artifacts under config.out. Errors are
/// reported as one line on `err`; the return value is the exit code.
int run(const RunConfig& config, std::ostream& err);

/// Entry point of the command-line tool.
int cli_main(int argc, const char* const* argv);

} // namespace nic
