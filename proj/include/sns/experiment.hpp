#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sns/learners.hpp"
#include "sns/model.hpp"

namespace sns::experiment {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

/// Everything needed to reproduce a run; serialized as manifest.json.
struct RunConfig {
    std::string command;
    /// Model file path, or "wireless" for the built-in adaptive-modulation model.
    std::string model = "wireless";
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::optional<double> gamma;
    std::size_t steps = 1'000'000;
    StepSchedule schedule = StepSchedule::constant(0.01);
    StepClock clock = StepClock::PerEntry;
    /// "action0", "uniform", or a policy file path (evaluate / simulate).
    std::string policy = "action0";
    std::filesystem::path out_dir = ".";
    /// Reject models whose per-(e, a) state chains fail the irreducible / aperiodic check.
    bool strict_assumptions = false;
};

/// Loads a model file or builds the wireless model, then applies the gamma override.
SnsMdp load_model_source(const std::string& source, std::optional<double> gamma);

Policy resolve_policy(const std::string& spec, const SnsMdp& model);

/// Per-checkpoint mean of err_sup and err_l2 across runs sharing one checkpoint schedule.
std::vector<Checkpoint> mean_trace(const std::vector<LearnerTrace>& traces);

/// Writes a human-readable report (dimensions, stationary environment
/// distribution, chain verdicts) to `out`.
void run_inspect(const RunConfig& cfg, std::ostream& out);
void run_evaluate(const RunConfig& cfg, std::ostream& log);
void run_solve(const RunConfig& cfg, std::ostream& log);
void run_qlearn(const RunConfig& cfg, std::ostream& log);
void run_simulate(const RunConfig& cfg, std::ostream& log);
void run_wireless(const RunConfig& cfg, std::ostream& log);

/// Dispatches on cfg.command.
void run(const RunConfig& cfg, std::ostream& log);

RunConfig read_manifest(const std::filesystem::path& path);

/// Maps an exception from the library onto the documented exit codes.
int exit_code_for(const std::exception& error);

}  // namespace sns::experiment
