#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "prlab/agent.hpp"
#include "prlab/cartpole.hpp"
#include "prlab/rehearsal.hpp"
#include "prlab/stats.hpp"

namespace prlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    PhysicsParams physics;
    AgentHyperparams hyper;
    RehearsalConfig rehearsal;
    int hidden_width = 16;
    int episodes = 3000;
    int step_cap = 100000;
    std::uint32_t seed = 1;
    std::string label;
};

void validate(const RunConfig& config);

struct RunRecord {
    RunConfig config;
    std::vector<int> steps_per_episode;
    bool diverged = false;
    double wall_time = 0.0;  // seconds
};

RunRecord run_experiment(const RunConfig& config);

struct StrategySummary {
    std::string label;
    double mean = 0.0;
    double variance = 0.0;
    std::vector<int> all_steps;             // concatenated over seeds, seed-major
    std::vector<double> mean_per_episode;   // averaged across seeds
    std::vector<double> tendency_curve;     // tendency of mean_per_episode
    bool any_diverged = false;
};

struct ComparisonTable {
    std::vector<StrategySummary> strategies;
    std::vector<std::vector<TTestResult>> pairwise;  // t_test(strategy i, strategy j)
};

/// Runs every (config, seed) pair; pairwise t-tests use the concatenated raw
/// per-episode step counts.
ComparisonTable compare_strategies(const std::vector<RunConfig>& configs,
                                   const std::vector<std::uint32_t>& seeds);

/// Flat key/value config file with [physics], [agent], [rehearsal] and [run]
/// sections. Missing keys keep their defaults.
RunConfig load_run_config(const std::string& path);

void write_csv(const RunRecord& record, const std::string& path);
void write_csv(const ComparisonTable& table, const std::string& path);
void write_series_csv(const std::vector<double>& values, const std::string& value_header,
                      const std::string& path);

/// Reads the `episode,steps` schema written for a RunRecord.
std::vector<int> read_steps_csv(const std::string& path);

std::string summary_text(const RunRecord& record);
std::string summary_text(const ComparisonTable& table);

}  // namespace prlab
