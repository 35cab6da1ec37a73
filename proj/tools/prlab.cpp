#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prlab/experiment.hpp"

namespace {

using prlab::ConfigError;
using prlab::IoError;
using prlab::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

std::vector<std::uint32_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        return {static_cast<std::uint32_t>(std::stoul(text))};
    }
    const unsigned long lo = std::stoul(text.substr(0, dots));
    const unsigned long hi = std::stoul(text.substr(dots + 2));
    if (hi < lo) throw ConfigError("seed range is empty: " + text);
    std::vector<std::uint32_t> seeds;
    for (unsigned long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint32_t>(s));
    return seeds;
}

struct CommonFlags {
    std::string config_path;
    std::string mode;
    std::string out_path;
    std::uint32_t seed = 0;
    int episodes = 0;
    int pr = 0;
    int reinit = 0;
    double force = 0.0;
    bool quiet = false;
};

void add_config_flags(CLI::App* cmd, CommonFlags* f) {
    cmd->add_option("--config", f->config_path, "Run-config file (key/value sections)");
    cmd->add_option("--seed", f->seed, "Run seed");
    cmd->add_option("--episodes", f->episodes, "Number of episodes");
    cmd->add_option("--force", f->force, "Push force magnitude in newtons");
    cmd->add_option("--pr", f->pr, "Pseudoset size");
    cmd->add_option("--reinit", f->reinit, "Pseudoset reinitialization period (episodes)");
    cmd->add_flag("--quiet", f->quiet, "Suppress the summary printed to stdout");
}

RunConfig build_config(const CLI::App* cmd, const CommonFlags& f) {
    RunConfig cfg;
    if (cmd->count("--config")) cfg = prlab::load_run_config(f.config_path);
    if (cmd->count("--seed")) cfg.seed = f.seed;
    if (cmd->count("--episodes")) cfg.episodes = f.episodes;
    if (cmd->count("--force")) cfg.physics.force_magnitude = f.force;
    if (cmd->count("--pr")) cfg.rehearsal.pr = f.pr;
    if (cmd->count("--reinit")) cfg.rehearsal.reinit_period = f.reinit;
    // --mode exists only on run; compare binds its own repeatable option
    const CLI::Option* mode_opt = cmd->get_option_no_throw("--mode");
    if (mode_opt != nullptr && mode_opt->count() > 0 && !f.mode.empty()) {
        cfg.rehearsal.mode = prlab::parse_rehearsal_mode(f.mode);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Actor-critic cart-pole laboratory with pseudorehearsal strategies"};
    app.require_subcommand(1);
    const auto mode_names = CLI::IsMember({"none", "fr-output", "fr-all", "batch"});

    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run one seeded experiment, write episode,steps CSV");
    add_config_flags(run_cmd, &run_flags);
    run_cmd->add_option("--mode", run_flags.mode, "Rehearsal mode")->check(mode_names);
    run_cmd->add_option("--out", run_flags.out_path, "Output CSV path");

    CommonFlags cmp_flags;
    std::vector<std::string> cmp_modes;
    std::string seeds_text = "1..2";
    auto* cmp_cmd =
        app.add_subcommand("compare", "Run strategies over a seed range and report t-tests");
    add_config_flags(cmp_cmd, &cmp_flags);
    cmp_cmd->add_option("--mode", cmp_modes, "Rehearsal mode (repeat per strategy)")
        ->check(mode_names)
        ->expected(-1);
    cmp_cmd->add_option("--seeds", seeds_text, "Seed range n..m");
    cmp_cmd->add_option("--out", cmp_flags.out_path, "Output comparison CSV path");

    CommonFlags base_flags;
    auto* base_cmd = app.add_subcommand("baseline", "Mean free-fall episode length (no control)");
    add_config_flags(base_cmd, &base_flags);

    std::string tend_in, tend_out;
    int tend_window = 100;
    bool tend_min = false, tend_two_point = false, tend_quiet = false;
    auto* tend_cmd = app.add_subcommand("tendency", "Post-process an episode,steps CSV");
    tend_cmd->add_option("input", tend_in, "Input CSV (episode,steps)")->required();
    tend_cmd->add_option("--out", tend_out, "Output CSV path");
    tend_cmd->add_option("--window", tend_window, "Window size");
    tend_cmd->add_flag("--min", tend_min, "Windowed minimum instead of windowed mean");
    tend_cmd->add_flag("--two-point", tend_two_point, "Two-point minimum rule");
    tend_cmd->add_flag("--quiet", tend_quiet, "Suppress stdout output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run_cmd->parsed()) {
            const RunConfig cfg = build_config(run_cmd, run_flags);
            const prlab::RunRecord record = prlab::run_experiment(cfg);
            if (run_cmd->count("--out")) prlab::write_csv(record, run_flags.out_path);
            if (!run_flags.quiet) std::cout << prlab::summary_text(record) << '\n';
        } else if (cmp_cmd->parsed()) {
            if (cmp_modes.size() < 2) {
                throw ConfigError("compare needs at least two --mode values");
            }
            RunConfig base = build_config(cmp_cmd, cmp_flags);
            std::vector<RunConfig> configs;
            for (const std::string& m : cmp_modes) {
                RunConfig cfg = base;
                cfg.rehearsal.mode = prlab::parse_rehearsal_mode(m);
                cfg.label = m;
                configs.push_back(std::move(cfg));
            }
            const auto seeds = parse_seed_range(seeds_text);
            const prlab::ComparisonTable table = prlab::compare_strategies(configs, seeds);
            if (cmp_cmd->count("--out")) prlab::write_csv(table, cmp_flags.out_path);
            if (!cmp_flags.quiet) std::cout << prlab::summary_text(table);
        } else if (base_cmd->parsed()) {
            RunConfig cfg = build_config(base_cmd, base_flags);
            const int episodes = base_cmd->count("--episodes") ? base_flags.episodes : 100;
            const double mean =
                prlab::free_fall_baseline(cfg.physics, cfg.seed, episodes, cfg.step_cap);
            if (!base_flags.quiet) std::cout << "free-fall mean steps: " << mean << '\n';
        } else if (tend_cmd->parsed()) {
            const std::vector<int> steps = prlab::read_steps_csv(tend_in);
            const std::vector<double> series =
                tend_min ? prlab::smoothed_min(steps, tend_window, tend_two_point)
                         : prlab::tendency(steps, tend_window);
            const char* header = tend_min ? "smoothed_min" : "tendency";
            if (tend_cmd->count("--out")) prlab::write_series_csv(series, header, tend_out);
            if (!tend_quiet && !tend_cmd->count("--out")) {
                for (std::size_t i = 0; i < series.size(); ++i) {
                    std::cout << (i + 1) << ',' << series[i] << '\n';
                }
            }
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
