#include "prlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "prlab/encoding.hpp"
#include "prlab/rng.hpp"

namespace prlab {

namespace {

// Shortest decimal form that round-trips to the same double.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    if (std::strtod(buf, nullptr) != v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
    }
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("invalid numeric value for '" + key + "': " + value);
    }
    return v;
}

long parse_long(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("invalid integer value for '" + key + "': " + value);
    }
    return v;
}

void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
    if (section == "physics") {
        PhysicsParams& p = cfg.physics;
        if (key == "gravity") p.gravity = parse_double(key, value);
        else if (key == "cart_mass") p.cart_mass = parse_double(key, value);
        else if (key == "pole_mass") p.pole_mass = parse_double(key, value);
        else if (key == "pole_half_length") p.pole_half_length = parse_double(key, value);
        else if (key == "force_magnitude") p.force_magnitude = parse_double(key, value);
        else if (key == "track_half_width") p.track_half_width = parse_double(key, value);
        else if (key == "fail_angle") p.fail_angle = parse_double(key, value);
        else if (key == "timestep") p.timestep = parse_double(key, value);
        else if (key == "friction_cart") p.friction_cart = parse_double(key, value);
        else if (key == "friction_pole") p.friction_pole = parse_double(key, value);
        else throw ConfigError("unknown key 'physics." + key + "'");
    } else if (section == "agent") {
        AgentHyperparams& h = cfg.hyper;
        if (key == "alpha") h.alpha = parse_double(key, value);
        else if (key == "beta") h.beta = parse_double(key, value);
        else if (key == "gamma") h.gamma = parse_double(key, value);
        else if (key == "tau") h.tau = parse_double(key, value);
        else throw ConfigError("unknown key 'agent." + key + "'");
    } else if (section == "rehearsal") {
        RehearsalConfig& r = cfg.rehearsal;
        if (key == "mode") {
            try {
                r.mode = parse_rehearsal_mode(value);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        } else if (key == "pr") r.pr = static_cast<int>(parse_long(key, value));
        else if (key == "reinit_period") r.reinit_period = static_cast<int>(parse_long(key, value));
        else if (key == "batch_iterations")
            r.batch_iterations = static_cast<int>(parse_long(key, value));
        else throw ConfigError("unknown key 'rehearsal." + key + "'");
    } else if (section == "run") {
        if (key == "hidden_width") cfg.hidden_width = static_cast<int>(parse_long(key, value));
        else if (key == "episodes") cfg.episodes = static_cast<int>(parse_long(key, value));
        else if (key == "step_cap") cfg.step_cap = static_cast<int>(parse_long(key, value));
        else if (key == "seed") cfg.seed = static_cast<std::uint32_t>(parse_long(key, value));
        else if (key == "label") cfg.label = value;
        else throw ConfigError("unknown key 'run." + key + "'");
    } else {
        throw ConfigError("unknown section '" + section + "'");
    }
}

}  // namespace

void validate(const RunConfig& cfg) {
    try {
        validate(cfg.physics);
        validate(cfg.hyper);
        validate(cfg.rehearsal);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.hidden_width < 1) throw ConfigError("run.hidden_width must be >= 1");
    if (cfg.episodes < 1) throw ConfigError("run.episodes must be >= 1");
    if (cfg.step_cap < 1) throw ConfigError("run.step_cap must be >= 1");
}

RunRecord run_experiment(const RunConfig& cfg) {
    validate(cfg);
    const auto start_time = std::chrono::steady_clock::now();

    RunRecord record;
    record.config = cfg;
    record.steps_per_episode.reserve(cfg.episodes);

    AgentState agent =
        make_agent(cfg.hidden_width, cfg.hyper, static_cast<std::uint32_t>(mix_seed(cfg.seed, 100)));
    RehearsalState rehearsal = make_rehearsal_state(
        agent, cfg.rehearsal, static_cast<std::uint32_t>(mix_seed(cfg.seed, 200)));
    RehearsalState* rs = cfg.rehearsal.mode == RehearsalMode::None ? nullptr : &rehearsal;

    bool aborted = false;
    for (int ep = 0; ep < cfg.episodes; ++ep) {
        if (aborted) {
            record.steps_per_episode.push_back(1);
            continue;
        }
        const auto reset_seed = static_cast<std::uint32_t>(mix_seed(cfg.seed, 1000 + ep));
        int steps = 0;
        try {
            steps = run_episode(agent, reset_state(reset_seed), cfg.physics, cfg.step_cap, rs);
        } catch (const std::invalid_argument&) {
            // Weights blew past double range; freeze the run as diverged.
            record.diverged = true;
            aborted = true;
            record.steps_per_episode.push_back(1);
            continue;
        }
        record.steps_per_episode.push_back(steps);
        if (rs != nullptr) {
            maintain(rs->actor_set, agent.actor, rs->config, rs->rng);
            maintain(rs->critic_set, agent.critic, rs->config, rs->rng);
        }
        if (max_abs_weight(agent.actor) > 1e12 || max_abs_weight(agent.critic) > 1e12) {
            record.diverged = true;
        }
    }

    record.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return record;
}

ComparisonTable compare_strategies(const std::vector<RunConfig>& configs,
                                   const std::vector<std::uint32_t>& seeds) {
    if (configs.size() < 2) throw ConfigError("compare needs at least 2 configurations");
    if (seeds.size() < 2) throw ConfigError("compare needs at least 2 seeds");
    for (const RunConfig& cfg : configs) validate(cfg);

    struct Job {
        std::size_t config_index;
        std::uint32_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < configs.size(); ++c)
        for (std::uint32_t s : seeds) jobs.push_back({c, s});

    std::vector<RunRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            RunConfig cfg = configs[jobs[i].config_index];
            cfg.seed = jobs[i].seed;
            records[i] = run_experiment(cfg);
        }
    };
    const unsigned n_threads =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(jobs.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    ComparisonTable table;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        StrategySummary s;
        s.label = configs[c].label.empty() ? to_string(configs[c].rehearsal.mode)
                                           : configs[c].label;
        const int episodes = configs[c].episodes;
        s.mean_per_episode.assign(episodes, 0.0);
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].config_index != c) continue;
            const RunRecord& r = records[i];
            s.all_steps.insert(s.all_steps.end(), r.steps_per_episode.begin(),
                               r.steps_per_episode.end());
            for (int e = 0; e < episodes; ++e) s.mean_per_episode[e] += r.steps_per_episode[e];
            s.any_diverged = s.any_diverged || r.diverged;
        }
        for (double& v : s.mean_per_episode) v /= static_cast<double>(seeds.size());
        std::vector<double> as_doubles(s.all_steps.begin(), s.all_steps.end());
        s.mean = mean_of(as_doubles);
        s.variance = sample_variance(as_doubles);
        if (static_cast<int>(s.mean_per_episode.size()) > 100) {
            s.tendency_curve = tendency(s.mean_per_episode, 100);
        }
        table.strategies.push_back(std::move(s));
    }

    table.pairwise.assign(table.strategies.size(),
                          std::vector<TTestResult>(table.strategies.size()));
    for (std::size_t i = 0; i < table.strategies.size(); ++i) {
        for (std::size_t j = 0; j < table.strategies.size(); ++j) {
            if (i == j) continue;
            std::vector<double> a(table.strategies[i].all_steps.begin(),
                                  table.strategies[i].all_steps.end());
            std::vector<double> b(table.strategies[j].all_steps.begin(),
                                  table.strategies[j].all_steps.end());
            table.pairwise[i][j] = t_test(a, b);
        }
    }
    return table;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": key '" + key + "' outside any section");
        }
        apply_key(cfg, section, key, value);
    }
    return cfg;
}

void write_csv(const RunRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << "episode,steps\n";
    for (std::size_t i = 0; i < record.steps_per_episode.size(); ++i) {
        out << (i + 1) << ',' << record.steps_per_episode[i] << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_csv(const ComparisonTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << "episode";
    for (const StrategySummary& s : table.strategies) out << ',' << s.label;
    out << '\n';
    std::size_t episodes = 0;
    for (const StrategySummary& s : table.strategies) {
        episodes = std::max(episodes, s.mean_per_episode.size());
    }
    for (std::size_t e = 0; e < episodes; ++e) {
        out << (e + 1);
        for (const StrategySummary& s : table.strategies) {
            out << ',';
            if (e < s.mean_per_episode.size()) out << fmt_double(s.mean_per_episode[e]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_series_csv(const std::vector<double>& values, const std::string& value_header,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << "episode," << value_header << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i + 1) << ',' << fmt_double(values[i]) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<int> read_steps_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<int> steps;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV: " + path);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected episode,steps");
        }
        steps.push_back(static_cast<int>(parse_long("steps", trim(line.substr(comma + 1)))));
    }
    return steps;
}

std::string summary_text(const RunRecord& record) {
    std::vector<double> steps(record.steps_per_episode.begin(), record.steps_per_episode.end());
    std::ostringstream os;
    os << "label=" << (record.config.label.empty() ? to_string(record.config.rehearsal.mode)
                                                   : record.config.label)
       << " episodes=" << steps.size() << " mean=" << fmt_double(mean_of(steps));
    if (steps.size() > 1) os << " variance=" << fmt_double(sample_variance(steps));
    os << " diverged=" << (record.diverged ? "yes" : "no");
    return os.str();
}

std::string summary_text(const ComparisonTable& table) {
    std::ostringstream os;
    for (const StrategySummary& s : table.strategies) {
        os << s.label << " mean=" << fmt_double(s.mean) << " variance=" << fmt_double(s.variance)
           << (s.any_diverged ? " diverged=yes" : "") << '\n';
    }
    for (std::size_t i = 0; i < table.strategies.size(); ++i) {
        for (std::size_t j = i + 1; j < table.strategies.size(); ++j) {
            const TTestResult& r = table.pairwise[i][j];
            os << "t(" << table.strategies[i].label << ", " << table.strategies[j].label
               << ") = " << fmt_double(r.t_stat) << " dof=" << r.dof
               << (r.significant_one_tail_05 ? " significant" : " not-significant") << '\n';
        }
    }
    return os.str();
}

}  // namespace prlab
