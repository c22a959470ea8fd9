// Command-line front end: simulate, validate, reproduce-paper, sweep,
// print-config. Exit codes: 0 success, 2 validation failure, 3 numerical
// abort, 1 anything else.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtrack/csv_log.hpp"
#include "qtrack/num_format.hpp"
#include "qtrack/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOther = 1;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> noise_std;
    std::optional<double> duration;
    std::optional<double> dt;

    void apply(qtrack::SimConfig& cfg) const {
        if (seed) cfg.seed = *seed;
        if (noise_std) cfg.noise_std = *noise_std;
        if (duration) cfg.duration = *duration;
        if (dt) cfg.dt = *dt;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--seed", ov.seed, "Override the RNG seed");
    cmd->add_option("--noise-std", ov.noise_std, "Override the measurement noise stddev");
    cmd->add_option("--duration", ov.duration, "Override the run duration [s]");
    cmd->add_option("--dt", ov.dt, "Override the control period [s]");
}

void print_summary(const std::vector<qtrack::SimLogRecord>& log) {
    if (log.empty()) {
        std::cout << "summary: empty run\n";
        return;
    }
    const auto& last = log.back();
    std::size_t clamps_o = 0;
    std::size_t clamps_a = 0;
    for (const auto& r : log) {
        clamps_o += r.clamp_active_o ? 1 : 0;
        clamps_a += r.clamp_active_a ? 1 : 0;
    }
    using qtrack::format_double;
    std::cout << "steps=" << log.size() << " t_final=" << format_double(last.t) << "\n"
              << "final_q_tilde_o_norm=" << format_double(last.q_tilde_o_norm) << "\n"
              << "final_q_tilde_c_norm=" << format_double(last.q_tilde_c_norm) << "\n"
              << "final_omega_track_err=" << format_double((last.omega - last.omega_d).norm())
              << "\n"
              << "final_omega_tilde_o_norm=" << format_double(last.omega_tilde_o_norm) << "\n"
              << "clamp_steps_o=" << clamps_o << " clamp_steps_a=" << clamps_a << "\n";
}

int run_and_write(const qtrack::SimConfig& cfg, const std::string& out_path, bool summary) {
    const auto report = qtrack::validate(cfg);
    std::cerr << report.to_string();
    if (!report.ok()) {
        return kExitValidation;
    }
    try {
        const auto log = qtrack::run(cfg);
        if (!out_path.empty()) {
            qtrack::write_log(log, out_path, cfg);
        }
        if (summary) {
            print_summary(log);
        }
    } catch (const qtrack::NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    if (const double dev = qtrack::verify_kinematics_convention(); dev > 1e-12) {
        std::cerr << "kinematics convention self-test failed (deviation " << dev << ")\n";
        return kExitOther;
    }

    CLI::App app{"Unit-quaternion attitude observer/controller simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    bool summary = false;
    Overrides ov;

    auto* simulate = app.add_subcommand("simulate", "Run the closed loop from a config file");
    simulate->add_option("--config", config_path, "Config file")->required();
    simulate->add_option("--out", out_path, "Output CSV path");
    simulate->add_flag("--summary", summary, "Print final errors and clamp counts");
    add_override_flags(simulate, ov);

    auto* validate_cmd = app.add_subcommand("validate", "Check a config file");
    validate_cmd->add_option("--config", config_path, "Config file")->required();

    auto* repro = app.add_subcommand("reproduce-paper",
                                     "Run the built-in reference experiment");
    repro->add_option("--out", out_path, "Output CSV path");
    repro->add_flag("--summary", summary, "Print final errors and clamp counts");
    add_override_flags(repro, ov);

    std::string out_dir = ".";
    unsigned n_seeds = 1;
    auto* sweep = app.add_subcommand("sweep", "Run several seeds concurrently");
    sweep->add_option("--config", config_path, "Config file")->required();
    sweep->add_option("--seeds", n_seeds, "Number of consecutive seeds")->required();
    sweep->add_option("--out-dir", out_dir, "Directory for per-seed CSV logs");
    add_override_flags(sweep, ov);

    auto* print_cfg = app.add_subcommand("print-config",
                                         "Write the built-in reference config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (print_cfg->parsed()) {
            std::cout << qtrack::canonical_config_text(qtrack::SimConfig{});
            return kExitOk;
        }
        if (validate_cmd->parsed()) {
            const auto cfg = qtrack::parse_config_file(config_path);
            const auto report = qtrack::validate(cfg);
            std::cerr << report.to_string();
            std::cout << (report.ok() ? "valid" : "invalid") << "\n";
            return report.ok() ? kExitOk : kExitValidation;
        }
        if (simulate->parsed() || repro->parsed()) {
            qtrack::SimConfig cfg =
                repro->parsed() ? qtrack::SimConfig{} : qtrack::parse_config_file(config_path);
            ov.apply(cfg);
            return run_and_write(cfg, out_path, summary);
        }
        if (sweep->parsed()) {
            qtrack::SimConfig base = qtrack::parse_config_file(config_path);
            ov.apply(base);
            const auto report = qtrack::validate(base);
            std::cerr << report.to_string();
            if (!report.ok()) {
                return kExitValidation;
            }
            std::filesystem::create_directories(out_dir);

            std::vector<std::future<double>> jobs;
            for (unsigned i = 0; i < n_seeds; ++i) {
                qtrack::SimConfig cfg = base;
                cfg.seed = base.seed + i;
                jobs.push_back(std::async(std::launch::async, [cfg, &out_dir]() {
                    const auto log = qtrack::run(cfg);
                    qtrack::write_log(log, out_dir + "/run_seed" + std::to_string(cfg.seed) +
                                               ".csv",
                                      cfg);
                    double steady = 0.0;
                    std::size_t count = 0;
                    for (const auto& r : log) {
                        if (r.t >= cfg.duration - 5.0) {
                            steady += r.q_tilde_c_norm;
                            ++count;
                        }
                    }
                    return count ? steady / static_cast<double>(count) : 0.0;
                }));
            }
            for (unsigned i = 0; i < n_seeds; ++i) {
                std::cout << "seed=" << base.seed + i
                          << " mean_q_tilde_c_last5s=" << qtrack::format_double(jobs[i].get())
                          << "\n";
            }
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitOther;
}
