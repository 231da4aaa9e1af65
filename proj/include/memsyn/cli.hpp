/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memsyn/config.hpp"
#include "memsyn/csv.hpp"
#include "memsyn/manifest.hpp"
#include "memsyn/tasks.hpp"
#include "memsyn/variability.hpp"

namespace memsyn {

namespace cli_detail {

/// Run fn(i) for i in [0, n) on up to `threads` workers; results land in
/// submission order, so serial and parallel execution emit identical files.
template <typename Fn>
auto run_indexed(std::size_t n, int threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{0}))> {
    using Result = decltype(fn(std::size_t{0}));
    std::vector<Result> results(n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::future<Result>> futures;
    futures.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        futures.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
    for (std::size_t i = 0; i < n; ++i) results[i] = futures[i].get();
    return results;
}

struct RunContext {
    AppConfig config;
    std::string subcommand;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::string path(const std::string& name) const {
        std::filesystem::create_directories(config.out_dir);
        return (std::filesystem::path(config.out_dir) / name).string();
    }

    void emit(const CsvTable& table, const std::string& name) {
        const std::string p = path(name);
        write_csv(table, p);
        outputs.push_back(name);
    }

    void finish(const std::vector<std::uint64_t>& seeds) {
        RunManifest m;
        m.subcommand = subcommand;
        m.config_text = emit_config(config);
        m.seeds = seeds;
        m.outputs = outputs;
        m.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(m, path("manifest.json"));
    }
};

inline std::vector<std::uint64_t> seed_list(std::uint64_t base, std::size_t n) {
    std::vector<std::uint64_t> seeds(n);
    for (std::size_t i = 0; i < n; ++i) seeds[i] = base + i;
    return seeds;
}

inline CsvTable events_table(const std::vector<SpikeEvent>& events) {
    CsvTable table;
    table.header = {"time_s", "source", "kind"};
    for (const auto& ev : events) {
        const char* kind = ev.kind == SpikeKind::input     ? "input"
                           : ev.kind == SpikeKind::teacher ? "teacher"
                                                           : "output";
        table.add_row({ev.time, static_cast<long long>(ev.source), std::string(kind)});
    }
    return table;
}

// --- subcommand bodies ------------------------------------------------------

inline void cmd_circuit_sweep(RunContext& ctx) {
    const AppConfig& c = ctx.config;
    c.circuit.validate();

    // Differential sweep: r_pos ascends, r_neg descends over the same range.
    CsvTable sweep;
    sweep.header = {"r_pos_ohm", "r_neg_ohm", "v_s_v", "i_pos_a", "i_neg_a"};
    for (double v_s : c.sweep_v_s) {
        CircuitParams p = c.circuit;
        p.v_s = v_s;
        for (std::size_t k = 0; k < c.sweep_points; ++k) {
            const double f = static_cast<double>(k) / static_cast<double>(c.sweep_points - 1);
            const double r_pos = c.sweep_r_min + f * (c.sweep_r_max - c.sweep_r_min);
            const double r_neg = c.sweep_r_max - f * (c.sweep_r_max - c.sweep_r_min);
            const ReadResult r = read_synapse({DeviceState{r_pos}, DeviceState{r_neg}}, p);
            sweep.add_row({r_pos, r_neg, v_s, r.i_pos, r.i_neg});
        }
    }
    ctx.emit(sweep, "circuit_sweep.csv");

    // Branch current vs resistance, exact and linearized.
    CsvTable branch;
    branch.header = {"r_ohm", "v_s_v", "i_exact_a", "i_linear_a"};
    for (double v_s : c.sweep_v_s) {
        CircuitParams p = c.circuit;
        p.v_s = v_s;
        for (std::size_t k = 0; k < c.branch_points; ++k) {
            const double f = static_cast<double>(k) / static_cast<double>(c.branch_points - 1);
            const double r = c.sweep_r_min * std::pow(c.sweep_r_max / c.sweep_r_min, f);
            branch.add_row({r, v_s, branch_current_exact(r, p), branch_current_linear(r, p)});
        }
    }
    ctx.emit(branch, "branch_current.csv");
    ctx.finish({ctx.config.seed});
}

inline void cmd_variability(RunContext& ctx) {
    const AppConfig& c = ctx.config;
    const DeviceParams& device = c.variability_device();

    const auto samples = draw_study_samples(device, c.circuit, c.variability_n, c.seed);
    const VariabilityReport rep = summarize_study(samples);

    CsvTable table;
    table.header = {"kind", "r_high_ohm", "r_low_ohm", "delta_r_ohm", "i_pos_a", "i_neg_a",
                    "delta_i_a", "cv_delta_r", "cv_delta_i", "mean_delta_r_ohm",
                    "std_delta_r_ohm", "mean_delta_i_a", "std_delta_i_a"};
    for (const auto& s : samples)
        table.add_row({std::string("sample"), s.r_high_ohm, s.r_low_ohm,
                       s.r_high_ohm - s.r_low_ohm, s.i_pos_a, s.i_neg_a, s.i_pos_a - s.i_neg_a,
                       std::string(), std::string(), std::string(), std::string(), std::string(),
                       std::string()});
    table.add_row({std::string("summary"), std::string(), std::string(), std::string(),
                   std::string(), std::string(), std::string(), rep.cv_resistance_diff,
                   rep.cv_current_diff, rep.mean_resistance_diff, rep.std_resistance_diff,
                   rep.mean_current_diff, rep.std_current_diff});
    ctx.emit(table, "variability.csv");

    // Ratio sweep (one row per state CV, ratio, and seed).
    CsvTable sweep;
    sweep.header = {"state_cv", "ratio", "seed", "cv_delta_r", "cv_delta_i"};
    struct Job {
        double cv;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (double cv : c.sweep_state_cvs)
        for (std::size_t s = 0; s < c.sweep_seeds; ++s) jobs.push_back({cv, c.seed + s});
    const auto rows = run_indexed(jobs.size(), c.threads, [&](std::size_t k) {
        return sweep_ratio(jobs[k].cv, c.sweep_ratios, c.circuit, c.sweep_n, jobs[k].seed);
    });
    for (std::size_t k = 0; k < jobs.size(); ++k)
        for (const auto& row : rows[k])
            sweep.add_row({row.state_cv, row.ratio, static_cast<long long>(jobs[k].seed),
                           row.cv_resistance_diff, row.cv_current_diff});
    ctx.emit(sweep, "variability_sweep.csv");
    ctx.finish({c.seed});
}

inline void cmd_single_pattern(RunContext& ctx) {
    const AppConfig& c = ctx.config;
    const SinglePatternConfig task = c.single_pattern_config();
    const auto seeds = seed_list(c.seed, c.sp_seeds);

    const auto reports = run_indexed(seeds.size(), c.threads, [&](std::size_t i) {
        return run_single_pattern(task, seeds[i]);
    });

    CsvTable grid;
    grid.header = {"seed", "x1", "x2", "rate_a_hz", "rate_b_hz", "strong", "correct"};
    CsvTable summary;
    summary.header = {"seed", "mode", "strong_accuracy", "grid_accuracy"};
    for (const auto& rep : reports) {
        for (const auto& gp : rep.grid) {
            const bool strong = std::abs(gp.x1 - gp.x2) >= task.strong_contrast;
            long long correct = -1;
            if (gp.x1 != gp.x2)
                correct = (gp.x1 > gp.x2 ? gp.rate_a_hz > gp.rate_b_hz
                                         : gp.rate_b_hz > gp.rate_a_hz)
                              ? 1
                              : 0;
            grid.add_row({static_cast<long long>(rep.seed), gp.x1, gp.x2, gp.rate_a_hz,
                          gp.rate_b_hz, static_cast<long long>(strong), correct});
        }
        summary.add_row({static_cast<long long>(rep.seed), c.sp_mode, rep.strong_accuracy,
                         grid_accuracy(rep)});
    }
    ctx.emit(grid, "single_pattern_grid.csv");
    ctx.emit(summary, "single_pattern_summary.csv");

    if (!reports.empty() && !reports.front().weight_snapshots.empty()) {
        CsvTable weights;
        weights.header = {"time_s", "synapse", "weight"};
        for (const auto& snap : reports.front().weight_snapshots)
            weights.add_row({snap.time, static_cast<long long>(snap.synapse), snap.weight});
        ctx.emit(weights, "single_pattern_weights.csv");
    }
    if (!reports.empty() && !reports.front().events.empty())
        ctx.emit(events_table(reports.front().events), "single_pattern_events.csv");
    ctx.finish(seeds);
}

inline void cmd_mnist(RunContext& ctx) {
    const AppConfig& c = ctx.config;
    const MnistConfig task = c.mnist_config();
    const Dataset train_set = load_mnist(c.mn_images, c.mn_labels);
    const Dataset test_set = load_mnist(c.mn_test_images, c.mn_test_labels);
    const auto seeds = seed_list(c.seed, c.mn_seeds);

    const auto reports = run_indexed(seeds.size(), c.threads, [&](std::size_t i) {
        return run_mnist(task, train_set, test_set, seeds[i]);
    });

    CsvTable report;
    report.header = {"seed", "pattern", "true_label", "predicted",
                     "rate_0_hz", "rate_1_hz", "rate_2_hz", "rate_3_hz", "rate_4_hz"};
    CsvTable summary;
    summary.header = {"seed", "n_c", "cv", "mode", "error_rate"};
    for (const auto& rep : reports) {
        for (std::size_t k = 0; k < rep.patterns.size(); ++k) {
            const auto& pr = rep.patterns[k];
            std::vector<CsvValue> row = {static_cast<long long>(rep.seed),
                                         static_cast<long long>(k),
                                         static_cast<long long>(pr.true_label),
                                         static_cast<long long>(pr.predicted)};
            for (double r : pr.rates_hz) row.emplace_back(r);
            report.add_row(std::move(row));
        }
        summary.add_row({static_cast<long long>(rep.seed), static_cast<long long>(c.mn_n_c),
                         c.mn_cv, c.mn_mode, rep.error_rate});
    }
    ctx.emit(report, "mnist_report.csv");
    ctx.emit(summary, "mnist_summary.csv");
    if (!reports.empty() && !reports.front().events.empty())
        ctx.emit(events_table(reports.front().events), "mnist_events.csv");

    // Learned weight images for the first seed.
    if (!reports.empty()) {
        const auto& rep = reports.front();
        for (int cls = 0; cls < task.n_classes; ++cls) {
            const auto grid =
                export_weight_image(rep.final_synapses, rep.n_input_units, task.n_c,
                                    task.image_side, static_cast<std::size_t>(cls));
            CsvTable img;
            for (std::size_t col = 0; col < task.image_side; ++col)
                img.header.push_back("c" + std::to_string(col));
            for (std::size_t r = 0; r < task.image_side; ++r) {
                std::vector<CsvValue> row;
                for (std::size_t col = 0; col < task.image_side; ++col)
                    row.emplace_back(grid[r * task.image_side + col]);
                img.add_row(std::move(row));
            }
            ctx.emit(img, "mnist_weights_class" + std::to_string(cls) + ".csv");
        }
    }
    ctx.finish(seeds);
}

}  // namespace cli_detail

/// Command-line entry point; returns the process exit code.
inline int dispatch(int argc, const char* const* argv) {
    CLI::App app{"Differential memristive synapse simulator"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> threads_flag;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Configuration file (key = value with sections)");
    app.add_option("--seed", seed_flag, "Master seed");
    app.add_option("--out-dir", out_dir, "Output directory (default: MEMSYN_OUT_DIR or '.')");
    app.add_option("--threads", threads_flag, "Worker threads for independent trials");
    app.add_option("--set", overrides, "Override one key, e.g. --set circuit.v_s=0.9V")
        ->take_all();

    auto* sweep = app.add_subcommand("circuit-sweep", "Read-path transfer curves as CSV");
    auto* variability = app.add_subcommand("variability", "Device-to-output variability study");
    auto* single = app.add_subcommand("single-pattern", "Single-pattern classification task");
    auto* mnist = app.add_subcommand("mnist", "Reduced MNIST classification task");
    auto* defaults = app.add_subcommand("emit-defaults", "Print the default configuration");
    for (auto* sub : {sweep, variability, single, mnist, defaults}) sub->fallthrough();

    // Task conveniences (equivalent to --set keys).
    std::optional<std::size_t> sp_n_in, sp_seeds, mn_nc, mn_seeds, mn_ntrain, mn_ntest;
    std::optional<std::string> sp_mode, mn_mode, mn_cv, images, labels, test_images, test_labels;
    single->add_option("--n-in", sp_n_in, "Synapses per input channel");
    single->add_option("--seeds", sp_seeds, "Number of seeds");
    single->add_option("--mode", sp_mode, "binary or high_res");
    mnist->add_option("--n-c", mn_nc, "Synapses per pixel");
    mnist->add_option("--seeds", mn_seeds, "Number of seeds");
    mnist->add_option("--mode", mn_mode, "binary or high_res");
    mnist->add_option("--cv", mn_cv, "Device setting: high or low");
    mnist->add_option("--n-train", mn_ntrain, "Training presentations");
    mnist->add_option("--n-test", mn_ntest, "Test presentations");
    mnist->add_option("--images", images, "Training images (idx)");
    mnist->add_option("--labels", labels, "Training labels (idx)");
    mnist->add_option("--test-images", test_images, "Test images (idx)");
    mnist->add_option("--test-labels", test_labels, "Test labels (idx)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help() << std::endl;
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::endl;
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::cerr << app.help() << std::endl;
        return 2;
    }

    try {
        AppConfig config;
        if (!config_path.empty()) config = load_config_file(config_path, config);
        for (const auto& kv : overrides) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            apply_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed_flag) config.seed = *seed_flag;
        if (threads_flag) config.threads = *threads_flag;
        if (!out_dir.empty())
            config.out_dir = out_dir;
        else if (const char* env = std::getenv("MEMSYN_OUT_DIR"); env && *env)
            config.out_dir = env;

        if (sp_n_in) config.sp_n_in = *sp_n_in;
        if (sp_seeds) config.sp_seeds = *sp_seeds;
        if (sp_mode) config.sp_mode = *sp_mode;
        if (mn_nc) config.mn_n_c = *mn_nc;
        if (mn_seeds) config.mn_seeds = *mn_seeds;
        if (mn_mode) config.mn_mode = *mn_mode;
        if (mn_cv) config.mn_cv = *mn_cv;
        if (mn_ntrain) config.mn_n_train = *mn_ntrain;
        if (mn_ntest) config.mn_n_test = *mn_ntest;
        if (images) config.mn_images = *images;
        if (labels) config.mn_labels = *labels;
        if (test_images) config.mn_test_images = *test_images;
        if (test_labels) config.mn_test_labels = *test_labels;

        if (defaults->parsed()) {
            std::cout << emit_config(config);
            return 0;
        }

        cli_detail::RunContext ctx;
        ctx.config = config;
        if (sweep->parsed()) {
            ctx.subcommand = "circuit-sweep";
            cli_detail::cmd_circuit_sweep(ctx);
        } else if (variability->parsed()) {
            ctx.subcommand = "variability";
            cli_detail::cmd_variability(ctx);
        } else if (single->parsed()) {
            ctx.subcommand = "single-pattern";
            cli_detail::cmd_single_pattern(ctx);
        } else if (mnist->parsed()) {
            ctx.subcommand = "mnist";
            cli_detail::cmd_mnist(ctx);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}

}  // namespace memsyn
