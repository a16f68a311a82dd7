#pragma once

// Subcommand bodies of the lqw command-line tool. Kept apart from argument
// parsing so tests can call them directly.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lqw/lqw.hpp"

namespace lqw::cli {

/// Window extents and k values of the reproduced measurement tables: for each
/// window the three k values it was run with.
struct TableSpec {
    int table = 0;
    std::uint64_t window = 0;
    std::array<std::uint64_t, 3> ks{};
};

inline const std::array<TableSpec, 3>& measurement_tables()
{
    static const std::array<TableSpec, 3> specs{{
        {3, 512, {52, 5202, 19591}},
        {4, 1024, {52, 5202, 118649}},
        {5, 2048, {52, 5202, 485095}},
    }};
    return specs;
}

struct TableCell {
    std::uint64_t window = 0;
    GraphParams params;
    std::uint64_t steps = 0;
    ClassProbabilities p{};
};

inline TableCell evaluate_cell(std::uint64_t window, std::uint64_t k)
{
    TableCell c;
    c.window = window;
    c.params = GraphParams{window * window, k, 1};
    c.steps = optimal_steps(c.params);
    c.p = evolve_reduced(initial_reduced_state(c.params), c.steps).probabilities();
    return c;
}

inline void cmd_walk1d(std::uint64_t steps, const std::string& out_path, std::ostream& log)
{
    auto out = csv::open_output(out_path);
    const auto d = distribution(evolve(symmetric_initial_1d(), steps));
    write_csv(out, d);
    log << "walk1d: steps=" << steps << " sites=" << d.entries.size() << " stddev=" << position_stddev(d) << '\n';
}

inline void cmd_walk2d(std::uint64_t steps, const std::string& out_path, std::ostream& log)
{
    auto out = csv::open_output(out_path);
    const auto d = distribution(evolve(symmetric_initial_2d(), steps));
    write_csv(out, d);
    log << "walk2d: steps=" << steps << " sites=" << d.entries.size() << '\n';
}

inline void cmd_complete_walk(const GraphParams& params, std::uint64_t t_max, const std::string& out_path, std::ostream& log)
{
    params.validate_simulable();
    const auto steps = optimal_steps(params);
    const auto rows = success_trajectory(params, t_max);
    auto out = csv::open_output(out_path);
    write_csv(out, std::span<const TrajectoryRow>(rows));

    const auto p = evolve_reduced(initial_reduced_state(params), steps).probabilities();
    log << "complete-walk: N=" << params.n << " k=" << params.k << " l=" << params.l << " optimal_steps=" << steps
        << " (exact " << optimal_steps_exact(params) << ")\n";
    log << "  at optimal step: p_aa=" << 100.0 * p[0] << "% p_ab=" << 100.0 * p[1] << "% p_ba=" << 100.0 * p[2]
        << "% p_bb=" << 100.0 * p[3] << "% success=" << 100.0 * (p[0] + p[1]) << "%\n";
}

/// Writes table<N>.csv for the three measurement tables and table1_shape.csv
/// with solution counts of the given fixed weights.
inline void cmd_tables(const std::string& out_dir, const FixedWeights& fixed, double margin, unsigned threads, std::ostream& log)
{
    std::filesystem::create_directories(out_dir);
    for (const auto& spec : measurement_tables()) {
        const auto path = (std::filesystem::path(out_dir) / ("table" + std::to_string(spec.table) + ".csv")).string();
        auto out = csv::open_output(path);
        out << "window,n,k,steps,aa_pct,ab_pct,ba_pct,bb_pct,success_pct\n";
        for (auto k : spec.ks) {
            const auto c = evaluate_cell(spec.window, k);
            out << c.window << ',' << c.params.n << ',' << c.params.k << ',' << c.steps;
            for (double v : c.p) {
                out << ',' << csv::format_double(100.0 * v);
            }
            out << ',' << csv::format_double(100.0 * (c.p[0] + c.p[1])) << '\n';
            log << "table " << spec.table << " window " << spec.window << " k=" << k << " steps=" << c.steps
                << " success=" << 100.0 * (c.p[0] + c.p[1]) << "%\n";
        }
    }
    const std::vector<std::uint64_t> windows{512, 1024, 2048};
    const std::vector<double> dps{0.05, 0.005, 0.0005};
    const auto counts = solution_count_table(windows, dps, fixed, margin, threads);
    auto out = csv::open_output((std::filesystem::path(out_dir) / "table1_shape.csv").string());
    write_csv(out, std::span<const SolutionCount>(counts));
    for (const auto& c : counts) {
        log << "solutions dp=" << c.dp << " window=" << c.window << " k=" << c.count << '\n';
    }
}

/// Runs `runs` training passes; writes run.json (the first run) and batch.csv
/// into `out_dir`. Throws ExhaustionError when no window holds a solution.
inline BatchSummary cmd_train(const TrainingConfig& cfg, std::uint64_t runs, const std::string& out_dir, std::ostream& log)
{
    // Surface exhaustion before anything is written.
    const auto prep = prepare_search(cfg);
    log << "train: window=" << prep.window.width << "x" << prep.window.height << " dp=" << prep.window.dp
        << " k=" << prep.params.k << " steps=" << prep.steps << '\n';

    const auto summary = run_batch(cfg, runs);
    if (summary.runs.empty()) {
        throw std::runtime_error(summary.errors.empty() ? "no runs completed" : summary.errors.front());
    }
    std::filesystem::create_directories(out_dir);
    {
        auto out = csv::open_output((std::filesystem::path(out_dir) / "run.json").string());
        out << nlohmann::json(summary.runs.front()).dump(2) << '\n';
    }
    {
        auto out = csv::open_output((std::filesystem::path(out_dir) / "batch.csv").string());
        write_batch_csv(out, summary.runs);
    }
    const auto [lo, hi] = summary.success_interval();
    const auto f = summary.class_frequencies();
    log << "train: runs=" << summary.runs.size() << " errors=" << summary.errors.size()
        << " success_rate=" << summary.success_rate() << " 95% CI [" << lo << ", " << hi << "]\n";
    log << "  class frequencies aa=" << f[0] << " ab=" << f[1] << " ba=" << f[2] << " bb=" << f[3] << '\n';
    log << "  successful runs verified in one epoch: " << summary.one_epoch_successes << "/" << summary.successes << '\n';
    return summary;
}

} // namespace lqw::cli
