#pragma once

/// @file trainer.hpp
/// End-to-end training: count solutions window by window, walk for the
/// prescribed number of steps, measure, and load the measured weight pair into
/// the network.
///
/// Seeding: the fixed weights come from `weight_seed`; everything random after
/// that comes from the master `seed`, split into a wheel stream and a label
/// stream with derive_seed. Run i of a batch uses master seed `seed + i`, so
/// run 0 of a batch is exactly run_training(cfg).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lqw/errors.hpp"
#include "lqw/lackadaisical.hpp"
#include "lqw/mlp.hpp"
#include "lqw/random.hpp"
#include "lqw/sampling.hpp"
#include "lqw/search_space.hpp"

namespace lqw {

/// Fixed-weight seed of the reference network: uniform on [-1, 1), it has
/// solutions in the 512 x 512 window at dp = 0.05.
inline constexpr std::uint64_t fixture_weight_seed = 8080;
/// Solutions of the reference network in that window (strict margin 0.5).
inline constexpr std::uint64_t fixture_marked_count = 311;

struct TrainingConfig {
    std::uint64_t seed = 42;
    std::uint64_t weight_seed = fixture_weight_seed;
    std::optional<FixedWeights> fixed; ///< overrides weight_seed when set
    std::vector<double> dp_schedule{0.05};
    std::vector<std::uint64_t> window_schedule{512};
    double margin = 0.5;
    double weight_lo = -1.0;
    double weight_hi = 1.0;
    double learning_rate = 0.5;
    std::uint64_t max_epochs = 10000;
    unsigned threads = 1;

    void validate() const
    {
        if (dp_schedule.empty() || window_schedule.empty()) {
            throw ParameterError("TrainingConfig: dp and window schedules must be non-empty");
        }
        if (!(margin > 0.0 && margin <= 0.5)) {
            throw ParameterError("TrainingConfig: margin must lie in (0, 0.5]");
        }
        for (double dp : dp_schedule) {
            if (!(dp > 0.0) || !std::isfinite(dp)) {
                throw ParameterError("TrainingConfig: dp values must be positive");
            }
        }
        for (auto w : window_schedule) {
            if (w == 0) {
                throw ParameterError("TrainingConfig: window extents must be positive");
            }
        }
        if (!(learning_rate > 0.0)) {
            throw ParameterError("TrainingConfig: learning rate must be positive");
        }
    }

    FixedWeights fixed_weights() const { return fixed ? *fixed : generate_fixed_weights(weight_seed, weight_lo, weight_hi); }
};

/// Everything up to and including the walk; shared by all runs of a batch.
struct PreparedSearch {
    FixedWeights fixed;
    Window window;
    MarkedSet marked;
    GraphParams params;
    std::uint64_t steps = 0; ///< fixed before the walk starts
    ReducedState evolved;
};

/// Scans windows smallest first and, within a window, dp largest first, until
/// one holds at least one solution; then evolves the walk.
inline PreparedSearch prepare_search(const TrainingConfig& cfg)
{
    cfg.validate();
    const FixedWeights fixed = cfg.fixed_weights();

    auto windows = cfg.window_schedule;
    std::sort(windows.begin(), windows.end());
    auto dps = cfg.dp_schedule;
    std::sort(dps.begin(), dps.end(), std::greater<>{});

    for (auto extent : windows) {
        for (double dp : dps) {
            const auto win = Window::square(extent, dp);
            auto marked = enumerate_marked(win, fixed, cfg.margin, cfg.threads);
            if (marked.k() == 0) {
                continue;
            }
            if (marked.k() == win.vertex_count()) {
                throw ExhaustionError("every vertex of the window solves the task; nothing to search");
            }
            const GraphParams params{win.vertex_count(), marked.k(), 1};
            const std::uint64_t steps = optimal_steps(params);
            auto evolved = evolve_reduced(initial_reduced_state(params), steps);
            return {fixed, win, std::move(marked), params, steps, evolved};
        }
    }
    throw ExhaustionError("no window/dp pair in the schedule contains a solution");
}

struct TrainingRun {
    std::uint64_t seed = 0;
    FixedWeights fixed;
    Window window;
    std::uint64_t k = 0;
    std::uint64_t steps = 0;
    ClassProbabilities class_probabilities{};
    Measurement measured;
    MlpWeights weights;
    TrainReport verification;

    bool success_class() const { return is_success_class(measured.edge_class); }
    bool solved(double margin = 0.5) const { return is_solution(weights, margin); }
};

/// Measurement and verification for one master seed on a prepared search.
inline TrainingRun measure_and_verify(const PreparedSearch& prep, const TrainingConfig& cfg, std::uint64_t seed)
{
    Rng wheel = make_rng(derive_seed(seed, stream::wheel));
    Rng label = make_rng(derive_seed(seed, stream::label));

    TrainingRun run;
    run.seed = seed;
    run.fixed = prep.fixed;
    run.window = prep.window;
    run.k = prep.params.k;
    run.steps = prep.steps;
    run.class_probabilities = prep.evolved.probabilities();
    run.measured = measure_cascade(prep.evolved, prep.marked, prep.window, wheel, label);

    const auto [w1, w2] = vertex_to_weights(prep.window, run.measured.label);
    run.weights = MlpWeights::assemble(prep.fixed, w1, w2);
    if (run.success_class() && !is_solution(run.weights, cfg.margin)) {
        throw std::logic_error("measured a marked vertex whose weights do not solve XOR");
    }
    run.verification = train_backprop(run.weights, cfg.learning_rate, cfg.max_epochs, cfg.margin);
    return run;
}

/// One pass of the training procedure with master seed cfg.seed. A measurement
/// that lands on an unmarked class is reported as is, not retried.
inline TrainingRun run_training(const TrainingConfig& cfg)
{
    return measure_and_verify(prepare_search(cfg), cfg, cfg.seed);
}

/// Repeats run_training until a marked class is measured, at most `attempts` times.
/// Seeds advance as in a batch. Not used for any reported statistics.
inline TrainingRun run_training_until_solved(const TrainingConfig& cfg, std::uint64_t attempts)
{
    const auto prep = prepare_search(cfg);
    TrainingRun run;
    for (std::uint64_t i = 0; i < attempts; ++i) {
        run = measure_and_verify(prep, cfg, cfg.seed + i);
        if (run.success_class()) {
            return run;
        }
    }
    return run;
}

struct BatchSummary {
    std::uint64_t requested = 0;
    std::vector<TrainingRun> runs;
    std::vector<std::string> errors;
    std::array<std::uint64_t, 4> class_counts{};
    std::uint64_t successes = 0;        ///< runs measuring class aa or ab
    std::uint64_t one_epoch_successes = 0; ///< of those, verified with epochs == 1
    double mean_epochs = 0.0;
    std::uint64_t max_epochs = 0;

    double success_rate() const { return runs.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(runs.size()); }

    std::array<double, 4> class_frequencies() const
    {
        std::array<double, 4> f{};
        if (runs.empty()) {
            return f;
        }
        for (std::size_t i = 0; i < 4; ++i) {
            f[i] = static_cast<double>(class_counts[i]) / static_cast<double>(runs.size());
        }
        return f;
    }

    /// Wilson score interval for the success rate at normal quantile z.
    std::pair<double, double> success_interval(double z = 1.96) const
    {
        if (runs.empty()) {
            return {0.0, 1.0};
        }
        const double n = static_cast<double>(runs.size());
        const double p = success_rate();
        const double denom = 1.0 + z * z / n;
        const double centre = (p + z * z / (2.0 * n)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
        return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
    }
};

/// n runs with master seeds cfg.seed, cfg.seed + 1, ...; failures are recorded
/// per run and the batch carries on.
inline BatchSummary run_batch(const TrainingConfig& cfg, std::uint64_t n)
{
    if (n == 0) {
        throw ParameterError("run_batch: need at least one run");
    }
    BatchSummary summary;
    summary.requested = n;
    std::optional<PreparedSearch> prep;
    try {
        prep = prepare_search(cfg);
    } catch (const std::exception& e) {
        summary.errors.assign(n, e.what());
        return summary;
    }
    double epoch_sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        try {
            auto run = measure_and_verify(*prep, cfg, cfg.seed + i);
            ++summary.class_counts[static_cast<std::size_t>(run.measured.edge_class)];
            if (run.success_class()) {
                ++summary.successes;
                if (run.verification.epochs == 1) {
                    ++summary.one_epoch_successes;
                }
            }
            epoch_sum += static_cast<double>(run.verification.epochs);
            summary.max_epochs = std::max(summary.max_epochs, run.verification.epochs);
            summary.runs.push_back(std::move(run));
        } catch (const std::exception& e) {
            summary.errors.emplace_back(e.what());
        }
    }
    if (!summary.runs.empty()) {
        summary.mean_epochs = epoch_sum / static_cast<double>(summary.runs.size());
    }
    return summary;
}

inline void to_json(nlohmann::json& j, const Window& w)
{
    j = nlohmann::json{{"width", w.width}, {"height", w.height}, {"dp", w.dp}};
}

inline void to_json(nlohmann::json& j, const TrainingRun& r)
{
    j = nlohmann::json{
        {"seed", r.seed},
        {"fixed_weights", r.fixed},
        {"window", r.window},
        {"k", r.k},
        {"steps", r.steps},
        {"class_probabilities",
         {{"aa", r.class_probabilities[0]}, {"ab", r.class_probabilities[1]}, {"ba", r.class_probabilities[2]}, {"bb", r.class_probabilities[3]}}},
        {"measured_class", to_string(r.measured.edge_class)},
        {"label", {{"x", r.measured.label.x}, {"y", r.measured.label.y}}},
        {"weights", r.weights},
        {"verification", r.verification},
        {"solved", r.success_class()},
    };
}

inline void write_batch_csv(std::ostream& out, std::span<const TrainingRun> runs)
{
    out << "run,seed,k,steps,class,x,y,w1,w2,epochs,solved\n";
    std::uint64_t i = 0;
    for (const auto& r : runs) {
        out << i++ << ',' << r.seed << ',' << r.k << ',' << r.steps << ',' << to_string(r.measured.edge_class) << ','
            << r.measured.label.x << ',' << r.measured.label.y << ',' << csv::format_double(r.weights.out_w[0]) << ','
            << csv::format_double(r.weights.out_w[1]) << ',' << r.verification.epochs << ',' << (r.success_class() ? 1 : 0)
            << '\n';
    }
}

} // namespace lqw
