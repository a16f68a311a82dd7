// lqw: command-line front end for the walk simulators and the training pipeline.
//
// Exit codes: 0 success, 1 runtime or exhaustion error, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"

namespace {

constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string config_path;
    std::uint64_t steps = 100;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint64_t l = 1;
    std::uint64_t tmax = 0;
    std::uint64_t seed = 42;
    std::uint64_t weight_seed = lqw::fixture_weight_seed;
    std::vector<double> dp{0.05};
    std::vector<std::uint64_t> window{512};
    double margin = 0.5;
    std::uint64_t runs = 1;
    unsigned threads = 1;
    std::string out;
};

nlohmann::json effective(const Settings& s, const std::string& command)
{
    return nlohmann::json{{"command", command}, {"steps", s.steps}, {"n", s.n}, {"k", s.k}, {"l", s.l}, {"tmax", s.tmax},
                          {"seed", s.seed}, {"weight_seed", s.weight_seed}, {"dp", s.dp}, {"window", s.window},
                          {"margin", s.margin}, {"runs", s.runs}, {"threads", s.threads}, {"out", s.out}};
}

/// Fills every option not given on the command line from the config file.
void apply_config(CLI::App& sub, Settings& s)
{
    if (s.config_path.empty()) {
        return;
    }
    std::ifstream in(s.config_path);
    if (!in) {
        throw UsageError("cannot read config file '" + s.config_path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed config file: ") + e.what());
    }
    auto take = [&](const std::string& key, auto& target) {
        const auto* opt = sub.get_option_no_throw("--" + key);
        if ((opt != nullptr && opt->count() > 0) || !j.contains(key)) {
            return;
        }
        try {
            j.at(key).get_to(target);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    };
    take("steps", s.steps);
    take("n", s.n);
    take("k", s.k);
    take("l", s.l);
    take("tmax", s.tmax);
    take("seed", s.seed);
    take("weight-seed", s.weight_seed);
    take("dp", s.dp);
    take("window", s.window);
    take("margin", s.margin);
    take("runs", s.runs);
    take("threads", s.threads);
    take("out", s.out);
}

void add_common(CLI::App* sub, Settings& s)
{
    sub->add_option("--config", s.config_path, "JSON file with option values; flags take precedence");
    sub->add_option("--out", s.out, "Output file (or directory for tables/train)");
    sub->add_option("--threads", s.threads, "Worker threads for solution scans")->check(CLI::PositiveNumber);
}

void require(bool ok, const char* what)
{
    if (!ok) {
        throw UsageError(what);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lackadaisical quantum walk weight search for a 2-2-1 XOR network"};
    app.require_subcommand(1);
    Settings s;

    auto* walk1d = app.add_subcommand("walk1d", "1D Hadamard walk distribution as CSV");
    walk1d->add_option("--steps", s.steps, "Walk steps");
    add_common(walk1d, s);

    auto* walk2d = app.add_subcommand("walk2d", "2D Hadamard walk distribution as CSV");
    walk2d->add_option("--steps", s.steps, "Walk steps");
    add_common(walk2d, s);

    auto* complete = app.add_subcommand("complete-walk", "Class probabilities of the complete-graph walk per step");
    complete->add_option("--n", s.n, "Vertex count N");
    complete->add_option("--k", s.k, "Marked vertex count k");
    complete->add_option("--l", s.l, "Self-loops per vertex (only 1 is simulated)");
    complete->add_option("--tmax", s.tmax, "Last step written (default: 3 x optimal steps)");
    add_common(complete, s);

    auto* tables = app.add_subcommand("tables", "Measurement tables and solution-count table as CSV");
    tables->add_option("--weight-seed", s.weight_seed, "Seed of the fixed network weights");
    tables->add_option("--margin", s.margin, "Solution margin");
    add_common(tables, s);

    auto* train = app.add_subcommand("train", "Run the training procedure");
    train->add_option("--seed", s.seed, "Master seed of measurement streams");
    train->add_option("--weight-seed", s.weight_seed, "Seed of the fixed network weights");
    train->add_option("--dp", s.dp, "Weight increments to try (largest first)");
    train->add_option("--window", s.window, "Square window extents to try (smallest first)");
    train->add_option("--margin", s.margin, "Solution margin in (0, 0.5]");
    train->add_option("--runs", s.runs, "Independent runs")->check(CLI::PositiveNumber);
    add_common(train, s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        apply_config(*sub, s);
        require(!s.out.empty(), "--out is required");
        std::cout << "config: " << effective(s, command).dump() << '\n';

        if (sub == walk1d) {
            lqw::cli::cmd_walk1d(s.steps, s.out, std::cout);
        } else if (sub == walk2d) {
            lqw::cli::cmd_walk2d(s.steps, s.out, std::cout);
        } else if (sub == complete) {
            require(s.n > 0 && s.k > 0, "--n and --k are required");
            const lqw::GraphParams p{s.n, s.k, s.l};
            try {
                p.validate_simulable();
            } catch (const lqw::ParameterError& e) {
                throw UsageError(e.what());
            }
            const auto tmax = complete->get_option("--tmax")->count() > 0 || s.tmax > 0 ? s.tmax : 3 * lqw::optimal_steps(p);
            lqw::cli::cmd_complete_walk(p, tmax, s.out, std::cout);
        } else if (sub == tables) {
            require(s.margin > 0.0 && s.margin <= 0.5, "--margin must lie in (0, 0.5]");
            lqw::cli::cmd_tables(s.out, lqw::generate_fixed_weights(s.weight_seed), s.margin, s.threads, std::cout);
        } else if (sub == train) {
            lqw::TrainingConfig cfg;
            cfg.seed = s.seed;
            cfg.weight_seed = s.weight_seed;
            cfg.dp_schedule = s.dp;
            cfg.window_schedule = s.window;
            cfg.margin = s.margin;
            cfg.threads = s.threads;
            try {
                cfg.validate();
            } catch (const lqw::ParameterError& e) {
                throw UsageError(e.what());
            }
            lqw::cli::cmd_train(cfg, s.runs, s.out, std::cout);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << sub->help();
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return 0;
}
