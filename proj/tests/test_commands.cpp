#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"

using Catch::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "lqw_test_commands";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

lqw::csv::Table read_table(const fs::path& p)
{
    std::ifstream in(p);
    return lqw::csv::read(in);
}

} // namespace

TEST_CASE("walk1d output", "[cli]")
{
    std::ostringstream log;
    const auto p0 = scratch("w0.csv");
    lqw::cli::cmd_walk1d(0, p0.string(), log);
    const auto t0 = read_table(p0);
    CHECK(t0.header == std::vector<std::string>{"position", "probability"});
    REQUIRE(t0.rows.size() == 1);
    CHECK(t0.rows[0][0] == "0");
    CHECK(lqw::csv::parse_double(t0.rows[0][1]) == Approx(1.0).margin(1e-15));

    const auto p1 = scratch("w1.csv");
    lqw::cli::cmd_walk1d(1, p1.string(), log);
    const auto t1 = read_table(p1);
    REQUIRE(t1.rows.size() == 2);
    CHECK(t1.rows[0][0] == "-1");
    CHECK(t1.rows[1][0] == "1");
    CHECK(lqw::csv::parse_double(t1.rows[0][1]) == Approx(0.5).margin(1e-15));
    CHECK(lqw::csv::parse_double(t1.rows[1][1]) == Approx(0.5).margin(1e-15));

    const auto p100 = scratch("w100.csv");
    lqw::cli::cmd_walk1d(100, p100.string(), log);
    std::ifstream in(p100);
    const auto d = lqw::read_distribution_1d(in);
    CHECK(d.valid(1e-9));
    CHECK(d.entries.size() == 101);
}

TEST_CASE("walk2d output", "[cli]")
{
    std::ostringstream log;
    const auto p = scratch("w2d.csv");
    lqw::cli::cmd_walk2d(10, p.string(), log);
    std::ifstream in(p);
    const auto d = lqw::read_distribution_2d(in);
    CHECK(d.total() == Approx(1.0).margin(1e-12));
    for (const auto& [pos, prob] : d.entries) {
        REQUIRE(prob == Approx(d.at({-pos.first, pos.second})).margin(1e-12));
    }
}

TEST_CASE("complete-walk output", "[cli]")
{
    std::ostringstream log;
    const auto p = scratch("traj.csv");
    lqw::cli::cmd_complete_walk({262144, 52, 1}, 0, p.string(), log);
    const auto t = read_table(p);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == "0");
    CHECK(lqw::csv::parse_double(t.rows[0][5]) == Approx(52.0 / 262144.0));
    CHECK(log.str().find("optimal_steps=111") != std::string::npos);

    lqw::cli::cmd_complete_walk({262144, 52, 1}, 333, p.string(), log);
    CHECK(read_table(p).rows.size() == 334);

    CHECK_THROWS_AS(lqw::cli::cmd_complete_walk({262144, 52, 2}, 10, p.string(), log), lqw::ParameterError);
    CHECK_THROWS(lqw::cli::cmd_complete_walk({16, 1, 1}, 1, (scratch("missing") / "x" / "y.csv").string(), log));
}

TEST_CASE("tables output", "[cli]")
{
    std::ostringstream log;
    const auto dir = scratch("tables");
    lqw::cli::cmd_tables(dir.string(), lqw::generate_fixed_weights(lqw::fixture_weight_seed), 0.5, 1, log);
    for (int n : {3, 4, 5}) {
        const auto t = read_table(dir / ("table" + std::to_string(n) + ".csv"));
        CHECK(t.header.front() == "window");
        REQUIRE(t.rows.size() == 3);
        for (const auto& r : t.rows) {
            double sum = 0.0;
            for (std::size_t c = 4; c < 8; ++c) {
                sum += lqw::csv::parse_double(r[c]);
            }
            REQUIRE(sum == Approx(100.0).margin(1e-6));
            REQUIRE(lqw::csv::parse_double(r[8]) == Approx(lqw::csv::parse_double(r[4]) + lqw::csv::parse_double(r[5])));
        }
    }
    const auto shape = read_table(dir / "table1_shape.csv");
    REQUIRE(shape.rows.size() == 9);
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t w = 1; w < 3; ++w) {
            CHECK(lqw::csv::parse_int(shape.rows[d * 3 + w][2]) >= lqw::csv::parse_int(shape.rows[d * 3 + w - 1][2]));
        }
    }
    CHECK(shape.rows[0][2] == std::to_string(lqw::fixture_marked_count));
}

TEST_CASE("train output is reproducible", "[cli]")
{
    lqw::TrainingConfig cfg;
    cfg.seed = 42;
    std::ostringstream log_a, log_b;
    const auto a = scratch("train_a");
    const auto b = scratch("train_b");
    lqw::cli::cmd_train(cfg, 5, a.string(), log_a);
    lqw::cli::cmd_train(cfg, 5, b.string(), log_b);
    CHECK(slurp(a / "run.json") == slurp(b / "run.json"));
    CHECK(slurp(a / "batch.csv") == slurp(b / "batch.csv"));
    CHECK(log_a.str() == log_b.str());
    CHECK(read_table(a / "batch.csv").rows.size() == 5);

    cfg.window_schedule = {1};
    cfg.margin = 0.01;
    const auto none = scratch("train_none");
    fs::remove_all(none);
    CHECK_THROWS_AS(lqw::cli::cmd_train(cfg, 1, none.string(), log_a), lqw::ExhaustionError);
    CHECK_FALSE(fs::exists(none));
}
