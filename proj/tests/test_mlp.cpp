#include <catch_amalgamated.hpp>

#include <cmath>

#include "lqw/mlp.hpp"
#include "lqw/random.hpp"
#include "oracles.hpp"

using Catch::Approx;

namespace {

lqw::MlpWeights random_weights(lqw::Rng& rng, double scale)
{
    std::array<double, lqw::MlpWeights::size> v{};
    for (auto& x : v) {
        x = lqw::uniform_real(rng, -scale, scale);
    }
    return lqw::MlpWeights::unflatten(v);
}

} // namespace

TEST_CASE("forward pass", "[mlp]")
{
    const lqw::MlpWeights zero{};
    for (const auto& s : lqw::xor_dataset) {
        CHECK(lqw::forward(zero, s.input) == 0.5);
    }

    lqw::MlpWeights saturated{};
    saturated.out_b = 10.0;
    saturated.hidden = {{{3.0, -2.0}, {0.5, 1.0}}};
    for (const auto& s : lqw::xor_dataset) {
        CHECK(lqw::forward(saturated, s.input) == Approx(1.0 / (1.0 + std::exp(-10.0))));
    }

    lqw::MlpWeights bad{};
    bad.out_w[0] = std::nan("");
    CHECK_THROWS_AS(lqw::forward(bad, {0.0, 1.0}), lqw::ParameterError);
    bad.out_w[0] = INFINITY;
    CHECK_THROWS_AS(lqw::forward(bad, {0.0, 1.0}), lqw::ParameterError);
}

TEST_CASE("forward is strictly increasing in the output bias", "[mlp]")
{
    lqw::Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        auto w = random_weights(rng, 3.0);
        for (const auto& s : lqw::xor_dataset) {
            const double before = lqw::forward(w, s.input);
            auto up = w;
            up.out_b += 0.25;
            REQUIRE(lqw::forward(up, s.input) > before);
        }
    }
}

TEST_CASE("solution predicate", "[mlp]")
{
    CHECK_FALSE(lqw::is_solution(lqw::MlpWeights{}, 0.5));

    const auto reference = oracle::logic_gate_xor(20.0);
    CHECK(lqw::is_solution(reference, 0.5));
    CHECK(lqw::is_solution(reference, 0.01));
    for (const auto& s : lqw::xor_dataset) {
        CHECK(std::abs(lqw::forward(reference, s.input) - s.target) < 0.5);
    }

    // Scan gains of the hand-built network for one that is only loosely correct.
    double loose_gain = 0.0;
    for (double g = 0.5; g < 20.0; g += 0.25) {
        const auto w = oracle::logic_gate_xor(g);
        if (lqw::is_solution(w, 0.5) && !lqw::is_solution(w, 0.1)) {
            loose_gain = g;
            break;
        }
    }
    REQUIRE(loose_gain > 0.0);
    CHECK(lqw::is_solution(oracle::logic_gate_xor(loose_gain), 0.5));
    CHECK_FALSE(lqw::is_solution(oracle::logic_gate_xor(loose_gain), 0.1));

    // Margin monotonicity.
    lqw::Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const auto w = random_weights(rng, 8.0);
        for (double m1 : {0.05, 0.2, 0.4}) {
            if (lqw::is_solution(w, m1)) {
                REQUIRE(lqw::is_solution(w, m1 + 0.05));
                REQUIRE(lqw::is_solution(w, 0.5));
            }
        }
    }
}

TEST_CASE("backprop reaches an XOR solution from a random start", "[mlp]")
{
    // Some seeds stall in the usual XOR plateau; the reference needs just one that converges.
    bool found = false;
    for (std::uint64_t seed = 1; seed <= 20 && !found; ++seed) {
        lqw::Rng rng(seed);
        const auto start = random_weights(rng, 1.0);
        const auto report = lqw::train_backprop(start, 2.0, 20000, 0.5);
        if (report.converged) {
            found = true;
            CHECK(report.epochs > 1);
            CHECK(lqw::is_solution(report.weights, 0.5));
            for (const auto& s : lqw::xor_dataset) {
                CHECK(std::abs(lqw::forward(report.weights, s.input) - s.target) < 0.5);
            }
        }
    }
    CHECK(found);
}

TEST_CASE("backprop epoch convention", "[mlp]")
{
    const auto report = lqw::train_backprop(oracle::logic_gate_xor(20.0));
    CHECK(report.epochs == 1);
    CHECK(report.converged);
    CHECK(report.weights == oracle::logic_gate_xor(20.0));

    const auto none = lqw::train_backprop(lqw::MlpWeights{}, 0.5, 0, 0.5);
    CHECK_FALSE(none.converged);
    CHECK(none.epochs == 0);

    CHECK_THROWS_AS(lqw::train_backprop(lqw::MlpWeights{}, 0.0), lqw::ParameterError);
}

TEST_CASE("analytic gradient matches finite differences", "[mlp]")
{
    lqw::Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
        const auto w = random_weights(rng, 2.0);
        const auto g = lqw::mse_gradient(w);
        const auto fd = oracle::mse_gradient_fd(w);
        double diff = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            diff += (g[j] - fd[j]) * (g[j] - fd[j]);
            scale += g[j] * g[j];
        }
        REQUIRE(std::sqrt(diff) / std::sqrt(scale) < 1e-5);
    }
}

TEST_CASE("fixed weight generation", "[mlp]")
{
    const auto a = lqw::generate_fixed_weights(17);
    const auto b = lqw::generate_fixed_weights(17);
    CHECK(a == b);
    CHECK_FALSE(a == lqw::generate_fixed_weights(18));

    const auto w = lqw::MlpWeights::assemble(lqw::generate_fixed_weights(99, -3.0, 2.0), 0.0, 0.0);
    const auto flat = w.flatten();
    for (std::size_t i : {0u, 1u, 2u, 3u, 4u, 5u, 8u}) {
        CHECK(flat[i] >= -3.0);
        CHECK(flat[i] < 2.0);
    }
    CHECK(w.out_w == std::array<double, 2>{0.0, 0.0});

    CHECK_THROWS_AS(lqw::generate_fixed_weights(1, 1.0, 1.0), lqw::ParameterError);
    CHECK_THROWS_AS(lqw::generate_fixed_weights(1, 2.0, -2.0), lqw::ParameterError);
}

TEST_CASE("weights JSON", "[mlp]")
{
    lqw::Rng rng(8);
    const auto w = random_weights(rng, 5.0);
    const nlohmann::json j = w;
    CHECK(j.contains("hidden"));
    CHECK(j.contains("hidden_bias"));
    CHECK(j.contains("out_w"));
    CHECK(j.contains("out_b"));
    CHECK(nlohmann::json::parse(j.dump()).get<lqw::MlpWeights>() == w);
}
