#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lqw/sampling.hpp"
#include "lqw/trainer.hpp"

using Catch::Approx;
using lqw::EdgeClass;
using lqw::Window;

namespace {

double tv_distance(const std::vector<double>& p, const std::vector<std::uint64_t>& counts, std::uint64_t draws)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sum += std::abs(static_cast<double>(counts[i]) / static_cast<double>(draws) - p[i]);
    }
    return 0.5 * sum;
}

lqw::MarkedSet first_k(const Window& win, std::uint64_t k, std::uint64_t stride)
{
    lqw::MarkedSet m;
    for (std::uint64_t i = 0; i < k; ++i) {
        m.positions.push_back(win.label_at(i * stride));
    }
    return m;
}

} // namespace

TEST_CASE("roulette wheel edge cases", "[sampling]")
{
    lqw::Rng rng(1);
    const std::vector<double> degenerate{0.0, 0.0, 1.0, 0.0};
    for (int i = 0; i < 1000; ++i) {
        const auto o = lqw::roulette_select(degenerate, rng);
        REQUIRE(o.index == 2);
        REQUIRE(o.probability == 1.0);
    }

    CHECK_THROWS_AS(lqw::RouletteWheel(std::vector<double>{}), lqw::ParameterError);
    CHECK_THROWS_AS(lqw::RouletteWheel(std::vector<double>{0.0, 0.0}), lqw::ParameterError);
    CHECK_THROWS_AS(lqw::RouletteWheel(std::vector<double>{0.5, -0.1, 0.6}), lqw::ParameterError);
    CHECK_THROWS_AS(lqw::RouletteWheel(std::vector<double>{0.5, std::nan("")}), lqw::ParameterError);

    // Unnormalised weights are fine.
    const lqw::RouletteWheel w(std::vector<double>{2.0, 6.0});
    CHECK(w.total() == 8.0);
    const auto o = w.spin(rng);
    CHECK(o.probability == (o.index == 0 ? 0.25 : 0.75));
}

TEST_CASE("fair coin wheel", "[sampling]")
{
    lqw::Rng rng(2);
    const lqw::RouletteWheel wheel(std::vector<double>{0.5, 0.5});
    std::uint64_t zeros = 0;
    constexpr std::uint64_t draws = 1'000'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        zeros += wheel.spin(rng).index == 0 ? 1 : 0;
    }
    CHECK(static_cast<double>(zeros) / draws == Approx(0.5).margin(0.002));
}

TEST_CASE("wheel law on skewed weights", "[sampling]")
{
    lqw::Rng rng(3);
    const std::vector<double> p{0.9339, 0.0321, 0.0332, 0.0008};
    const lqw::RouletteWheel wheel(p);
    std::vector<std::uint64_t> counts(4, 0);
    constexpr std::uint64_t draws = 1'000'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const auto o = wheel.spin(rng);
        REQUIRE(o.probability == Approx(p[o.index] / wheel.total()));
        ++counts[o.index];
    }
    CHECK(tv_distance(p, counts, draws) < 0.01);
    // Roughly 3 sigma on the rare outcome.
    CHECK(static_cast<double>(counts[3]) / draws == Approx(0.0008).margin(0.0001));
}

TEST_CASE("measurement cascade", "[sampling]")
{
    const Window win = Window::square(32, 0.05);
    const auto marked = first_k(win, 7, 113);
    const lqw::GraphParams p{win.vertex_count(), marked.k(), 1};
    const auto s = lqw::evolve_reduced(lqw::initial_reduced_state(p), lqw::optimal_steps(p) / 2);

    lqw::Rng wheel(10), label(11);
    std::vector<std::uint64_t> counts(4, 0);
    std::vector<std::uint64_t> unmarked_hits(win.vertex_count(), 0);
    constexpr std::uint64_t draws = 200'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const auto m = lqw::measure_cascade(s, marked, win, wheel, label);
        ++counts[static_cast<std::size_t>(m.edge_class)];
        REQUIRE(win.contains(m.label));
        REQUIRE(marked.contains(m.label) == lqw::is_success_class(m.edge_class));
        if (!marked.contains(m.label)) {
            ++unmarked_hits[win.vertex_index(m.label)];
        }
    }
    const auto probs = s.probabilities();
    CHECK(tv_distance({probs.begin(), probs.end()}, counts, draws) < 0.01);

    // Unmarked labels are spread over the whole complement, including both ends.
    std::uint64_t covered = 0;
    for (std::uint64_t i = 0; i < win.vertex_count(); ++i) {
        covered += unmarked_hits[i] > 0 ? 1 : 0;
    }
    CHECK(covered == win.vertex_count() - marked.k());
}

TEST_CASE("cascade with a single marked vertex always returns it", "[sampling]")
{
    const Window win = Window::square(4, 0.5);
    lqw::MarkedSet marked;
    marked.positions.push_back({1, -2});
    lqw::ReducedState s{{1.0, 0.0, 0.0, 0.0}, {16, 1, 1}, 0};
    lqw::Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const auto m = lqw::measure_cascade(s, marked, win, rng);
        REQUIRE(m.edge_class == EdgeClass::aa);
        REQUIRE(m.label == lqw::VertexLabel{1, -2});
    }
}

TEST_CASE("cascade determinism and argument checks", "[sampling]")
{
    const Window win = Window::square(16, 0.1);
    const auto marked = first_k(win, 3, 50);
    const auto s = lqw::initial_reduced_state({256, 3, 1});

    lqw::Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) {
        const auto x = lqw::measure_cascade(s, marked, win, a);
        const auto y = lqw::measure_cascade(s, marked, win, b);
        REQUIRE(x.edge_class == y.edge_class);
        REQUIRE(x.label == y.label);
    }
    lqw::Rng rng(1);
    CHECK_THROWS_AS(lqw::measure_cascade(lqw::initial_reduced_state({256, 4, 1}), marked, win, rng), lqw::ParameterError);
    CHECK_THROWS_AS(lqw::measure_cascade(lqw::initial_reduced_state({255, 3, 1}), marked, win, rng), lqw::ParameterError);
}

TEST_CASE("measured labels are marked with the success probability", "[sampling]")
{
    const Window win = Window::square(512, 0.05);
    const auto marked = first_k(win, 52, 4999);
    const lqw::GraphParams p{win.vertex_count(), 52, 1};
    const auto s = lqw::evolve_reduced(lqw::initial_reduced_state(p), lqw::optimal_steps(p));
    const double expected = lqw::success_probability(s);
    REQUIRE(expected > 0.999);

    lqw::Rng wheel(5), label(6);
    std::uint64_t hits = 0;
    constexpr std::uint64_t draws = 100'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        hits += marked.contains(lqw::measure_cascade(s, marked, win, wheel, label).label) ? 1 : 0;
    }
    const double sigma = std::sqrt(expected * (1.0 - expected) / draws);
    CHECK(std::abs(static_cast<double>(hits) / draws - expected) <= 4.0 * sigma + 1e-5);
}
