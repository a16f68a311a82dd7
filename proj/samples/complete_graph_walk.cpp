// Prints the class probabilities of the complete-graph walk at its optimal step
// for a few graph sizes.

#include <cstdio>

#include "lqw/lackadaisical.hpp"

int main()
{
    const lqw::GraphParams cases[] = {{262144, 52, 1}, {262144, 19591, 1}, {1048576, 118649, 1}, {4194304, 485095, 1}};
    std::printf("%10s %8s %6s %8s %8s %8s %8s\n", "N", "k", "t", "aa%", "ab%", "ba%", "bb%");
    for (const auto& p : cases) {
        const auto t = lqw::optimal_steps(p);
        const auto probs = lqw::evolve_reduced(lqw::initial_reduced_state(p), t).probabilities();
        std::printf("%10llu %8llu %6llu %8.2f %8.2f %8.2f %8.2f\n", static_cast<unsigned long long>(p.n),
                    static_cast<unsigned long long>(p.k), static_cast<unsigned long long>(t), 100 * probs[0],
                    100 * probs[1], 100 * probs[2], 100 * probs[3]);
    }
}
