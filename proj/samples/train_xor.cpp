// Trains the XOR network once with the default configuration and prints the result.

#include <iostream>

#include "lqw/trainer.hpp"

int main(int argc, char** argv)
{
    lqw::TrainingConfig cfg;
    if (argc > 1) {
        cfg.seed = std::stoull(argv[1]);
    }
    const auto run = lqw::run_training(cfg);
    std::cout << nlohmann::json(run).dump(2) << '\n';
    for (const auto& s : lqw::xor_dataset) {
        std::cout << s.input[0] << " xor " << s.input[1] << " -> " << lqw::forward(run.weights, s.input) << '\n';
    }
    return run.success_class() ? 0 : 1;
}
