#pragma once

/// @file mlp.hpp
/// 2-2-1 multilayer perceptron with logistic activations, trained on XOR.
///
/// The seven weights feeding and biasing the network's hidden layer plus the
/// output bias are drawn at random and kept fixed; the two output-neuron input
/// weights are the ones the walk searches for.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "lqw/errors.hpp"
#include "lqw/random.hpp"

namespace lqw {

struct XorSample {
    std::array<double, 2> input;
    double target;
};

inline constexpr std::array<XorSample, 4> xor_dataset{{
    {{0.0, 0.0}, 0.0},
    {{0.0, 1.0}, 1.0},
    {{1.0, 0.0}, 1.0},
    {{1.0, 1.0}, 0.0},
}};

/// The seven weights that stay fixed during the search.
struct FixedWeights {
    std::array<std::array<double, 2>, 2> hidden{}; ///< hidden[j][i]: input i -> hidden j
    std::array<double, 2> hidden_bias{};
    double out_b = 0.0;

    bool operator==(const FixedWeights&) const = default;
};

struct MlpWeights {
    std::array<std::array<double, 2>, 2> hidden{}; ///< hidden[j][i]: input i -> hidden j
    std::array<double, 2> hidden_bias{};
    std::array<double, 2> out_w{}; ///< searched pair
    double out_b = 0.0;

    static constexpr std::size_t size = 9;

    static MlpWeights assemble(const FixedWeights& f, double w1, double w2)
    {
        return MlpWeights{f.hidden, f.hidden_bias, {w1, w2}, f.out_b};
    }

    FixedWeights fixed() const { return FixedWeights{hidden, hidden_bias, out_b}; }

    /// Flat order: hidden row-major, hidden_bias, out_w, out_b.
    std::array<double, size> flatten() const
    {
        return {hidden[0][0], hidden[0][1], hidden[1][0], hidden[1][1], hidden_bias[0], hidden_bias[1], out_w[0], out_w[1], out_b};
    }

    static MlpWeights unflatten(const std::array<double, size>& v)
    {
        return MlpWeights{{{{v[0], v[1]}, {v[2], v[3]}}}, {v[4], v[5]}, {v[6], v[7]}, v[8]};
    }

    bool finite() const
    {
        for (double v : flatten()) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
        return true;
    }

    bool operator==(const MlpWeights&) const = default;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

namespace detail {

struct Activations {
    std::array<double, 2> hidden;
    double output;
};

inline Activations activate(const MlpWeights& w, const std::array<double, 2>& x)
{
    Activations a{};
    for (std::size_t j = 0; j < 2; ++j) {
        a.hidden[j] = sigmoid(w.hidden_bias[j] + w.hidden[j][0] * x[0] + w.hidden[j][1] * x[1]);
    }
    a.output = sigmoid(w.out_b + w.out_w[0] * a.hidden[0] + w.out_w[1] * a.hidden[1]);
    return a;
}

} // namespace detail

inline double forward(const MlpWeights& w, const std::array<double, 2>& input)
{
    if (!w.finite()) {
        throw ParameterError("forward: weights must be finite");
    }
    return detail::activate(w, input).output;
}

/// Every XOR pattern reproduced with |output - target| < margin (strict).
inline bool is_solution(const MlpWeights& w, double margin = 0.5)
{
    for (const auto& s : xor_dataset) {
        if (!(std::abs(forward(w, s.input) - s.target) < margin)) {
            return false;
        }
    }
    return true;
}

/// Mean squared error over the four patterns.
inline double mean_squared_error(const MlpWeights& w)
{
    double e = 0.0;
    for (const auto& s : xor_dataset) {
        const double d = forward(w, s.input) - s.target;
        e += d * d;
    }
    return e / static_cast<double>(xor_dataset.size());
}

/// Analytic gradient of mean_squared_error, in MlpWeights::flatten order.
inline std::array<double, MlpWeights::size> mse_gradient(const MlpWeights& w)
{
    std::array<double, MlpWeights::size> g{};
    const double scale = 2.0 / static_cast<double>(xor_dataset.size());
    for (const auto& s : xor_dataset) {
        const auto a = detail::activate(w, s.input);
        const double delta_out = scale * (a.output - s.target) * a.output * (1.0 - a.output);
        for (std::size_t j = 0; j < 2; ++j) {
            const double delta_hidden = delta_out * w.out_w[j] * a.hidden[j] * (1.0 - a.hidden[j]);
            g[2 * j] += delta_hidden * s.input[0];
            g[2 * j + 1] += delta_hidden * s.input[1];
            g[4 + j] += delta_hidden;
            g[6 + j] += delta_out * a.hidden[j];
        }
        g[8] += delta_out;
    }
    return g;
}

/// Seven values uniform on [lo, hi), assigned in order to hidden (row-major),
/// hidden_bias, out_b.
inline FixedWeights generate_fixed_weights(std::uint64_t seed, double lo = -1.0, double hi = 1.0)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ParameterError("generate_fixed_weights: need a finite interval with lo < hi");
    }
    Rng rng = make_rng(seed);
    FixedWeights f;
    for (auto& row : f.hidden) {
        for (auto& v : row) {
            v = uniform_real(rng, lo, hi);
        }
    }
    for (auto& b : f.hidden_bias) {
        b = uniform_real(rng, lo, hi);
    }
    f.out_b = uniform_real(rng, lo, hi);
    return f;
}

struct TrainReport {
    std::uint64_t epochs = 0;
    double final_error = 0.0;
    bool converged = false;
    MlpWeights weights;
};

/// Full-batch gradient descent on all nine weights. Epoch e evaluates the
/// network first and stops there if it already solves XOR, so weights that
/// solve it from the start report epochs = 1.
inline TrainReport train_backprop(MlpWeights w, double rate = 0.5, std::uint64_t max_epochs = 10000, double margin = 0.5)
{
    if (!(rate > 0.0)) {
        throw ParameterError("train_backprop: learning rate must be positive");
    }
    for (std::uint64_t epoch = 1; epoch <= max_epochs; ++epoch) {
        if (is_solution(w, margin)) {
            return {epoch, mean_squared_error(w), true, w};
        }
        auto flat = w.flatten();
        const auto g = mse_gradient(w);
        for (std::size_t i = 0; i < flat.size(); ++i) {
            flat[i] -= rate * g[i];
        }
        w = MlpWeights::unflatten(flat);
    }
    return {max_epochs, mean_squared_error(w), is_solution(w, margin), w};
}

inline void to_json(nlohmann::json& j, const MlpWeights& w)
{
    j = nlohmann::json{{"hidden", w.hidden}, {"hidden_bias", w.hidden_bias}, {"out_w", w.out_w}, {"out_b", w.out_b}};
}

inline void from_json(const nlohmann::json& j, MlpWeights& w)
{
    j.at("hidden").get_to(w.hidden);
    j.at("hidden_bias").get_to(w.hidden_bias);
    j.at("out_w").get_to(w.out_w);
    j.at("out_b").get_to(w.out_b);
}

inline void to_json(nlohmann::json& j, const FixedWeights& f)
{
    j = nlohmann::json{{"hidden", f.hidden}, {"hidden_bias", f.hidden_bias}, {"out_b", f.out_b}};
}

inline void from_json(const nlohmann::json& j, FixedWeights& f)
{
    j.at("hidden").get_to(f.hidden);
    j.at("hidden_bias").get_to(f.hidden_bias);
    j.at("out_b").get_to(f.out_b);
}

inline void to_json(nlohmann::json& j, const TrainReport& r)
{
    j = nlohmann::json{{"epochs", r.epochs}, {"final_error", r.final_error}, {"converged", r.converged}};
}

} // namespace lqw
