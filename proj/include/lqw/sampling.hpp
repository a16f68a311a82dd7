#pragma once

/// @file sampling.hpp
/// Measurement simulated by roulette-wheel selection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "lqw/errors.hpp"
#include "lqw/lackadaisical.hpp"
#include "lqw/random.hpp"
#include "lqw/search_space.hpp"

namespace lqw {

struct WheelOutcome {
    std::size_t index = 0;
    double probability = 0.0; ///< weight[index] / sum(weights)
};

/// Cumulative weights of a wheel, validated once and reusable for many spins.
class RouletteWheel {
public:
    explicit RouletteWheel(std::span<const double> weights) : weights_(weights.begin(), weights.end())
    {
        if (weights_.empty()) {
            throw ParameterError("RouletteWheel: no outcomes");
        }
        cumulative_.reserve(weights_.size());
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw ParameterError("RouletteWheel: weights must be finite and non-negative");
            }
            sum += w;
            cumulative_.push_back(sum);
        }
        if (!(sum > 0.0)) {
            throw ParameterError("RouletteWheel: weights sum to zero");
        }
    }

    std::size_t size() const noexcept { return weights_.size(); }
    double total() const noexcept { return cumulative_.back(); }

    WheelOutcome spin(Rng& rng) const
    {
        const double target = uniform01(rng) * total();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        // target < total() always, but rounding in the product can land on it.
        if (it == cumulative_.end()) {
            it = std::prev(it);
            while (weights_[static_cast<std::size_t>(it - cumulative_.begin())] == 0.0) {
                --it;
            }
        }
        const auto i = static_cast<std::size_t>(it - cumulative_.begin());
        return {i, weights_[i] / total()};
    }

private:
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

inline WheelOutcome roulette_select(std::span<const double> weights, Rng& rng)
{
    return RouletteWheel(weights).spin(rng);
}

struct Measurement {
    EdgeClass edge_class = EdgeClass::bb;
    VertexLabel label;
};

/// Two-stage measurement: the edge class by roulette over the four class
/// probabilities, then a vertex label uniformly from the marked set (classes aa,
/// ab) or from its complement in the window (classes ba, bb). The class is
/// drawn from `wheel_rng` and the label from `label_rng`.
inline Measurement measure_cascade(const ReducedState& s, const MarkedSet& marked, const Window& win, Rng& wheel_rng,
                                   Rng& label_rng)
{
    if (marked.k() != s.params.k || win.vertex_count() != s.params.n) {
        throw ParameterError("measure_cascade: marked set or window disagrees with the state's (N, k)");
    }
    const auto probs = s.probabilities();
    const auto cls = static_cast<EdgeClass>(roulette_select(probs, wheel_rng).index);
    Measurement m{cls, {}};
    if (is_success_class(cls)) {
        m.label = marked.positions[uniform_index(label_rng, marked.k())];
        return m;
    }
    // j-th unmarked vertex in index order; marked positions are sorted in the same order.
    std::uint64_t idx = uniform_index(label_rng, win.vertex_count() - marked.k());
    for (const auto& r : marked.positions) {
        if (win.vertex_index(r) <= idx) {
            ++idx;
        } else {
            break;
        }
    }
    m.label = win.label_at(idx);
    return m;
}

/// Both draws from one stream, class first.
inline Measurement measure_cascade(const ReducedState& s, const MarkedSet& marked, const Window& win, Rng& rng)
{
    return measure_cascade(s, marked, win, rng, rng);
}

} // namespace lqw
