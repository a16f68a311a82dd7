#pragma once

/// @file search_space.hpp
/// Grid windows over the searched weight pair, and the classical count of the
/// grid points whose weights solve XOR.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lqw/csv.hpp"
#include "lqw/errors.hpp"
#include "lqw/mlp.hpp"

namespace lqw {

/// Grid position of a vertex.
struct VertexLabel {
    std::int64_t x = 0;
    std::int64_t y = 0;

    auto operator<=>(const VertexLabel&) const = default;
};

/// A centered width x height grid: x runs over [-(width/2), width - 1 - width/2]
/// (so [-W/2, W/2 - 1] for even W), likewise y. Vertex indices follow the
/// lexicographic (x, y) order.
struct Window {
    std::uint64_t width = 0;
    std::uint64_t height = 0;
    double dp = 0.0; ///< weight increment per grid unit

    static Window square(std::uint64_t extent, double dp) { return Window{extent, extent, dp}; }

    void validate() const
    {
        if (width == 0 || height == 0) {
            throw ParameterError("Window: extent must be positive");
        }
        if (!(dp > 0.0) || !std::isfinite(dp)) {
            throw ParameterError("Window: dp must be a positive finite number");
        }
    }

    std::uint64_t vertex_count() const noexcept { return width * height; }
    std::int64_t x_min() const noexcept { return -static_cast<std::int64_t>(width / 2); }
    std::int64_t x_max() const noexcept { return x_min() + static_cast<std::int64_t>(width) - 1; }
    std::int64_t y_min() const noexcept { return -static_cast<std::int64_t>(height / 2); }
    std::int64_t y_max() const noexcept { return y_min() + static_cast<std::int64_t>(height) - 1; }

    bool contains(const VertexLabel& r) const noexcept
    {
        return r.x >= x_min() && r.x <= x_max() && r.y >= y_min() && r.y <= y_max();
    }

    std::uint64_t vertex_index(const VertexLabel& r) const
    {
        if (!contains(r)) {
            throw RangeError("Window: label outside window");
        }
        return static_cast<std::uint64_t>(r.x - x_min()) * height + static_cast<std::uint64_t>(r.y - y_min());
    }

    VertexLabel label_at(std::uint64_t index) const
    {
        if (index >= vertex_count()) {
            throw RangeError("Window: vertex index out of range");
        }
        return {x_min() + static_cast<std::int64_t>(index / height), y_min() + static_cast<std::int64_t>(index % height)};
    }

    bool operator==(const Window&) const = default;
};

/// (dp * x, dp * y)
inline std::pair<double, double> vertex_to_weights(const Window& win, const VertexLabel& r)
{
    if (!win.contains(r)) {
        throw RangeError("vertex_to_weights: label (" + std::to_string(r.x) + ", " + std::to_string(r.y) + ") outside window");
    }
    return {win.dp * static_cast<double>(r.x), win.dp * static_cast<double>(r.y)};
}

/// Nearest grid label for a weight pair.
inline VertexLabel weights_to_label(const Window& win, double w1, double w2)
{
    return {static_cast<std::int64_t>(std::llround(w1 / win.dp)), static_cast<std::int64_t>(std::llround(w2 / win.dp))};
}

/// Solution labels of one window, sorted lexicographically.
struct MarkedSet {
    std::vector<VertexLabel> positions;

    std::uint64_t k() const noexcept { return positions.size(); }
    bool contains(const VertexLabel& r) const { return std::binary_search(positions.begin(), positions.end(), r); }

    bool operator==(const MarkedSet&) const = default;
};

namespace detail {

/// Marked labels with x in [x_begin, x_end). Evaluates the output neuron with
/// the hidden activations computed once; the arithmetic matches forward().
inline std::vector<VertexLabel> scan_columns(const Window& win, const FixedWeights& fixed, double margin,
                                             std::int64_t x_begin, std::int64_t x_end)
{
    const MlpWeights base = MlpWeights::assemble(fixed, 0.0, 0.0);
    std::array<std::array<double, 2>, 4> hidden{};
    for (std::size_t s = 0; s < xor_dataset.size(); ++s) {
        hidden[s] = activate(base, xor_dataset[s].input).hidden;
    }
    std::vector<VertexLabel> found;
    for (std::int64_t x = x_begin; x < x_end; ++x) {
        const double w1 = win.dp * static_cast<double>(x);
        for (std::int64_t y = win.y_min(); y <= win.y_max(); ++y) {
            const double w2 = win.dp * static_cast<double>(y);
            bool ok = true;
            for (std::size_t s = 0; s < xor_dataset.size() && ok; ++s) {
                const double out = sigmoid(fixed.out_b + w1 * hidden[s][0] + w2 * hidden[s][1]);
                ok = std::abs(out - xor_dataset[s].target) < margin;
            }
            if (ok) {
                found.push_back({x, y});
            }
        }
    }
    return found;
}

} // namespace detail

/// Exhaustive scan of every grid point; `threads` workers split the x range and
/// the merged result is identical for any thread count.
inline MarkedSet enumerate_marked(const Window& win, const FixedWeights& fixed, double margin = 0.5, unsigned threads = 1)
{
    win.validate();
    MlpWeights probe = MlpWeights::assemble(fixed, 0.0, 0.0);
    if (!probe.finite()) {
        throw ParameterError("enumerate_marked: fixed weights must be finite");
    }
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(win.width)));
    const std::int64_t x0 = win.x_min();
    const auto width = static_cast<std::int64_t>(win.width);
    std::vector<std::vector<VertexLabel>> parts(threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            const std::int64_t begin = x0 + width * t / threads;
            const std::int64_t end = x0 + width * (t + 1) / threads;
            auto job = [&, t, begin, end] { parts[t] = detail::scan_columns(win, fixed, margin, begin, end); };
            if (threads == 1) {
                job();
            } else {
                workers.emplace_back(job);
            }
        }
    }
    MarkedSet out;
    for (auto& p : parts) {
        out.positions.insert(out.positions.end(), p.begin(), p.end());
    }
    return out;
}

struct SolutionCount {
    double dp = 0.0;
    std::uint64_t window = 0;
    std::uint64_t count = 0;
};

/// k for every (dp, square window) pair, dp-major in the given orders.
inline std::vector<SolutionCount> solution_count_table(std::span<const std::uint64_t> windows, std::span<const double> dps,
                                                       const FixedWeights& fixed, double margin = 0.5, unsigned threads = 1)
{
    std::vector<SolutionCount> table;
    for (double dp : dps) {
        for (std::uint64_t extent : windows) {
            const auto marked = enumerate_marked(Window::square(extent, dp), fixed, margin, threads);
            table.push_back({dp, extent, marked.k()});
        }
    }
    return table;
}

inline void write_csv(std::ostream& out, const MarkedSet& m)
{
    out << "x,y\n";
    for (const auto& r : m.positions) {
        out << r.x << ',' << r.y << '\n';
    }
}

inline MarkedSet read_marked_set(std::istream& in)
{
    const auto table = csv::read(in);
    if (table.header != std::vector<std::string>{"x", "y"}) {
        throw std::runtime_error("csv: expected header x,y");
    }
    MarkedSet m;
    for (const auto& row : table.rows) {
        m.positions.push_back({csv::parse_int(row[0]), csv::parse_int(row[1])});
    }
    std::sort(m.positions.begin(), m.positions.end());
    return m;
}

inline void write_csv(std::ostream& out, std::span<const SolutionCount> table)
{
    out << "dp,window,count\n";
    for (const auto& c : table) {
        out << csv::format_double(c.dp) << ',' << c.window << ',' << c.count << '\n';
    }
}

} // namespace lqw
