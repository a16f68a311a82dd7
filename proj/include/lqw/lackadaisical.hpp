#pragma once

/// @file lackadaisical.hpp
/// Lackadaisical quantum walk on the complete graph with one self-loop per vertex.
///
/// One step is U = S * C: C applies the Grover diffusion 2|s_v><s_v| - I over the
/// N outgoing edges of every vertex v (self-loop included) and negates it at marked
/// vertices; S is the flip-flop shift |v->w> -> |w->v>.
///
/// Two representations are provided. EdgeState materializes all N^2 directed-edge
/// amplitudes and serves as the reference for small N. ReducedState carries the
/// four coefficients on the edge-class basis {|aa>, |ab>, |ba>, |bb>}, which U
/// leaves invariant, and is what large problems use.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lqw/csv.hpp"
#include "lqw/errors.hpp"
#include "lqw/walk_core.hpp"

namespace lqw {

struct GraphParams {
    std::uint64_t n = 0; ///< vertex count N
    std::uint64_t k = 0; ///< marked vertices
    std::uint64_t l = 1; ///< self-loops per vertex

    /// Throws ParameterError unless 1 <= k < N.
    void validate() const
    {
        if (k < 1 || k >= n) {
            throw ParameterError("GraphParams: need 1 <= k < N (N=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
        }
    }

    /// validate() plus l == 1, the only self-loop count the walk operators model.
    void validate_simulable() const
    {
        validate();
        if (l != 1) {
            throw ParameterError("GraphParams: the walk is only defined for l = 1 self-loop");
        }
    }

    bool operator==(const GraphParams&) const = default;
};

/// Edge classes; also the index order of reduced amplitudes.
enum class EdgeClass : int { aa = 0, ab = 1, ba = 2, bb = 3 };

inline constexpr std::array<EdgeClass, 4> all_edge_classes{EdgeClass::aa, EdgeClass::ab, EdgeClass::ba, EdgeClass::bb};

inline constexpr const char* to_string(EdgeClass c)
{
    switch (c) {
    case EdgeClass::aa: return "aa";
    case EdgeClass::ab: return "ab";
    case EdgeClass::ba: return "ba";
    case EdgeClass::bb: return "bb";
    }
    return "?";
}

/// True for the classes whose source vertex is marked.
inline constexpr bool is_success_class(EdgeClass c) { return c == EdgeClass::aa || c == EdgeClass::ab; }

using ClassProbabilities = std::array<double, 4>;

struct ReducedState {
    std::array<Complex, 4> amplitudes{};
    GraphParams params;
    std::uint64_t time = 0;

    Complex amplitude(EdgeClass c) const { return amplitudes[static_cast<std::size_t>(c)]; }

    ClassProbabilities probabilities() const
    {
        ClassProbabilities p{};
        for (std::size_t i = 0; i < 4; ++i) {
            p[i] = std::norm(amplitudes[i]);
        }
        return p;
    }

    double norm_squared() const { return lqw::norm_squared(amplitudes); }
};

/// The uniform superposition over all N^2 directed edges, written in the class basis.
inline ReducedState initial_reduced_state(const GraphParams& p)
{
    p.validate();
    const double n = static_cast<double>(p.n);
    const double k = static_cast<double>(p.k);
    const double cross = std::sqrt(k * (n - k)) / n;
    return ReducedState{{Complex(k / n), Complex(cross), Complex(cross), Complex((n - k) / n)}, p, 0};
}

namespace detail {

/// Number of directed edges in each class.
inline std::array<double, 4> class_sizes(const GraphParams& p)
{
    const double k = static_cast<double>(p.k);
    const double u = static_cast<double>(p.n - p.k);
    return {k * k, k * u, u * k, u * u};
}

/// Applies S * C to a vector that is uniform within each edge class, given by its
/// coefficients on the normalized class basis. Works on per-edge amplitudes, so
/// every step mirrors what full_space_step does edge by edge.
inline std::array<Complex, 4> apply_step_to_class_vector(const GraphParams& p, const std::array<Complex, 4>& coeff)
{
    const auto sizes = class_sizes(p);
    std::array<Complex, 4> edge{};
    for (std::size_t c = 0; c < 4; ++c) {
        edge[c] = coeff[c] / std::sqrt(sizes[c]);
    }
    const double n = static_cast<double>(p.n);
    const double k = static_cast<double>(p.k);
    const double u = n - k;

    // Grover coin at a marked vertex (negated) and at an unmarked vertex.
    const Complex mean_a = (k * edge[0] + u * edge[1]) / n;
    const Complex mean_b = (k * edge[2] + u * edge[3]) / n;
    const Complex aa = -(2.0 * mean_a - edge[0]);
    const Complex ab = -(2.0 * mean_a - edge[1]);
    const Complex ba = 2.0 * mean_b - edge[2];
    const Complex bb = 2.0 * mean_b - edge[3];

    // Flip-flop shift swaps a->b with b->a and permutes aa, bb within their class.
    const std::array<Complex, 4> shifted{aa, ba, ab, bb};
    std::array<Complex, 4> out{};
    for (std::size_t c = 0; c < 4; ++c) {
        out[c] = shifted[c] * std::sqrt(sizes[c]);
    }
    return out;
}

} // namespace detail

/// The one-step operator restricted to span{|aa>, |ab>, |ba>, |bb>}.
/// Column j is the image of basis state j.
inline ComplexMatrix reduced_step_matrix(const GraphParams& p)
{
    p.validate_simulable();
    ComplexMatrix m(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        std::array<Complex, 4> basis{};
        basis[j] = 1.0;
        const auto image = detail::apply_step_to_class_vector(p, basis);
        for (std::size_t i = 0; i < 4; ++i) {
            m(i, j) = image[i];
        }
    }
    return m;
}

/// Real-valued step count t = pi / sqrt(2(2k + l - 1)) * sqrt(N).
inline double optimal_steps_exact(const GraphParams& p)
{
    p.validate();
    const double denom = 2.0 * (2.0 * static_cast<double>(p.k) + static_cast<double>(p.l) - 1.0);
    return std::numbers::pi / std::sqrt(denom) * std::sqrt(static_cast<double>(p.n));
}

/// Number of walk iterations: the exact step count truncated, i.e. the iteration
/// count of a loop running j = 1 .. t.
inline std::uint64_t optimal_steps(const GraphParams& p)
{
    return static_cast<std::uint64_t>(std::floor(optimal_steps_exact(p)));
}

/// The exact step count rounded to nearest, ties away from zero.
inline std::uint64_t rounded_steps(const GraphParams& p)
{
    return static_cast<std::uint64_t>(std::llround(optimal_steps_exact(p)));
}

inline ReducedState evolve_reduced(const ReducedState& s, std::uint64_t t)
{
    if (t == 0) {
        return s;
    }
    const auto u = reduced_step_matrix(s.params);
    ReducedState out = s;
    for (std::uint64_t i = 0; i < t; ++i) {
        const auto next = u.apply(out.amplitudes);
        std::copy(next.begin(), next.end(), out.amplitudes.begin());
    }
    out.time += t;
    return out;
}

inline ReducedState step(const ReducedState& s) { return evolve_reduced(s, 1); }

/// |a_aa|^2 + |a_ab|^2.
inline double success_probability(const ReducedState& s)
{
    return std::norm(s.amplitudes[0]) + std::norm(s.amplitudes[1]);
}

struct TrajectoryRow {
    std::uint64_t step = 0;
    ClassProbabilities p{};

    double success() const { return p[0] + p[1]; }
};

/// Class probabilities at steps 0..t_max starting from initial_reduced_state(p).
inline std::vector<TrajectoryRow> success_trajectory(const GraphParams& p, std::uint64_t t_max)
{
    auto s = initial_reduced_state(p);
    p.validate_simulable();
    const auto u = reduced_step_matrix(p);
    std::vector<TrajectoryRow> rows;
    rows.reserve(t_max + 1);
    for (std::uint64_t t = 0; t <= t_max; ++t) {
        rows.push_back({t, s.probabilities()});
        if (t < t_max) {
            const auto next = u.apply(s.amplitudes);
            std::copy(next.begin(), next.end(), s.amplitudes.begin());
            ++s.time;
        }
    }
    return rows;
}

/// Step of largest success probability. Success often plateaus over two
/// consecutive steps; values within `tie_tol` of the maximum count as ties and
/// the latest one wins.
inline std::uint64_t success_peak_step(std::span<const TrajectoryRow> rows, double tie_tol = 1e-12)
{
    if (rows.empty()) {
        throw ParameterError("success_peak_step: empty trajectory");
    }
    double best = rows.front().success();
    for (const auto& r : rows) {
        best = std::max(best, r.success());
    }
    std::uint64_t step = rows.front().step;
    for (const auto& r : rows) {
        if (r.success() >= best - tie_tol) {
            step = r.step;
        }
    }
    return step;
}

inline void write_csv(std::ostream& out, std::span<const TrajectoryRow> rows)
{
    out << "step,p_aa,p_ab,p_ba,p_bb,p_success\n";
    for (const auto& r : rows) {
        out << r.step;
        for (double v : r.p) {
            out << ',' << csv::format_double(v);
        }
        out << ',' << csv::format_double(r.success()) << '\n';
    }
}

inline std::vector<TrajectoryRow> read_trajectory(std::istream& in)
{
    const auto table = csv::read(in);
    if (table.header != std::vector<std::string>{"step", "p_aa", "p_ab", "p_ba", "p_bb", "p_success"}) {
        throw std::runtime_error("csv: expected trajectory header");
    }
    std::vector<TrajectoryRow> rows;
    for (const auto& cells : table.rows) {
        TrajectoryRow r;
        r.step = static_cast<std::uint64_t>(csv::parse_int(cells[0]));
        for (std::size_t i = 0; i < 4; ++i) {
            r.p[i] = csv::parse_double(cells[i + 1]);
        }
        rows.push_back(r);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Full edge space

/// All N^2 directed-edge amplitudes; edge v->w lives at index v*N + w, and v->v is the self-loop.
class EdgeState {
public:
    EdgeState(std::uint64_t n, std::vector<bool> marked) : n_(n), marked_(std::move(marked)), amps_(n * n)
    {
        if (n == 0 || marked_.size() != n) {
            throw ParameterError("EdgeState: marked flags must cover all N vertices");
        }
    }

    /// Uniform amplitude 1/N on every edge.
    static EdgeState uniform(std::uint64_t n, std::vector<bool> marked)
    {
        EdgeState s(n, std::move(marked));
        std::fill(s.amps_.begin(), s.amps_.end(), Complex(1.0 / static_cast<double>(n)));
        return s;
    }

    /// The reduced state written out edge by edge; vertices 0..k-1 are the marked ones
    /// unless `marked` says otherwise.
    static EdgeState embed(const ReducedState& r, std::vector<bool> marked = {})
    {
        const auto& p = r.params;
        p.validate_simulable();
        if (marked.empty()) {
            marked.assign(p.n, false);
            std::fill_n(marked.begin(), p.k, true);
        }
        EdgeState s(p.n, std::move(marked));
        if (s.marked_count() != p.k) {
            throw ParameterError("EdgeState::embed: marked count differs from k");
        }
        const auto sizes = detail::class_sizes(p);
        for (std::uint64_t v = 0; v < p.n; ++v) {
            for (std::uint64_t w = 0; w < p.n; ++w) {
                const auto c = static_cast<std::size_t>(s.edge_class(v, w));
                s.amps_[v * p.n + w] = r.amplitudes[c] / std::sqrt(sizes[c]);
            }
        }
        return s;
    }

    std::uint64_t vertex_count() const noexcept { return n_; }
    const std::vector<bool>& marked() const noexcept { return marked_; }
    std::uint64_t marked_count() const { return static_cast<std::uint64_t>(std::count(marked_.begin(), marked_.end(), true)); }

    Complex amplitude(std::uint64_t v, std::uint64_t w) const { return amps_.at(v * n_ + w); }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }

    EdgeClass edge_class(std::uint64_t v, std::uint64_t w) const
    {
        return static_cast<EdgeClass>((marked_[v] ? 0 : 2) + (marked_[w] ? 0 : 1));
    }

    double norm_squared() const { return lqw::norm_squared(amps_); }

    /// Total probability on the edges of each class.
    ClassProbabilities class_probabilities() const
    {
        ClassProbabilities p{};
        for (std::uint64_t v = 0; v < n_; ++v) {
            for (std::uint64_t w = 0; w < n_; ++w) {
                p[static_cast<std::size_t>(edge_class(v, w))] += std::norm(amps_[v * n_ + w]);
            }
        }
        return p;
    }

    /// Inner products with the four normalized class basis states.
    std::array<Complex, 4> project() const
    {
        const std::uint64_t k = marked_count();
        const GraphParams p{n_, k, 1};
        const auto sizes = detail::class_sizes(p);
        std::array<Complex, 4> out{};
        for (std::uint64_t v = 0; v < n_; ++v) {
            for (std::uint64_t w = 0; w < n_; ++w) {
                out[static_cast<std::size_t>(edge_class(v, w))] += amps_[v * n_ + w];
            }
        }
        for (std::size_t c = 0; c < 4; ++c) {
            out[c] = sizes[c] > 0.0 ? out[c] / std::sqrt(sizes[c]) : Complex(0.0);
        }
        return out;
    }

    /// Norm of the component orthogonal to the class basis.
    double leakage() const
    {
        const auto proj = project();
        const auto sizes = detail::class_sizes({n_, marked_count(), 1});
        std::array<Complex, 4> per_edge{};
        for (std::size_t c = 0; c < 4; ++c) {
            per_edge[c] = sizes[c] > 0.0 ? proj[c] / std::sqrt(sizes[c]) : Complex(0.0);
        }
        double residual = 0.0;
        for (std::uint64_t v = 0; v < n_; ++v) {
            for (std::uint64_t w = 0; w < n_; ++w) {
                residual += std::norm(amps_[v * n_ + w] - per_edge[static_cast<std::size_t>(edge_class(v, w))]);
            }
        }
        return std::sqrt(residual);
    }

    friend EdgeState full_space_step(const EdgeState& s);

private:
    std::uint64_t n_;
    std::vector<bool> marked_;
    std::vector<Complex> amps_;
};

/// Oracle-conditioned Grover coin at every vertex followed by the flip-flop shift.
inline EdgeState full_space_step(const EdgeState& s)
{
    const std::uint64_t n = s.n_;
    std::vector<Complex> coined(s.amps_.size());
    for (std::uint64_t v = 0; v < n; ++v) {
        Complex mean = 0.0;
        for (std::uint64_t w = 0; w < n; ++w) {
            mean += s.amps_[v * n + w];
        }
        mean /= static_cast<double>(n);
        const double sign = s.marked_[v] ? -1.0 : 1.0;
        for (std::uint64_t w = 0; w < n; ++w) {
            coined[v * n + w] = sign * (2.0 * mean - s.amps_[v * n + w]);
        }
    }
    EdgeState out(n, s.marked_);
    for (std::uint64_t v = 0; v < n; ++v) {
        for (std::uint64_t w = 0; w < n; ++w) {
            out.amps_[w * n + v] = coined[v * n + w];
        }
    }
    return out;
}

inline EdgeState step(const EdgeState& s) { return full_space_step(s); }

} // namespace lqw
