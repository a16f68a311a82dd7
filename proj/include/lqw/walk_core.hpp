#pragma once

/// @file walk_core.hpp
/// Discrete-time coined quantum walks on the line and on the square lattice,
/// plus the small dense complex matrices used throughout the library.
///
/// States are stored densely over the square [-r, r] (or its 2D analogue),
/// where r is the reach of the walk so far. A walker started at the origin
/// can never leave that region, so every step grows the arrays by one site
/// on each side and nothing is ever truncated.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "lqw/csv.hpp"
#include "lqw/errors.hpp"
#include "lqw/random.hpp"

namespace lqw {

using Complex = std::complex<double>;

/// Row-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> init)
    {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) {
                throw DimensionError("ComplexMatrix: ragged initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t n)
    {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    ComplexMatrix adjoint() const
    {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
    {
        if (a.cols_ != b.rows_) {
            throw DimensionError("ComplexMatrix: inner dimensions differ");
        }
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    std::vector<Complex> apply(std::span<const Complex> v) const
    {
        if (v.size() != cols_) {
            throw DimensionError("ComplexMatrix: vector length differs from column count");
        }
        std::vector<Complex> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) {
                acc += (*this)(i, j) * v[j];
            }
            out[i] = acc;
        }
        return out;
    }

    /// Largest |entry| of (this - other).
    double max_abs_diff(const ComplexMatrix& other) const
    {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw DimensionError("ComplexMatrix: shapes differ");
        }
        double m = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            m = std::max(m, std::abs(data_[i] - other.data_[i]));
        }
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// (1/sqrt 2) [[1, 1], [1, -1]]
inline ComplexMatrix hadamard_coin()
{
    const double h = 1.0 / std::numbers::sqrt2;
    return ComplexMatrix{{h, h}, {h, -h}};
}

/// True iff both M M^dagger and M^dagger M equal the identity to within `tol` in max-norm.
inline bool check_unitary(const ComplexMatrix& m, double tol)
{
    if (!m.square()) {
        throw DimensionError("check_unitary: matrix is not square");
    }
    const auto id = ComplexMatrix::identity(m.rows());
    const auto adj = m.adjoint();
    return (m * adj).max_abs_diff(id) <= tol && (adj * m).max_abs_diff(id) <= tol;
}

inline double norm_squared(std::span<const Complex> v)
{
    double s = 0.0;
    for (const auto& a : v) {
        s += std::norm(a);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Distributions

/// Probability mass over walker positions; only strictly positive entries are stored.
template <typename Position>
struct Distribution {
    std::map<Position, double> entries;

    double at(const Position& p) const
    {
        auto it = entries.find(p);
        return it == entries.end() ? 0.0 : it->second;
    }

    double total() const
    {
        double s = 0.0;
        for (const auto& [pos, prob] : entries) {
            s += prob;
        }
        return s;
    }

    /// All entries non-negative and the mass sums to one within `tol`.
    bool valid(double tol = 1e-9) const
    {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second >= 0.0; })
            && std::abs(total() - 1.0) <= tol;
    }

    bool operator==(const Distribution&) const = default;
};

using Position2D = std::pair<std::int64_t, std::int64_t>;
using Distribution1D = Distribution<std::int64_t>;
using Distribution2D = Distribution<Position2D>;

/// sqrt(E[n^2] - E[n]^2) over a 1D distribution.
inline double position_stddev(const Distribution1D& d)
{
    if (d.entries.empty()) {
        throw ParameterError("position_stddev: empty distribution");
    }
    double mass = 0.0;
    double mean = 0.0;
    for (const auto& [n, p] : d.entries) {
        mass += p;
        mean += p * static_cast<double>(n);
    }
    mean /= mass;
    double var = 0.0;
    for (const auto& [n, p] : d.entries) {
        const double dn = static_cast<double>(n) - mean;
        var += p * dn * dn;
    }
    return std::sqrt(std::max(0.0, var / mass));
}

/// Distribution of the x coordinate alone.
inline Distribution1D marginal_x(const Distribution2D& d)
{
    Distribution1D out;
    for (const auto& [pos, p] : d.entries) {
        out.entries[pos.first] += p;
    }
    return out;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw DimensionError("loglog_slope: need at least two paired samples");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline void write_csv(std::ostream& out, const Distribution1D& d)
{
    out << "position,probability\n";
    for (const auto& [n, p] : d.entries) {
        out << n << ',' << csv::format_double(p) << '\n';
    }
}

inline void write_csv(std::ostream& out, const Distribution2D& d)
{
    out << "x,y,probability\n";
    for (const auto& [pos, p] : d.entries) {
        out << pos.first << ',' << pos.second << ',' << csv::format_double(p) << '\n';
    }
}

inline Distribution1D read_distribution_1d(std::istream& in)
{
    const auto table = csv::read(in);
    if (table.header != std::vector<std::string>{"position", "probability"}) {
        throw std::runtime_error("csv: expected header position,probability");
    }
    Distribution1D d;
    for (const auto& row : table.rows) {
        d.entries[csv::parse_int(row[0])] = csv::parse_double(row[1]);
    }
    return d;
}

inline Distribution2D read_distribution_2d(std::istream& in)
{
    const auto table = csv::read(in);
    if (table.header != std::vector<std::string>{"x", "y", "probability"}) {
        throw std::runtime_error("csv: expected header x,y,probability");
    }
    Distribution2D d;
    for (const auto& row : table.rows) {
        d.entries[{csv::parse_int(row[0]), csv::parse_int(row[1])}] = csv::parse_double(row[2]);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Line

/// Coin (0 or 1) times position state on [-reach, reach]. Coin 0 moves right.
class StateVector1D {
public:
    /// A walker localized at n = 0 with coin amplitudes (c0, c1).
    static StateVector1D localized(Complex c0, Complex c1)
    {
        StateVector1D s(0, 0);
        s.at(0, 0) = c0;
        s.at(1, 0) = c1;
        return s;
    }

    std::int64_t reach() const noexcept { return reach_; }
    std::uint64_t time() const noexcept { return time_; }

    Complex amplitude(int coin, std::int64_t n) const
    {
        if (coin < 0 || coin > 1 || n < -reach_ || n > reach_) {
            return 0.0;
        }
        return amps_[index(coin, n)];
    }

    double norm_squared() const { return lqw::norm_squared(amps_); }

    Distribution1D distribution() const
    {
        Distribution1D d;
        for (std::int64_t n = -reach_; n <= reach_; ++n) {
            const double p = std::norm(amplitude(0, n)) + std::norm(amplitude(1, n));
            if (p > 0.0) {
                d.entries[n] = p;
            }
        }
        return d;
    }

    friend StateVector1D step_1d(const StateVector1D& s);

    bool operator==(const StateVector1D&) const = default;

private:
    StateVector1D(std::int64_t reach, std::uint64_t time)
        : reach_(reach), time_(time), amps_(2 * static_cast<std::size_t>(2 * reach + 1))
    {
    }

    std::size_t index(int coin, std::int64_t n) const
    {
        return static_cast<std::size_t>(n + reach_) * 2 + static_cast<std::size_t>(coin);
    }
    Complex& at(int coin, std::int64_t n) { return amps_[index(coin, n)]; }

    std::int64_t reach_;
    std::uint64_t time_;
    std::vector<Complex> amps_;
};

/// (|0> - i|1>)/sqrt 2 at n = 0.
inline StateVector1D symmetric_initial_1d()
{
    const double h = 1.0 / std::numbers::sqrt2;
    return StateVector1D::localized(Complex(h, 0.0), Complex(0.0, -h));
}

/// One application of S (H (x) I).
inline StateVector1D step_1d(const StateVector1D& s)
{
    const double h = 1.0 / std::numbers::sqrt2;
    StateVector1D next(s.reach_ + 1, s.time_ + 1);
    for (std::int64_t n = -s.reach_; n <= s.reach_; ++n) {
        const Complex a0 = s.amplitude(0, n);
        const Complex a1 = s.amplitude(1, n);
        next.at(0, n + 1) += h * (a0 + a1);
        next.at(1, n - 1) += h * (a0 - a1);
    }
    return next;
}

inline StateVector1D step(const StateVector1D& s) { return step_1d(s); }
inline Distribution1D distribution(const StateVector1D& s) { return s.distribution(); }

// ---------------------------------------------------------------------------
// Lattice

/// Two coin qubits (i_x, i_y) times lattice position on [-reach, reach]^2.
/// i_x = 0 moves +x, i_x = 1 moves -x; likewise for y.
class StateVector2D {
public:
    /// A walker localized at the origin with coin amplitudes indexed by 2 i_x + i_y.
    static StateVector2D localized(const std::array<Complex, 4>& coin)
    {
        StateVector2D s(0, 0);
        for (int c = 0; c < 4; ++c) {
            s.at(c >> 1, c & 1, 0, 0) = coin[static_cast<std::size_t>(c)];
        }
        return s;
    }

    std::int64_t reach() const noexcept { return reach_; }
    std::uint64_t time() const noexcept { return time_; }

    Complex amplitude(int ix, int iy, std::int64_t x, std::int64_t y) const
    {
        if (ix < 0 || ix > 1 || iy < 0 || iy > 1 || x < -reach_ || x > reach_ || y < -reach_ || y > reach_) {
            return 0.0;
        }
        return amps_[index(ix, iy, x, y)];
    }

    double norm_squared() const { return lqw::norm_squared(amps_); }

    Distribution2D distribution() const
    {
        Distribution2D d;
        for (std::int64_t x = -reach_; x <= reach_; ++x) {
            for (std::int64_t y = -reach_; y <= reach_; ++y) {
                double p = 0.0;
                for (int c = 0; c < 4; ++c) {
                    p += std::norm(amplitude(c >> 1, c & 1, x, y));
                }
                if (p > 0.0) {
                    d.entries[{x, y}] = p;
                }
            }
        }
        return d;
    }

    friend StateVector2D step_2d(const StateVector2D& s);

    bool operator==(const StateVector2D&) const = default;

private:
    StateVector2D(std::int64_t reach, std::uint64_t time)
        : reach_(reach), time_(time), side_(static_cast<std::size_t>(2 * reach + 1)), amps_(4 * side_ * side_)
    {
    }

    std::size_t index(int ix, int iy, std::int64_t x, std::int64_t y) const
    {
        const auto col = static_cast<std::size_t>(x + reach_);
        const auto row = static_cast<std::size_t>(y + reach_);
        return ((col * side_ + row) << 2) | static_cast<std::size_t>((ix << 1) | iy);
    }
    Complex& at(int ix, int iy, std::int64_t x, std::int64_t y) { return amps_[index(ix, iy, x, y)]; }

    std::int64_t reach_;
    std::uint64_t time_;
    std::size_t side_;
    std::vector<Complex> amps_;
};

/// Product of the 1D symmetric coin state in both coin qubits, at the origin.
inline StateVector2D symmetric_initial_2d()
{
    const double h = 1.0 / std::numbers::sqrt2;
    const Complex c0(h, 0.0);
    const Complex c1(0.0, -h);
    return StateVector2D::localized({c0 * c0, c0 * c1, c1 * c0, c1 * c1});
}

/// One application of S ((H (x) H) (x) I).
inline StateVector2D step_2d(const StateVector2D& s)
{
    StateVector2D next(s.reach_ + 1, s.time_ + 1);
    for (std::int64_t x = -s.reach_; x <= s.reach_; ++x) {
        for (std::int64_t y = -s.reach_; y <= s.reach_; ++y) {
            const Complex a00 = s.amplitude(0, 0, x, y);
            const Complex a01 = s.amplitude(0, 1, x, y);
            const Complex a10 = s.amplitude(1, 0, x, y);
            const Complex a11 = s.amplitude(1, 1, x, y);
            // (H (x) H) has entries (+-1)/2.
            const Complex b00 = 0.5 * (a00 + a01 + a10 + a11);
            const Complex b01 = 0.5 * (a00 - a01 + a10 - a11);
            const Complex b10 = 0.5 * (a00 + a01 - a10 - a11);
            const Complex b11 = 0.5 * (a00 - a01 - a10 + a11);
            next.at(0, 0, x + 1, y + 1) += b00;
            next.at(0, 1, x + 1, y - 1) += b01;
            next.at(1, 0, x - 1, y + 1) += b10;
            next.at(1, 1, x - 1, y - 1) += b11;
        }
    }
    return next;
}

inline StateVector2D step(const StateVector2D& s) { return step_2d(s); }
inline Distribution2D distribution(const StateVector2D& s) { return s.distribution(); }

/// Applies `step` t times; evolve(s, 0) == s.
template <typename State>
State evolve(State s, std::uint64_t t)
{
    for (std::uint64_t i = 0; i < t; ++i) {
        s = step(s);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Classical comparison

/// Monte-Carlo distribution of the symmetric +-1 random walk after t steps.
inline Distribution1D classical_walk_baseline(std::uint64_t t, std::uint64_t trials, std::uint64_t seed)
{
    if (trials == 0) {
        throw ParameterError("classical_walk_baseline: trials must be positive");
    }
    Rng rng = make_rng(seed);
    std::map<std::int64_t, std::uint64_t> counts;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        // Each random bit is one coin toss; position = (#right) - (#left).
        std::uint64_t right = 0;
        std::uint64_t remaining = t;
        while (remaining >= 64) {
            right += static_cast<std::uint64_t>(std::popcount(rng()));
            remaining -= 64;
        }
        if (remaining > 0) {
            right += static_cast<std::uint64_t>(std::popcount(rng() >> (64 - remaining)));
        }
        ++counts[2 * static_cast<std::int64_t>(right) - static_cast<std::int64_t>(t)];
    }
    Distribution1D d;
    for (const auto& [n, c] : counts) {
        d.entries[n] = static_cast<double>(c) / static_cast<double>(trials);
    }
    return d;
}

} // namespace lqw
