#pragma once

// Numerical integration used throughout the library:
//   * a globally adaptive Gauss-Kronrod (G10/K21) integrator for real or
//     complex integrands, with breakpoints and (semi-)infinite ranges;
//   * Gauss-Legendre and Gauss-Laguerre rules of arbitrary order
//     (Golub-Welsch), cached per order;
//   * Richardson extrapolation for sequences in a geometrically shrinking
//     step.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace spinrelax::quad {

struct Tolerance {
    double relative = 1e-10;
    double absolute = 0.0;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
    bool converged = false;
};

namespace detail {

using Kronrod21 = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss10 = boost::math::quadrature::gauss<double, 10>;

template <class T>
struct RuleOutput {
    T value;
    double error;
};

// One G10/K21 application on [lo, hi], with the QUADPACK error heuristic.
template <class T, class F>
RuleOutput<T> apply_gk21(F& f, double lo, double hi) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const auto& xk = Kronrod21::abscissa();
    const auto& wk = Kronrod21::weights();
    const auto& wg = Gauss10::weights();

    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<T, 21> fv;
    fv[0] = f(center);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        fv[2 * i - 1] = f(center - half * xk[i]);
        fv[2 * i] = f(center + half * xk[i]);
    }

    T kronrod = fv[0] * wk[0];
    T gauss{};
    double resabs = std::abs(fv[0]) * wk[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const T pair = fv[2 * i - 1] + fv[2 * i];
        kronrod += pair * wk[i];
        resabs += (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i])) * wk[i];
        if (i % 2 == 1) gauss += pair * wg[i / 2];
    }
    const T mean = kronrod * 0.5;
    double resasc = std::abs(fv[0] - mean) * wk[0];
    for (std::size_t i = 1; i < xk.size(); ++i)
        resasc += (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean)) * wk[i];

    const double scale = std::abs(half);
    resabs *= scale;
    resasc *= scale;
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {kronrod * half, err};
}

enum class SegmentKind { finite, to_plus_infinity, to_minus_infinity };

// A piece of the integration range in its own variable s.
// finite: x = s; to_plus_infinity: x = origin + L s/(1-s), s in [0,1);
// to_minus_infinity: x = origin - L s/(1-s). L is a length scale.
struct Segment {
    SegmentKind kind;
    double origin;
    double scale = 1.0;
};

template <class T>
struct Interval {
    std::size_t segment;
    double lo, hi;
    T value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace detail

/// Integrates f over the ordered breakpoints (first and last may be -inf/+inf).
/// Intervals are refined worst-first until the summed error estimate is below
/// max(absolute, relative * |integral|), the interval budget is exhausted, or
/// the worst interval is at its round-off floor.
///
/// An infinite end is mapped onto a finite interval with the length of the
/// adjacent finite piece as its scale, so the breakpoints must include at
/// least one finite piece on the integrand's natural scale.
template <class F>
auto integrate(F&& f, std::span<const double> breakpoints, Tolerance tol = {},
               std::size_t max_intervals = 200000) {
    using T = std::decay_t<decltype(f(0.0))>;
    if (breakpoints.size() < 2) throw std::invalid_argument("integrate: need at least two breakpoints");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] <= breakpoints[i + 1]))
            throw std::invalid_argument("integrate: breakpoints must be non-decreasing");
    }
    for (std::size_t i = 1; i + 1 < breakpoints.size(); ++i) {
        if (!std::isfinite(breakpoints[i]))
            throw std::invalid_argument("integrate: interior breakpoints must be finite");
    }

    // Infinite pieces are mapped with the width of the neighbouring finite
    // piece as length scale (or |origin|, or 1, when there is none).
    auto tail_scale = [&](std::size_t i, double origin) {
        double s = 0.0;
        if (i > 0 && std::isfinite(breakpoints[i - 1]) && std::isfinite(breakpoints[i]))
            s = breakpoints[i] - breakpoints[i - 1];
        if (i + 2 < breakpoints.size() && std::isfinite(breakpoints[i + 2]) && std::isfinite(breakpoints[i + 1]))
            s = std::max(s, breakpoints[i + 2] - breakpoints[i + 1]);
        if (!(s > 0.0)) s = std::abs(origin);
        return s > 0.0 ? s : 1.0;
    };

    std::vector<detail::Segment> segments;
    std::vector<std::pair<double, double>> ranges;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i], b = breakpoints[i + 1];
        if (a == b) continue;
        if (std::isinf(a) && std::isinf(b)) {
            segments.push_back({detail::SegmentKind::to_minus_infinity, 0.0, 1.0});
            ranges.emplace_back(0.0, 1.0);
            segments.push_back({detail::SegmentKind::to_plus_infinity, 0.0, 1.0});
            ranges.emplace_back(0.0, 1.0);
        } else if (std::isinf(b)) {
            segments.push_back({detail::SegmentKind::to_plus_infinity, a, tail_scale(i, a)});
            ranges.emplace_back(0.0, 1.0);
        } else if (std::isinf(a)) {
            segments.push_back({detail::SegmentKind::to_minus_infinity, b, tail_scale(i, b)});
            ranges.emplace_back(0.0, 1.0);
        } else {
            segments.push_back({detail::SegmentKind::finite, 0.0});
            ranges.emplace_back(a, b);
        }
    }

    Result<T> out;
    if (segments.empty()) {
        out.converged = true;
        return out;
    }

    auto in_segment = [&](std::size_t seg) {
        return [&f, s = segments[seg], &out](double x) -> T {
            ++out.evaluations;
            switch (s.kind) {
                case detail::SegmentKind::finite: return f(x);
                case detail::SegmentKind::to_plus_infinity: {
                    const double u = 1.0 - x;
                    return f(s.origin + s.scale * x / u) * (s.scale / (u * u));
                }
                case detail::SegmentKind::to_minus_infinity: {
                    const double u = 1.0 - x;
                    return f(s.origin - s.scale * x / u) * (s.scale / (u * u));
                }
            }
            return T{};
        };
    };

    std::priority_queue<detail::Interval<T>> queue;
    T total{};
    double total_error = 0.0;
    for (std::size_t seg = 0; seg < segments.size(); ++seg) {
        auto g = in_segment(seg);
        auto [lo, hi] = ranges[seg];
        auto r = detail::apply_gk21<T>(g, lo, hi);
        queue.push({seg, lo, hi, r.value, r.error});
        total += r.value;
        total_error += r.error;
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] { return std::max(tol.absolute, tol.relative * std::abs(total)); };

    while (total_error > target() && queue.size() < max_intervals) {
        const auto worst = queue.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi) ||
            (worst.hi - worst.lo) < 4.0 * eps * std::max(std::abs(worst.lo), std::abs(worst.hi)))
            break;
        queue.pop();
        auto g = in_segment(worst.segment);
        auto left = detail::apply_gk21<T>(g, worst.lo, mid);
        auto right = detail::apply_gk21<T>(g, mid, worst.hi);
        const double new_error = left.error + right.error;
        total += left.value + right.value - worst.value;
        total_error += new_error - worst.error;
        queue.push({worst.segment, worst.lo, mid, left.value, left.error});
        queue.push({worst.segment, mid, worst.hi, right.value, right.error});
        // The round-off floor dominates: further bisection cannot help.
        if (new_error >= worst.error && worst.error < 100.0 * eps * std::abs(total) + tol.absolute) break;
    }

    // Re-sum from the leaves to shed accumulated update round-off.
    total = T{};
    total_error = 0.0;
    out.intervals = queue.size();
    while (!queue.empty()) {
        total += queue.top().value;
        total_error += queue.top().error;
        queue.pop();
    }
    out.value = total;
    out.error = total_error;
    out.converged = total_error <= std::max(tol.absolute, tol.relative * std::abs(total));
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, Tolerance tol = {}, std::size_t max_intervals = 200000) {
    const double pts[2] = {a, b};
    return integrate(std::forward<F>(f), std::span<const double>(pts), tol, max_intervals);
}

/// Nodes and weights of an n-point Gauss rule.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
inline GaussRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigen-solve failed");
    const auto n = diag.size();
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

template <class Build>
const GaussRule& cached_rule(std::map<int, GaussRule>& cache, std::mutex& m, int n, Build build) {
    if (n < 1) throw std::invalid_argument("Gauss rule order must be positive");
    std::lock_guard lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build(n)).first;
    return it->second;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1].
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex m;
    return detail::cached_rule(cache, m, n, [](int k) {
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
        Eigen::VectorXd off(std::max(k - 1, 0));
        for (int j = 1; j < k; ++j) off(j - 1) = j / std::sqrt(4.0 * j * j - 1.0);
        return detail::golub_welsch(diag, off, 2.0);
    });
}

/// n-point Gauss-Laguerre rule: sum w_i f(x_i) ~ integral_0^inf e^{-x} f(x) dx.
inline const GaussRule& gauss_laguerre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex m;
    return detail::cached_rule(cache, m, n, [](int k) {
        Eigen::VectorXd diag(k);
        Eigen::VectorXd off(std::max(k - 1, 0));
        for (int j = 0; j < k; ++j) diag(j) = 2.0 * j + 1.0;
        for (int j = 1; j < k; ++j) off(j - 1) = j;
        return detail::golub_welsch(diag, off, 1.0);
    });
}

/// Richardson extrapolation to h -> 0 of values computed at steps
/// h, h/ratio, h/ratio^2, ..., assuming an error series in h, h^2, h^3, ...
template <class T>
T richardson(std::span<const T> values, double ratio) {
    if (values.empty()) throw std::invalid_argument("richardson: no values");
    if (!(ratio > 1.0)) throw std::invalid_argument("richardson: ratio must exceed 1");
    std::vector<T> table(values.begin(), values.end());
    double factor = 1.0;
    for (std::size_t k = 1; k < table.size(); ++k) {
        factor *= ratio;
        for (std::size_t i = table.size() - 1; i >= k; --i)
            table[i] = table[i] + (table[i] - table[i - 1]) / (factor - 1.0);
    }
    return table.back();
}

}  // namespace spinrelax::quad
