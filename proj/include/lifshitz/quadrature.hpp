#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lifshitz/common.hpp"

namespace lifshitz {

// Globally adaptive 15-point Gauss-Kronrod for integrands returning
// std::array<double, N>. Subdivision is driven by the error of the weighted
// component sum `sum_i w_i f_i` (the "norm" functional), so every component
// shares one mesh.
template <std::size_t N>
struct QuadResult {
    std::array<double, N> value{};
    std::array<double, N> error{};  // per-component |K15 - G7| on the final mesh
    double norm_value = 0.0;
    double norm_error = 0.0;
    int intervals = 0;
    bool converged = false;
    double worst_a = 0.0, worst_b = 0.0, worst_err = 0.0;
};

namespace detail {

template <std::size_t N>
struct Panel {
    double a, b;
    std::array<double, N> k15, err;
    double norm_err;
    bool operator<(const Panel& o) const { return norm_err < o.norm_err; }
};

template <std::size_t N, class F>
Panel<N> gk15_panel(F& f, double a, double b, const std::array<double, N>& w) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    static const auto& xk = GK::abscissa();
    static const auto& wk = GK::weights();
    using G7 = boost::math::quadrature::gauss<double, 7>;
    static const auto& wg = G7::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<double, N> k{}, g{};
    // Kronrod nodes: xk[0] = 0 (Gauss node), odd indices are Kronrod-only.
    const auto f0 = f(c);
    for (std::size_t i = 0; i < N; ++i) {
        k[i] += wk[0] * f0[i];
        g[i] += wg[0] * f0[i];
    }
    for (std::size_t j = 1; j < xk.size(); ++j) {
        const auto fp = f(c + h * xk[j]);
        const auto fm = f(c - h * xk[j]);
        for (std::size_t i = 0; i < N; ++i) {
            const double s = fp[i] + fm[i];
            k[i] += wk[j] * s;
            if (j % 2 == 0) g[i] += wg[j / 2] * s;
        }
    }
    Panel<N> p{a, b, {}, {}, 0.0};
    double nk = 0.0, ng = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        p.k15[i] = k[i] * h;
        p.err[i] = std::abs((k[i] - g[i]) * h);
        nk += w[i] * k[i] * h;
        ng += w[i] * g[i] * h;
    }
    p.norm_err = std::abs(nk - ng);
    return p;
}

}  // namespace detail

// Integrate f over [a, b] (finite) split first at the given breakpoints.
template <std::size_t N, class F>
QuadResult<N> integrate_adaptive(F&& f, double a, double b, const std::array<double, N>& weights, double rel_tol,
                                 double abs_tol, int max_intervals, const std::vector<double>& breaks = {}) {
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<detail::Panel<N>> heap;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) heap.push(detail::gk15_panel<N>(f, pts[i], pts[i + 1], weights));

    auto totals = [&](double& nv, double& ne) {
        auto copy = heap;
        nv = 0.0;
        ne = 0.0;
        while (!copy.empty()) {
            const auto& p = copy.top();
            for (std::size_t i = 0; i < N; ++i) nv += weights[i] * p.k15[i];
            ne += p.norm_err;
            copy.pop();
        }
    };

    QuadResult<N> out;
    double nv = 0.0, ne = 0.0;
    totals(nv, ne);
    int count = static_cast<int>(heap.size());
    // Track running totals incrementally; recompute occasionally to shed drift.
    while (ne > std::max(abs_tol, rel_tol * std::abs(nv)) && count < max_intervals) {
        auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {
            heap.push(worst);
            break;
        }
        auto left = detail::gk15_panel<N>(f, worst.a, m, weights);
        auto right = detail::gk15_panel<N>(f, m, worst.b, weights);
        for (std::size_t i = 0; i < N; ++i) nv += weights[i] * (left.k15[i] + right.k15[i] - worst.k15[i]);
        ne += left.norm_err + right.norm_err - worst.norm_err;
        heap.push(left);
        heap.push(right);
        ++count;
        if (count % 64 == 0) totals(nv, ne);
    }
    totals(nv, ne);
    out.converged = ne <= std::max(abs_tol, rel_tol * std::abs(nv));
    out.norm_value = nv;
    out.norm_error = ne;
    out.intervals = count;
    if (!heap.empty()) {
        out.worst_a = heap.top().a;
        out.worst_b = heap.top().b;
        out.worst_err = heap.top().norm_err;
    }
    while (!heap.empty()) {
        const auto& p = heap.top();
        for (std::size_t i = 0; i < N; ++i) {
            out.value[i] += p.k15[i];
            out.error[i] += p.err[i];
        }
        heap.pop();
    }
    return out;
}

// Scalar convenience wrapper.
template <class F>
QuadResult<1> integrate_scalar(F&& f, double a, double b, double rel_tol, double abs_tol, int max_intervals,
                               const std::vector<double>& breaks = {}) {
    auto g = [&](double x) { return std::array<double, 1>{f(x)}; };
    return integrate_adaptive<1>(g, a, b, {1.0}, rel_tol, abs_tol, max_intervals, breaks);
}

}  // namespace lifshitz
