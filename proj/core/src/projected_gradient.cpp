// SPDX-License-Identifier: Apache-2.0

#include "vblast/projected_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vblast {

std::vector<double> project_to_simplex(std::span<const double> v, double total, double floor) {
    const std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("project_to_simplex: empty vector");
    const double free_total = total - floor * static_cast<double>(n);
    if (free_total < 0.0) throw std::invalid_argument("project_to_simplex: floor exceeds total");

    // Sort-based threshold search on y = v - floor.
    std::vector<double> sorted(v.begin(), v.end());
    for (double& s : sorted) s -= floor;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cumulative += sorted[j];
        const double t = (cumulative - free_total) / static_cast<double>(j + 1);
        if (j + 1 == n || sorted[j + 1] <= t) {
            theta = t;
            break;
        }
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = floor + std::max(v[j] - floor - theta, 0.0);
    return out;
}

namespace {

void project_blocks(std::vector<double>& x, std::span<const SimplexBlock> blocks, double floor) {
    for (const auto& b : blocks) {
        auto part = project_to_simplex(std::span<const double>(x.data() + b.offset, b.size), b.total, floor);
        std::copy(part.begin(), part.end(), x.begin() + static_cast<std::ptrdiff_t>(b.offset));
    }
}

double residual(const std::vector<double>& x, const std::vector<double>& g,
                std::span<const SimplexBlock> blocks, double floor) {
    double worst = 0.0;
    for (const auto& b : blocks) {
        double gmax = 0.0;
        for (std::size_t j = b.offset; j < b.offset + b.size; ++j) gmax = std::max(gmax, std::abs(g[j]));
        if (gmax == 0.0) continue;
        std::vector<double> trial(b.size);
        for (std::size_t j = 0; j < b.size; ++j)
            trial[j] = x[b.offset + j] - b.total * g[b.offset + j] / gmax;
        const auto p = project_to_simplex(trial, b.total, floor);
        for (std::size_t j = 0; j < b.size; ++j)
            worst = std::max(worst, std::abs(x[b.offset + j] - p[j]) / b.total);
    }
    return worst;
}

}  // namespace

PgdResult projected_gradient_descent(const Objective1D& f, const Gradient1D& grad,
                                     std::vector<double> x0, std::span<const SimplexBlock> blocks,
                                     const PgdOptions& options) {
    const std::size_t n = x0.size();
    PgdResult out;
    out.x = std::move(x0);
    project_blocks(out.x, blocks, options.floor);
    out.value = f(out.x);

    std::vector<double> g(n), g_new(n), trial(n);
    grad(out.x, g);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    double total_scale = 0.0;
    for (const auto& b : blocks) total_scale = std::max(total_scale, b.total);
    double step = gmax > 0.0 ? 1e-2 * total_scale / gmax : 1.0;

    for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
        out.residual = residual(out.x, g, blocks, options.floor);
        if (out.residual < options.tolerance) {
            out.converged = true;
            return out;
        }
        double t = step;
        double value_new = out.value;
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            for (std::size_t j = 0; j < n; ++j) trial[j] = out.x[j] - t * g[j];
            project_blocks(trial, blocks, options.floor);
            double descent = 0.0;
            for (std::size_t j = 0; j < n; ++j) descent += g[j] * (trial[j] - out.x[j]);
            value_new = f(trial);
            if (value_new <= out.value + 1e-4 * descent) {
                accepted = descent < 0.0 || value_new < out.value;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // Values no longer resolve the decrease; fall back to the
            // stationarity residual at the untruncated step.
            for (std::size_t j = 0; j < n; ++j) trial[j] = out.x[j] - step * g[j];
            project_blocks(trial, blocks, options.floor);
            grad(trial, g_new);
            if (!(residual(trial, g_new, blocks, options.floor) < out.residual)) break;
            value_new = f(trial);
        } else {
            grad(trial, g_new);
        }
        double sy = 0.0, ss = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = trial[j] - out.x[j];
            sy += s * (g_new[j] - g[j]);
            ss += s * s;
        }
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-30, 1e30) : t * 4.0;
        out.x.swap(trial);
        g.swap(g_new);
        out.value = value_new;
    }
    out.residual = residual(out.x, g, blocks, options.floor);
    out.converged = out.residual < options.tolerance;
    return out;
}

}  // namespace vblast
