// SPDX-License-Identifier: Apache-2.0
//
// Projected-gradient descent over a product of scaled simplices
// {x_j >= floor, sum_j x_j = total}, with Barzilai-Borwein trial steps and
// Armijo backtracking along the projection arc.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vblast {

/// Euclidean projection of v onto {x >= floor, sum x = total}.
std::vector<double> project_to_simplex(std::span<const double> v, double total, double floor = 0.0);

/// Coordinates [offset, offset + size) must sum to `total`.
struct SimplexBlock {
    std::size_t offset = 0;
    std::size_t size = 0;
    double total = 0.0;
};

struct PgdOptions {
    int max_iterations = 10000;
    double tolerance = 1e-9;  ///< on the normalised projected-gradient residual
    double floor = 1e-12;     ///< lower bound on every coordinate
};

struct PgdResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

using Objective1D = std::function<double(std::span<const double>)>;
using Gradient1D = std::function<void(std::span<const double>, std::span<double>)>;

/// Minimises f from x0 (projected first). The residual is, per block,
/// |x - P(x - T g / |g|_inf)|_inf / T with T the block total: zero exactly at
/// a KKT point and independent of the objective's scale.
PgdResult projected_gradient_descent(const Objective1D& f, const Gradient1D& grad,
                                     std::vector<double> x0, std::span<const SimplexBlock> blocks,
                                     const PgdOptions& options = {});

}  // namespace vblast
