// Copyright 2026 The finres Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Numerical helpers: Gaussian kernels, adaptive quadrature, 1-D maximization
 * and bracketed root finding. Quadrature and optimizers are Boost.Math.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "errors.hpp"

namespace finres::numerics {

/// Normalized Gaussian density with standard deviation sigma, centered at 0.
inline double gaussian_pdf(double x, double sigma) {
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

inline double gaussian_cdf(double x, double sigma) {
    return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

/// Half-width of the finite integration window for a kernel of resolution ds
/// acting on eigenvalues +-1. Tails beyond it are below working precision.
inline double integration_half_width(double resolution) { return 4.0 + 6.0 * resolution; }

inline constexpr double kQuadratureTolerance = 1e-12;
inline constexpr unsigned kQuadratureMaxDepth = 18;

/// Adaptive 15-point Gauss-Kronrod integral of f over [lo, hi].
template <typename F>
double integrate(F &&f, double lo, double hi, double tolerance = kQuadratureTolerance) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), lo, hi, kQuadratureMaxDepth, tolerance);
}

/// Nested adaptive integral of f(x, y) over [x0, x1] x [y0, y1].
template <typename F>
double integrate_2d(const F &f, double x0, double x1, double y0, double y1,
                    double tolerance = kQuadratureTolerance) {
    return integrate(
        [&](double x) {
            return integrate([&](double y) { return f(x, y); }, y0, y1, tolerance);
        },
        x0, x1, tolerance);
}

struct Maximum {
    double location;
    double value;
};

/// Maximizes a unimodal f on [lo, hi] by golden-section search with
/// parabolic acceleration (Brent). Location accurate to ~1.5e-8 relative.
template <typename F> Maximum maximize(F &&f, double lo, double hi) {
    constexpr int bits = std::numeric_limits<double>::digits / 2;
    std::uintmax_t iterations = 200;
    const auto [x, neg] = boost::math::tools::brent_find_minima(
        [&](double v) { return -f(v); }, lo, hi, bits, iterations);
    return {x, -neg};
}

/// Root of a continuous f with a sign change on [lo, hi], bisected until the
/// bracket is narrower than tolerance.
template <typename F> double bisect(F &&f, double lo, double hi, double tolerance) {
    if (std::signbit(f(lo)) == std::signbit(f(hi))) {
        throw RejectedInput("bisection interval does not bracket a root");
    }
    std::uintmax_t iterations = 400;
    const auto [a, b] = boost::math::tools::bisect(
        std::forward<F>(f), lo, hi,
        [tolerance](double x, double y) { return std::abs(y - x) <= tolerance; }, iterations);
    return 0.5 * (a + b);
}

} // namespace finres::numerics
