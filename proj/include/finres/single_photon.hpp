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
 * Joint statistics of a finite-resolution s1 measurement followed by a
 * projective s2 measurement on one photon.
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mixture.hpp"
#include "numerics.hpp"
#include "operator_core.hpp"

namespace finres::single_photon {

/// Channel index of an s2 outcome inside a ChannelDecomposition<2>.
constexpr std::size_t channel(Sign s2) { return s2 == Sign::plus ? 0 : 1; }

/// Diagonally polarized input (|R> + i|L>)/sqrt(2), the s2 = +1 eigenstate.
inline PolarizationKet diagonal_state() { return stokes_eigenstate(2, Sign::plus); }

/// Outcome state P(s1m) |s2 = sign>; not normalized. Its overlap with the
/// input gives the joint density, its squared norm the density for an s2
/// eigenstate input.
inline Vec2 pom_state(const MeasurementKernel &kernel, double s1m, Sign s2) {
    return measurement_operator(kernel, stokes_operator(1), s1m).mat() *
           stokes_eigenstate(2, s2).vec();
}

/// Joint density P(s1m; s2) = |<s1m; s2|psi>|^2.
inline double joint_density(const PolarizationKet &state, const MeasurementKernel &kernel,
                            double s1m, Sign s2) {
    return std::norm(inner(pom_state(kernel, s1m, s2), state.vec()));
}

/// Closed form of joint_density for diagonal_state():
///   (2 pi ds^2)^(-1/2) exp(-(s^2+1)/(2 ds^2)) cosh^2 (or sinh^2) (s/(2 ds^2)).
inline double diagonal_state_density(const MeasurementKernel &kernel, double s1m, Sign s2) {
    const double ds2 = kernel.resolution() * kernel.resolution();
    const double pre = std::exp(-(s1m * s1m + 1.0) / (2.0 * ds2)) /
                       std::sqrt(2.0 * std::numbers::pi * ds2);
    const double arg = s1m / (2.0 * ds2);
    const double h = s2 == Sign::plus ? std::cosh(arg) : std::sinh(arg);
    return pre * h * h;
}

/// Weights of the three shifted Gaussians (centers -1, 0, +1) for one s2
/// channel. `coherence` is the center-0 weight before the decoherence factor.
struct ChannelWeights {
    double at_minus;
    double coherence;
    double at_plus;
};

/**
 * Decomposition of the input density matrix in the s1 eigenbasis: the
 * populations of |s1 = +-1> feed the centers +-1, and each coherence
 * contributes 2 Re(rho_{+-} <e|+><-|e>) at center 0, where |e> is the s2
 * eigenstate of the channel.
 */
inline std::array<ChannelWeights, 2> channel_weights(const PolarizationKet &state) {
    const Vec2 up = stokes_eigenstate(1, Sign::plus).vec();
    const Vec2 down = stokes_eigenstate(1, Sign::minus).vec();
    const Complex alpha = inner(up, state.vec());
    const Complex beta = inner(down, state.vec());
    std::array<ChannelWeights, 2> out{};
    for (const Sign s2 : kSigns) {
        const Vec2 e = stokes_eigenstate(2, s2).vec();
        const Complex eu = inner(e, up);
        const Complex ed = inner(e, down);
        out[channel(s2)] = ChannelWeights{
            std::norm(beta) * std::norm(ed),
            2.0 * (alpha * std::conj(beta) * eu * std::conj(ed)).real(),
            std::norm(alpha) * std::norm(eu),
        };
    }
    return out;
}

/// Signed Gaussian mixture per s2 channel that reproduces joint_density
/// pointwise; the center-0 weights carry exp(-1/(2 ds^2)).
inline ChannelDecomposition<2> gaussian_decomposition(const PolarizationKet &state,
                                                      const MeasurementKernel &kernel) {
    const auto weights = channel_weights(state);
    const double dec = kernel.decoherence();
    auto mixture = [&](const ChannelWeights &w) {
        return SignedGaussianMixture(kernel.resolution(), {{w.at_minus, -1.0, {}},
                                                           {dec * w.coherence, 0.0, {}},
                                                           {w.at_plus, +1.0, {}}});
    };
    return ChannelDecomposition<2>({mixture(weights[0]), mixture(weights[1])});
}

/// Six-entry signed table over s1 in {-1, 0, +1} x s2 in {-1, +1}: the
/// decomposition weights with the decoherence factor removed.
inline QuasiProbabilityTable<2> discrete_quasi_table(const PolarizationKet &state) {
    const auto weights = channel_weights(state);
    std::vector<QuasiProbabilityTable<2>::Entry> entries;
    for (const int s1 : {-1, 0, 1}) {
        for (const Sign s2 : {Sign::minus, Sign::plus}) {
            const ChannelWeights &w = weights[channel(s2)];
            const double p = s1 == -1 ? w.at_minus : (s1 == 0 ? w.coherence : w.at_plus);
            entries.push_back({{s1, static_cast<int>(s2)}, p});
        }
    }
    return QuasiProbabilityTable<2>(std::move(entries));
}

/// Projective s2 probability predicted by the input state, <psi|(1 + s s2)/2|psi>.
inline double projective_s2_probability(const PolarizationKet &state, Sign s2) {
    return 0.5 * (1.0 + value(s2) * expectation(stokes_operator(2), state));
}

/// Sum over s2 of the integral of joint_density over the measurement axis.
inline double total_probability(const PolarizationKet &state, const MeasurementKernel &kernel) {
    const double w = numerics::integration_half_width(kernel.resolution());
    double acc = 0.0;
    for (const Sign s2 : kSigns) {
        acc += numerics::integrate(
            [&](double s) { return joint_density(state, kernel, s, s2); }, -w, w);
    }
    return acc;
}

/// Local maximum of P(s1m; s2) inside [lo, hi] (golden-section / Brent).
inline numerics::Maximum locate_peak(const PolarizationKet &state, const MeasurementKernel &kernel,
                                     Sign s2, double lo = 0.0, double hi = 4.0) {
    return numerics::maximize([&](double s) { return joint_density(state, kernel, s, s2); }, lo,
                              hi);
}

/**
 * Correlation C(s1m^2, s2) = <s1m^2 s2> - <s1m^2><s2> of the measured
 * statistics, integrated from joint_density.
 */
inline double correlation_s1sq_s2(const PolarizationKet &state, const MeasurementKernel &kernel) {
    const double w = numerics::integration_half_width(kernel.resolution());
    double sq_times_s2 = 0.0;
    double sq = 0.0;
    double s2_mean = 0.0;
    for (const Sign s2 : kSigns) {
        const double mass = numerics::integrate(
            [&](double s) { return joint_density(state, kernel, s, s2); }, -w, w);
        const double second = numerics::integrate(
            [&](double s) { return s * s * joint_density(state, kernel, s, s2); }, -w, w);
        sq_times_s2 += value(s2) * second;
        sq += second;
        s2_mean += value(s2) * mass;
    }
    return sq_times_s2 - sq * s2_mean;
}

/**
 * Operator-ordering expression
 *   exp(-1/(2 ds^2)) (<s1 s2 s1> - <s1^2><s2>).
 * Note: the sampled covariance returned by correlation_s1sq_s2 equals half
 * of this value (the s1 s2 s1 ordering double counts the coherence term).
 */
inline double correlation_s1sq_s2_operator(const PolarizationKet &state,
                                           const MeasurementKernel &kernel) {
    const Mat2 s1 = stokes_operator(1).mat();
    const Mat2 s2 = stokes_operator(2).mat();
    const double ordered = expectation(s1 * s2 * s1, state);
    const double squared = expectation(s1 * s1, state);
    return kernel.decoherence() * (ordered - squared * expectation(s2, state));
}

} // namespace finres::single_photon
