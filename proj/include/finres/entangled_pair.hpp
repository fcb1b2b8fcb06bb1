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
 * Two-photon statistics for the polarization-entangled state
 *   |psi_ab> = (|R;L> + exp(i pi/4) |L;R>) / sqrt(2),
 * measured on each side by a finite-resolution s1 measurement followed by a
 * projective s2 measurement.
 *
 * Phase note: with s2 = i|L><R| - i|R><L| this is the phase for which
 * |psi_ab> is the +1 eigenstate of both Bell correlation operators (see
 * bell_correlation_operators). The opposite phase flips the sign of the
 * s2(a)s1(b) and s1(a)s2(b) correlations.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "mixture.hpp"
#include "numerics.hpp"
#include "operator_core.hpp"

namespace finres::entangled_pair {

/// Channel index of (s2(a), s2(b)): ++ -> 0, +- -> 1, -+ -> 2, -- -> 3.
constexpr std::size_t channel(Sign s2a, Sign s2b) {
    return (s2a == Sign::plus ? 0 : 2) + (s2b == Sign::plus ? 0 : 1);
}

inline constexpr std::array<std::pair<Sign, Sign>, 4> kChannels{{{Sign::plus, Sign::plus},
                                                                 {Sign::plus, Sign::minus},
                                                                 {Sign::minus, Sign::plus},
                                                                 {Sign::minus, Sign::minus}}};

inline PairKet bell_state() {
    const double r = 1.0 / std::numbers::sqrt2;
    return make_pair(0.0, r, r * std::polar(1.0, std::numbers::pi / 4.0), 0.0);
}

/// (s1(a) + s2(a)) s1(b) / sqrt(2) and -(s1(a) - s2(a)) s2(b) / sqrt(2).
inline std::array<HermitianOp4, 2> bell_correlation_operators() {
    const HermitianOp2 s1 = stokes_operator(1);
    const HermitianOp2 s2 = stokes_operator(2);
    const double r = 1.0 / std::numbers::sqrt2;
    return {r * tensor_op(s1 + s2, s1), -r * tensor_op(s1 - s2, s2)};
}

/// Norms ||O|psi> - |psi>|| for both correlation operators.
inline std::array<double, 2> verify_eigenstate_relations(const PairKet &state) {
    const auto ops = bell_correlation_operators();
    std::array<double, 2> out{};
    for (std::size_t i = 0; i < 2; ++i) {
        out[i] = std::sqrt((ops[i].mat() * state.vec() - state.vec()).squared_norm());
    }
    return out;
}

/// Unnormalized projection state P(s1m(a)) P(s1m(b)) |s2(a)> |s2(b)>.
inline Vec4 projection_state(const MeasurementKernel &kernel, double s1ma, double s1mb, Sign s2a,
                             Sign s2b) {
    const HermitianOp2 s1 = stokes_operator(1);
    const Mat4 p = kron(measurement_operator(kernel, s1, s1ma).mat(),
                        measurement_operator(kernel, s1, s1mb).mat());
    return p * kron(stokes_eigenstate(2, s2a).vec(), stokes_eigenstate(2, s2b).vec());
}

/// Joint density of (s1m(a), s1m(b), s2(a), s2(b)) by direct projection.
inline double joint_density_pair(const MeasurementKernel &kernel, double s1ma, double s1mb,
                                 Sign s2a, Sign s2b, const PairKet &state = bell_state()) {
    return std::norm(inner(projection_state(kernel, s1ma, s1mb, s2a, s2b), state.vec()));
}

/// Closed form of joint_density_pair for bell_state().
inline double joint_density_pair_closed_form(const MeasurementKernel &kernel, double s1ma,
                                             double s1mb, Sign s2a, Sign s2b) {
    const double ds2 = kernel.resolution() * kernel.resolution();
    const double sa = value(s2a);
    const double sb = value(s2b);
    const double x = (s1mb * sa - s1ma * sb) / (2.0 * ds2);
    const double y = (s1ma * sb + s1mb * sa) / (2.0 * ds2);
    const double r = std::numbers::sqrt2;
    const double ch = std::cosh(y);
    const double sh = std::sinh(x);
    return r / (16.0 * std::numbers::pi * ds2) *
           std::exp(-(s1ma * s1ma + s1mb * s1mb + 2.0) / (2.0 * ds2)) *
           (2.0 * sh * ch + (r + sa * sb) * ch * ch + (r - sa * sb) * sh * sh);
}

namespace detail {

/// Signed weight contributed at centers (da, db) of one channel. Generic in
/// the pair state: expands |psi> in the s1 x s1 eigenbasis and pairs every
/// two basis terms; `with_decoherence` multiplies by
/// exp(-((j-j')^2 + (k-k')^2) / (8 ds^2)).
struct CenteredWeight {
    int da;
    int db;
    double weight;
};

inline std::vector<CenteredWeight> channel_terms(const PairKet &state, Sign s2a, Sign s2b,
                                                 const MeasurementKernel *kernel) {
    std::array<Vec2, 2> eig{stokes_eigenstate(1, Sign::plus).vec(),
                            stokes_eigenstate(1, Sign::minus).vec()};
    const std::array<int, 2> ev{+1, -1};
    const Vec2 ea = stokes_eigenstate(2, s2a).vec();
    const Vec2 eb = stokes_eigenstate(2, s2b).vec();

    // amplitude of |j>|k> in the state, times the channel overlaps <ea|j><eb|k>
    std::array<std::array<Complex, 2>, 2> amp{};
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t k = 0; k < 2; ++k) {
            const Complex c = inner(kron(eig[j], eig[k]), state.vec());
            amp[j][k] = c * inner(ea, eig[j]) * inner(eb, eig[k]);
        }
    }

    std::map<std::pair<int, int>, double> acc;
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t k = 0; k < 2; ++k) {
            for (std::size_t jp = 0; jp < 2; ++jp) {
                for (std::size_t kp = 0; kp < 2; ++kp) {
                    double w = (amp[j][k] * std::conj(amp[jp][kp])).real();
                    if (kernel != nullptr) {
                        const double ds2 = kernel->resolution() * kernel->resolution();
                        const int dj = ev[j] - ev[jp];
                        const int dk = ev[k] - ev[kp];
                        w *= std::exp(-static_cast<double>(dj * dj + dk * dk) / (8.0 * ds2));
                    }
                    acc[{(ev[j] + ev[jp]) / 2, (ev[k] + ev[kp]) / 2}] += w;
                }
            }
        }
    }
    std::vector<CenteredWeight> out;
    for (const int da : {-1, 0, 1}) {
        for (const int db : {-1, 0, 1}) {
            out.push_back({da, db, acc[{da, db}]});
        }
    }
    return out;
}

} // namespace detail

/**
 * Nine-component signed Gaussian mixture per channel, centers {-1,0,1}^2,
 * reproducing joint_density_pair pointwise. Components with one zero center
 * carry exp(-1/(2 ds^2)); the (0,0) component carries exp(-1/ds^2).
 */
inline ChannelDecomposition<4> gaussian_decomposition_pair(const MeasurementKernel &kernel,
                                                           const PairKet &state = bell_state()) {
    auto build = [&](Sign s2a, Sign s2b) {
        std::vector<GaussianComponent> comps;
        for (const auto &t : detail::channel_terms(state, s2a, s2b, &kernel)) {
            comps.push_back({t.weight, static_cast<double>(t.da), static_cast<double>(t.db)});
        }
        return SignedGaussianMixture(kernel.resolution(), std::move(comps));
    };
    return ChannelDecomposition<4>({build(Sign::plus, Sign::plus), build(Sign::plus, Sign::minus),
                                    build(Sign::minus, Sign::plus),
                                    build(Sign::minus, Sign::minus)});
}

/**
 * 36-entry signed table with all decoherence factors set to one, keyed by
 * (s1(a), s2(a), s1(b), s2(b)) in row-major order, s1 in {-1,0,1} and
 * s2 in {-1,1}. Independent of the resolution.
 */
inline QuasiProbabilityTable<4> quasi_table_pair(const PairKet &state = bell_state()) {
    std::map<std::array<int, 4>, double> weights;
    for (const auto &[s2a, s2b] : kChannels) {
        for (const auto &t : detail::channel_terms(state, s2a, s2b, nullptr)) {
            weights[{t.da, static_cast<int>(s2a), t.db, static_cast<int>(s2b)}] = t.weight;
        }
    }
    std::vector<QuasiProbabilityTable<4>::Entry> entries(weights.begin(), weights.end());
    return QuasiProbabilityTable<4>(std::move(entries));
}

/// K = c11 + c21 - c12 + c22 with cij = s_i(a) s_j(b).
struct BellCombination {
    double c11;
    double c21;
    double c12;
    double c22;

    [[nodiscard]] double value() const { return c11 + c21 - c12 + c22; }
};

inline BellCombination bell_combination(double s1a, double s2a, double s1b, double s2b) {
    return {s1a * s1b, s2a * s1b, s1a * s2b, s2a * s2b};
}

/// Signed probability of each K value, K evaluated literally on every table
/// entry (s1 = 0 included).
inline std::map<int, double> k_distribution(const QuasiProbabilityTable<4> &table) {
    std::map<int, double> out;
    for (const auto &[key, p] : table.entries()) {
        const double k = bell_combination(key[0], key[1], key[2], key[3]).value();
        out[static_cast<int>(std::lround(k))] += p;
    }
    return out;
}

/// <K> = (1 + exp(-1/(2 ds^2)))^2 / sqrt(2).
inline double k_expectation_closed_form(const MeasurementKernel &kernel) {
    const double f = 1.0 + kernel.decoherence();
    return f * f / std::numbers::sqrt2;
}

/// <K> integrated from the measured joint density over both continuous
/// results and summed over the four channels.
inline double k_expectation_quadrature(const MeasurementKernel &kernel,
                                       const PairKet &state = bell_state()) {
    const double w = numerics::integration_half_width(kernel.resolution());
    return numerics::integrate_2d(
        [&](double a, double b) {
            double acc = 0.0;
            for (const auto &[s2a, s2b] : kChannels) {
                const double k = bell_combination(a, value(s2a), b, value(s2b)).value();
                acc += k * joint_density_pair(kernel, a, b, s2a, s2b, state);
            }
            return acc;
        },
        -w, w, -w, w);
}

/// Sum over channels of the integrated joint density (should be one).
inline double pair_total_probability(const MeasurementKernel &kernel,
                                     const PairKet &state = bell_state()) {
    const double w = numerics::integration_half_width(kernel.resolution());
    return numerics::integrate_2d(
        [&](double a, double b) {
            double acc = 0.0;
            for (const auto &[s2a, s2b] : kChannels) {
                acc += joint_density_pair(kernel, a, b, s2a, s2b, state);
            }
            return acc;
        },
        -w, w, -w, w);
}

/// Integrated mass of a single channel.
inline double channel_mass(const MeasurementKernel &kernel, Sign s2a, Sign s2b) {
    const double w = numerics::integration_half_width(kernel.resolution());
    return numerics::integrate_2d(
        [&](double a, double b) { return joint_density_pair_closed_form(kernel, a, b, s2a, s2b); },
        -w, w, -w, w);
}

inline constexpr double kThresholdTolerance = 1e-12;

/// Resolution at which <K> = 2, by bisection on [0.5, 3].
inline double k_threshold() {
    return numerics::bisect(
        [](double ds) { return k_expectation_closed_form(MeasurementKernel(ds)) - 2.0; }, 0.5, 3.0,
        kThresholdTolerance);
}

/// Analytic inverse: ds* = (-2 ln(2^(3/4) - 1))^(-1/2).
inline double k_threshold_closed_form() {
    return 1.0 / std::sqrt(-2.0 * std::log(std::pow(2.0, 0.75) - 1.0));
}

struct Peak {
    double s1ma;
    double s1mb;
    double density;
    /// K with the continuous peak coordinates substituted for s1.
    double k_point;
};

struct PeakReport {
    /// All maxima tied with the largest density, sorted by (s1ma, s1mb) descending.
    std::vector<Peak> maxima;

    [[nodiscard]] std::size_t multiplicity() const { return maxima.size(); }
    [[nodiscard]] const Peak &best() const { return maxima.front(); }
};

namespace detail {

/// Newton ascent with central-difference derivatives, falling back to a
/// damped gradient step where the Hessian is not negative definite.
template <typename F> std::pair<double, double> refine_maximum(const F &f, double x, double y,
                                                               double h) {
    for (int it = 0; it < 100; ++it) {
        const double f0 = f(x, y);
        const double fxp = f(x + h, y), fxm = f(x - h, y);
        const double fyp = f(x, y + h), fym = f(x, y - h);
        const double gx = (fxp - fxm) / (2.0 * h);
        const double gy = (fyp - fym) / (2.0 * h);
        const double hxx = (fxp - 2.0 * f0 + fxm) / (h * h);
        const double hyy = (fyp - 2.0 * f0 + fym) / (h * h);
        const double hxy =
            (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
        const double det = hxx * hyy - hxy * hxy;
        double dx = 0.0;
        double dy = 0.0;
        if (hxx < 0.0 && det > 0.0) {
            dx = -(hyy * gx - hxy * gy) / det;
            dy = -(-hxy * gx + hxx * gy) / det;
        } else {
            const double g = std::hypot(gx, gy);
            if (g == 0.0) {
                break;
            }
            dx = 0.01 * gx / g;
            dy = 0.01 * gy / g;
        }
        // backtrack until the step does not decrease f
        double t = 1.0;
        while (t > 1e-6 && f(x + t * dx, y + t * dy) < f0) {
            t *= 0.5;
        }
        x += t * dx;
        y += t * dy;
        if (std::hypot(t * dx, t * dy) < 1e-12) {
            break;
        }
    }
    return {x, y};
}

} // namespace detail

/**
 * Maxima of the channel density over the plane: grid scan on [-4, 4]^2 for
 * local maxima, Newton refinement of each, then every maximum tied with the
 * largest (relative 1e-9) is reported.
 */
inline PeakReport peak_locations(const MeasurementKernel &kernel, Sign s2a, Sign s2b) {
    const auto f = [&](double a, double b) {
        return joint_density_pair_closed_form(kernel, a, b, s2a, s2b);
    };
    constexpr double span = 4.0;
    constexpr int n = 161;
    const double step = 2.0 * span / (n - 1);
    std::vector<double> grid(static_cast<std::size_t>(n * n));
    double grid_max = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = f(-span + i * step, -span + j * step);
            grid[static_cast<std::size_t>(i * n + j)] = v;
            grid_max = std::max(grid_max, v);
        }
    }
    std::vector<Peak> candidates;
    for (int i = 1; i + 1 < n; ++i) {
        for (int j = 1; j + 1 < n; ++j) {
            const double v = grid[static_cast<std::size_t>(i * n + j)];
            if (v < 1e-6 * grid_max) {
                continue;
            }
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if ((di != 0 || dj != 0) &&
                        grid[static_cast<std::size_t>((i + di) * n + (j + dj))] > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (!is_max) {
                continue;
            }
            const auto [x, y] =
                detail::refine_maximum(f, -span + i * step, -span + j * step,
                                       1e-4 * std::max(1.0, kernel.resolution()));
            const bool seen = std::any_of(candidates.begin(), candidates.end(), [&](const Peak &p) {
                return std::hypot(p.s1ma - x, p.s1mb - y) < 1e-6;
            });
            if (!seen) {
                candidates.push_back(
                    {x, y, f(x, y), bell_combination(x, value(s2a), y, value(s2b)).value()});
            }
        }
    }
    if (candidates.empty()) {
        throw ConsistencyError("no maximum found for channel density");
    }
    double best = 0.0;
    for (const auto &p : candidates) {
        best = std::max(best, p.density);
    }
    PeakReport report;
    for (const auto &p : candidates) {
        if (p.density >= best * (1.0 - 1e-9)) {
            report.maxima.push_back(p);
        }
    }
    std::sort(report.maxima.begin(), report.maxima.end(), [](const Peak &l, const Peak &r) {
        return l.s1ma != r.s1ma ? l.s1ma > r.s1ma : l.s1mb > r.s1mb;
    });
    return report;
}

/**
 * Local decomposition of |psi_ab><psi_ab| into products of single-photon
 * operators with signed coefficients:
 *   1/4 1(a)1(b) + (s1(a)+s2(a)) s1(b) / (4 sqrt 2)
 *                - (s1(a)-s2(a)) s2(b) / (4 sqrt 2) - 1/4 s3(a)s3(b).
 */
inline HermitianOp4 local_decomposition() {
    const HermitianOp2 one = identity2();
    const HermitianOp2 s1 = stokes_operator(1);
    const HermitianOp2 s2 = stokes_operator(2);
    const HermitianOp2 s3 = stokes_operator(3);
    const double c = 1.0 / (4.0 * std::numbers::sqrt2);
    return 0.25 * tensor_op(one, one) + c * tensor_op(s1 + s2, s1) - c * tensor_op(s1 - s2, s2) -
           0.25 * tensor_op(s3, s3);
}

inline Mat4 projector(const PairKet &state) { return Mat4::outer(state.vec(), state.vec()); }

/// Max entrywise |local_decomposition() - |psi_ab><psi_ab||.
inline double density_matrix_decomposition_residual() {
    return max_abs_diff(local_decomposition().mat(), projector(bell_state()));
}

} // namespace finres::entangled_pair
