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

#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "finres/single_photon.hpp"
#include "oracles.hpp"

using namespace finres;
using namespace finres::single_photon;
using Catch::Matchers::WithinAbs;

namespace {
const std::array<double, 4> kResolutions{0.3, 0.6, 1.0, 2.0};
}

TEST_CASE("POM states", "[single-photon]") {
    const MeasurementKernel k(0.6);
    SECTION("s1m = 0: equal-magnitude components, relative phase +i") {
        const Vec2 v = pom_state(k, 0.0, Sign::plus);
        CHECK_THAT(std::abs(v[kR]), WithinAbs(std::abs(v[kL]), 1e-16));
        CHECK(std::abs(v[kL] - Complex(0.0, 1.0) * v[kR]) < 1e-16);
    }
    SECTION("the two channels are not orthogonal away from s1m = 0") {
        CHECK(std::abs(inner(pom_state(k, 0.7, Sign::plus), pom_state(k, 0.7, Sign::minus))) >
              1e-3);
    }
    SECTION("overlap with the diagonal input gives the density of that channel") {
        const Vec2 v = pom_state(k, 1.0, Sign::plus);
        const double d = std::norm(inner(v, diagonal_state().vec()));
        CHECK_THAT(d, WithinAbs(oracle::diagonal_density_by_hand(0.6, 1.0, 1), 1e-15));
    }
    SECTION("summed over both channels, the squared norm integrates to 2") {
        double total = 0.0;
        for (const Sign s2 : kSigns) {
            total += oracle::simpson([&](double s) { return pom_state(k, s, s2).squared_norm(); },
                                     -8.0, 8.0);
        }
        CHECK_THAT(total, WithinAbs(2.0, 1e-10));
    }
}

TEST_CASE("Joint density", "[single-photon]") {
    const auto psi = diagonal_state();
    SECTION("exact zero at s1m = 0 in the s2 = -1 channel") {
        for (const double ds : kResolutions) {
            CHECK(std::abs(joint_density(psi, MeasurementKernel(ds), 0.0, Sign::minus)) < 1e-15);
        }
    }
    SECTION("matrix path equals the closed form and the hand-expanded oracle") {
        double worst = 0.0;
        for (const double ds : kResolutions) {
            const MeasurementKernel k(ds);
            for (int i = -80; i <= 80; ++i) {
                const double s = 0.05 * i;
                for (const Sign s2 : kSigns) {
                    const double m = joint_density(psi, k, s, s2);
                    worst = std::max({worst, std::abs(m - diagonal_state_density(k, s, s2)),
                                      std::abs(m - oracle::diagonal_density_by_hand(
                                                       ds, s, static_cast<int>(s2)))});
                }
            }
        }
        CHECK(worst < 1e-12);
    }
    SECTION("ds = 0.6, s1m = 1, s2 = +1") {
        CHECK_THAT(joint_density(psi, MeasurementKernel(0.6), 1.0, Sign::plus),
                   WithinAbs(0.187539269983066193620, 1e-15));
    }
    SECTION("minus-channel maxima near +-1.1 at ds = 0.6") {
        const MeasurementKernel k(0.6);
        const auto right = locate_peak(psi, k, Sign::minus, 0.0, 4.0);
        const auto left = locate_peak(psi, k, Sign::minus, -4.0, 0.0);
        // stationary point of exp(-s^2/0.72) sinh^2(s/0.72), 30-digit root
        CHECK_THAT(right.location, WithinAbs(1.09910637220089603, 1e-6));
        CHECK_THAT(left.location, WithinAbs(-1.09910637220089603, 1e-6));
        CHECK_THAT(right.location, WithinAbs(1.1, 0.05));
    }
    SECTION("normalization for random states") {
        std::mt19937_64 rng(21);
        for (int i = 0; i < 6; ++i) {
            const auto state = oracle::random_state(rng);
            for (const double ds : kResolutions) {
                CHECK_THAT(total_probability(state, MeasurementKernel(ds)), WithinAbs(1.0, 1e-9));
            }
        }
    }
}

TEST_CASE("Gaussian decomposition", "[single-photon]") {
    SECTION("diagonal input weights") {
        for (const double ds : kResolutions) {
            const MeasurementKernel k(ds);
            const auto dec = gaussian_decomposition(diagonal_state(), k);
            const double e = std::exp(-1.0 / (2.0 * ds * ds));
            const auto &minus = dec[channel(Sign::minus)];
            const auto &plus = dec[channel(Sign::plus)];
            CHECK_THAT(minus.weight_at(-1.0), WithinAbs(0.25, 1e-15));
            CHECK_THAT(minus.weight_at(0.0), WithinAbs(-0.5 * e, 1e-15));
            CHECK_THAT(minus.weight_at(1.0), WithinAbs(0.25, 1e-15));
            CHECK_THAT(plus.weight_at(0.0), WithinAbs(0.5 * e, 1e-15));
            CHECK(minus.sigma() == ds);
        }
    }
    SECTION("s1 eigenstate: single unit-weight component after summing s2") {
        const auto dec = gaussian_decomposition(stokes_eigenstate(1, Sign::plus), MeasurementKernel(0.6));
        for (const double c : {-1.0, 0.0, 1.0}) {
            const double summed = dec[0].weight_at(c) + dec[1].weight_at(c);
            CHECK_THAT(summed, WithinAbs(c == 1.0 ? 1.0 : 0.0, 1e-15));
        }
    }
    SECTION("random states: mixture equals joint density pointwise") {
        std::mt19937_64 rng(7);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const auto state = oracle::random_state(rng);
            for (const double ds : kResolutions) {
                const MeasurementKernel k(ds);
                const auto dec = gaussian_decomposition(state, k);
                for (int j = -80; j <= 80; ++j) {
                    const double s = 0.05 * j;
                    for (const Sign s2 : kSigns) {
                        worst = std::max(worst,
                                         std::abs(dec[channel(s2)](s) - joint_density(state, k, s, s2)));
                    }
                }
            }
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("Discrete quasi-probability table", "[single-photon]") {
    SECTION("diagonal input") {
        const auto t = discrete_quasi_table(diagonal_state());
        REQUIRE(t.size() == 6);
        const std::array<std::pair<std::array<int, 2>, double>, 6> expected{{{{-1, -1}, 0.25},
                                                                             {{-1, 1}, 0.25},
                                                                             {{0, -1}, -0.5},
                                                                             {{0, 1}, 0.5},
                                                                             {{1, -1}, 0.25},
                                                                             {{1, 1}, 0.25}}};
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(t.entries()[i].first == expected[i].first);
            CHECK_THAT(t.entries()[i].second, WithinAbs(expected[i].second, 1e-12));
        }
        CHECK_THAT(t.marginal(1, 1), WithinAbs(1.0, 1e-15));
        CHECK_THAT(t.marginal(1, -1), WithinAbs(0.0, 1e-15));
    }
    SECTION("|R> input: s1 = +-1 entries 1/4, s1 = 0 entries 0") {
        const auto t = discrete_quasi_table(make_polarization(1.0, 0.0));
        for (const int s2 : {-1, 1}) {
            CHECK_THAT(t.at({-1, s2}), WithinAbs(0.25, 1e-15));
            CHECK_THAT(t.at({1, s2}), WithinAbs(0.25, 1e-15));
            CHECK_THAT(t.at({0, s2}), WithinAbs(0.0, 1e-15));
            CHECK_THAT(t.marginal(1, s2), WithinAbs(0.5, 1e-15));
        }
    }
    SECTION("s2 marginal reproduces projective statistics; reinserted decoherence and "
            "Gaussian smearing give back the joint density") {
        std::mt19937_64 rng(99);
        for (int i = 0; i < 20; ++i) {
            const auto state = oracle::random_state(rng);
            const auto t = discrete_quasi_table(state);
            CHECK_THAT(t.total(), WithinAbs(1.0, 1e-12));
            for (const Sign s2 : kSigns) {
                CHECK_THAT(t.marginal(1, static_cast<int>(s2)),
                           WithinAbs(projective_s2_probability(state, s2), 1e-12));
            }
            const double ds = 0.4 + 0.1 * i;
            const MeasurementKernel k(ds);
            const double e = std::exp(-1.0 / (2.0 * ds * ds));
            for (const double s : {-2.0, -0.3, 0.0, 0.9, 2.5}) {
                for (const Sign s2 : kSigns) {
                    double rebuilt = 0.0;
                    for (const int s1 : {-1, 0, 1}) {
                        rebuilt += (s1 == 0 ? e : 1.0) * t.at({s1, static_cast<int>(s2)}) *
                                   oracle::gauss(s - s1, ds);
                    }
                    CHECK_THAT(rebuilt, WithinAbs(joint_density(state, k, s, s2), 1e-12));
                }
            }
        }
    }
}

TEST_CASE("Correlation of s1m^2 and s2", "[single-photon]") {
    SECTION("diagonal input: measured covariance is -exp(-1/(2 ds^2))") {
        // Oracle: moments of the three-Gaussian mixture by hand,
        // int s^2 G(s - d) = d^2 + ds^2.
        for (const double ds : {0.3, 0.6, 1.0, 1.5, 2.0}) {
            const double e = std::exp(-1.0 / (2.0 * ds * ds));
            const double sq_s2 = e * ds * ds;
            const double sq = 1.0 + ds * ds;
            const double s2 = e;
            const double by_moments = sq_s2 - sq * s2;
            const MeasurementKernel k(ds);
            CHECK_THAT(correlation_s1sq_s2(diagonal_state(), k), WithinAbs(by_moments, 1e-10));
            CHECK_THAT(by_moments, WithinAbs(-e, 1e-15));
        }
        CHECK_THAT(correlation_s1sq_s2(diagonal_state(), MeasurementKernel(0.6)),
                   WithinAbs(-0.249352208777296199, 1e-10));
    }
    SECTION("operator-ordering form evaluates to -2 exp(-1/(2 ds^2)) on the diagonal input") {
        for (const double ds : {0.3, 0.6, 2.0}) {
            CHECK_THAT(correlation_s1sq_s2_operator(diagonal_state(), MeasurementKernel(ds)),
                       WithinAbs(-2.0 * std::exp(-1.0 / (2.0 * ds * ds)), 1e-15));
        }
    }
    SECTION("random states: measured covariance is half the operator-ordering form") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 20; ++i) {
            const auto state = oracle::random_state(rng);
            const MeasurementKernel k(0.3 + 0.1 * i);
            CHECK_THAT(correlation_s1sq_s2(state, k),
                       WithinAbs(0.5 * correlation_s1sq_s2_operator(state, k), 1e-9));
        }
    }
    SECTION("s1 eigenstate: operator form vanishes") {
        CHECK_THAT(correlation_s1sq_s2_operator(stokes_eigenstate(1, Sign::plus), MeasurementKernel(0.6)),
                   WithinAbs(0.0, 1e-15));
    }
}
