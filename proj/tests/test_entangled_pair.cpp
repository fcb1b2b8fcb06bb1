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
#include <numbers>

#include <Eigen/Eigenvalues>
#include <catch_amalgamated.hpp>

#include "finres/entangled_pair.hpp"
#include "oracles.hpp"

using namespace finres;
using namespace finres::entangled_pair;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Table weights by hand, decoherence factors set to one.
double table_by_hand(int s1a, int s2a, int s1b, int s2b) {
    const double r = std::numbers::sqrt2;
    if (s1a != 0 && s1b != 0) {
        return (s1a == s1b ? r + 1.0 : r - 1.0) / (16.0 * r);
    }
    if (s1a == 0 && s1b == 0) {
        return s2a * s2b / (4.0 * r);
    }
    if (s1b == 0) {
        return -s1a * s2b / (8.0 * r);
    }
    return s1b * s2a / (8.0 * r);
}

} // namespace

TEST_CASE("Bell state", "[pair]") {
    const auto psi = bell_state();
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(psi.vec()[kRR]) == 0.0);
    CHECK(std::abs(psi.vec()[kLL]) == 0.0);
    CHECK(std::abs(psi.vec()[kRL] - Complex(r, 0.0)) < 1e-16);
    CHECK(std::abs(psi.vec()[kLR] - r * std::polar(1.0, std::numbers::pi / 4.0)) < 1e-16);
    CHECK_THAT(psi.vec().squared_norm(), WithinAbs(1.0, 1e-15));

    SECTION("eigenstate of both correlation operators") {
        for (const double res : verify_eigenstate_relations(psi)) {
            CHECK(res < 1e-12);
        }
        const auto other = make_pair(1.0, 0.0, 0.0, 0.0);
        const auto bad = verify_eigenstate_relations(other);
        CHECK(std::max(bad[0], bad[1]) > 0.1);
    }
    SECTION("density matrix equals the local operator expansion") {
        CHECK(density_matrix_decomposition_residual() < 1e-14);
        const Mat4 rho = local_decomposition().mat();
        Eigen::Matrix4cd m;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho(i, j);
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
        const auto ev = es.eigenvalues();
        CHECK_THAT(ev(3), WithinAbs(1.0, 1e-14));
        for (int i = 0; i < 3; ++i) {
            CHECK_THAT(ev(i), WithinAbs(0.0, 1e-14));
        }
        CHECK_THAT(rho.trace().real(), WithinAbs(1.0, 1e-15));
    }
}

TEST_CASE("Pair joint density", "[pair]") {
    for (const double ds : {0.6, 2.0}) {
        const MeasurementKernel k(ds);
        const auto dec = gaussian_decomposition_pair(k);
        double worst_closed = 0.0;
        double worst_hand = 0.0;
        double worst_mix = 0.0;
        double worst_sym = 0.0;
        for (int i = -40; i <= 40; ++i) {
            for (int j = -40; j <= 40; ++j) {
                const double a = 0.1 * i;
                const double b = 0.1 * j;
                for (const auto &[sa, sb] : kChannels) {
                    const double m = joint_density_pair(k, a, b, sa, sb);
                    worst_closed = std::max(worst_closed,
                                            std::abs(m - joint_density_pair_closed_form(k, a, b, sa, sb)));
                    worst_hand = std::max(worst_hand, std::abs(m - oracle::pair_mixture_by_hand(
                                                                       ds, a, b, value(sa), value(sb))));
                    worst_mix = std::max(worst_mix, std::abs(m - dec[channel(sa, sb)](a, b)));
                    // exchange of photons with both s2 labels reversed
                    worst_sym = std::max(worst_sym,
                                         std::abs(m - joint_density_pair(k, b, a, flip(sb), flip(sa))));
                    // simultaneous reversal of (s1m, s2) on both photons
                    worst_sym = std::max(worst_sym,
                                         std::abs(m - joint_density_pair(k, -a, -b, flip(sa), flip(sb))));
                }
            }
        }
        CHECK(worst_closed < 1e-12);
        CHECK(worst_hand < 1e-12);
        CHECK(worst_mix < 1e-12);
        CHECK(worst_sym < 1e-12);
    }
    SECTION("unit total mass") {
        for (const double ds : {0.6, 2.0}) {
            CHECK_THAT(pair_total_probability(MeasurementKernel(ds)), WithinAbs(1.0, 1e-8));
        }
    }
    SECTION("channel masses: s2 correlation damped by the s1 measurement") {
        // sum of the channel weights: 1/4 + e^2 s2(a) s2(b) / (4 sqrt 2)
        const MeasurementKernel k(0.8);
        const double e = k.decoherence();
        for (const auto &[sa, sb] : kChannels) {
            const double expected = 0.25 + e * e * value(sa) * value(sb) / (4.0 * std::numbers::sqrt2);
            CHECK_THAT(channel_mass(k, sa, sb), WithinAbs(expected, 1e-9));
        }
    }
}

TEST_CASE("Pair decomposition weights", "[pair]") {
    const double ds = 0.7;
    const MeasurementKernel k(ds);
    const double e = k.decoherence();
    const double r = std::numbers::sqrt2;
    const auto dec = gaussian_decomposition_pair(k);
    for (const auto &[sa, sb] : kChannels) {
        const auto &mix = dec[channel(sa, sb)];
        const int a = value(sa);
        const int b = value(sb);
        CHECK_THAT(mix.weight_at(1.0, 1.0), WithinAbs((r + 1.0) / (16.0 * r), 1e-15));
        CHECK_THAT(mix.weight_at(-1.0, 1.0), WithinAbs((r - 1.0) / (16.0 * r), 1e-15));
        CHECK_THAT(mix.weight_at(-1.0, 0.0), WithinAbs(e * b / (8.0 * r), 1e-15));
        CHECK_THAT(mix.weight_at(0.0, -1.0), WithinAbs(-e * a / (8.0 * r), 1e-15));
        CHECK_THAT(mix.weight_at(0.0, 0.0), WithinAbs(e * e * a * b / (4.0 * r), 1e-15));
    }
}

TEST_CASE("Pair quasi-probability table", "[pair]") {
    const auto t = quasi_table_pair();
    REQUIRE(t.size() == 36);
    CHECK_THAT(t.total(), WithinAbs(1.0, 1e-14));
    for (const auto &[key, p] : t.entries()) {
        CHECK_THAT(p, WithinAbs(table_by_hand(key[0], key[1], key[2], key[3]), 1e-15));
    }
    CHECK_THAT(t.at({0, 1, 0, -1}), WithinAbs(-std::numbers::sqrt2 / 8.0, 1e-15));

    SECTION("K distribution") {
        const auto dist = k_distribution(t);
        double mean = 0.0;
        double mass = 0.0;
        for (const auto &[kv, p] : dist) {
            mean += kv * p;
            mass += p;
        }
        CHECK_THAT(mass, WithinAbs(1.0, 1e-14));
        CHECK_THAT(mean, WithinAbs(2.0 * std::numbers::sqrt2, 1e-14));
        CHECK_THAT(dist.at(2), WithinAbs(1.03033008588991064330, 1e-14));
        CHECK_THAT(dist.at(-2), WithinAbs(-0.030330085889910643, 1e-14));
        CHECK(dist.at(-2) < 0.0);
    }
    SECTION("photon a alone has an ordinary probability table") {
        for (const int s1a : {-1, 0, 1}) {
            for (const int s2a : {-1, 1}) {
                double p = 0.0;
                for (const int s1b : {-1, 0, 1}) {
                    for (const int s2b : {-1, 1}) {
                        p += t.at({s1a, s2a, s1b, s2b});
                    }
                }
                CHECK(p >= -1e-15);
            }
        }
    }
}

TEST_CASE("Expectation of K", "[pair]") {
    SECTION("closed form against quadrature of the measured density") {
        for (const double ds : {0.3, 0.6, 1.0, 2.0}) {
            const MeasurementKernel k(ds);
            CHECK_THAT(k_expectation_quadrature(k), WithinAbs(k_expectation_closed_form(k), 1e-8));
        }
        CHECK_THAT(k_expectation_closed_form(MeasurementKernel(2.0)),
                   WithinAbs(2.50584118447711416797, 1e-14));
        CHECK_THAT(k_expectation_closed_form(MeasurementKernel(0.3)),
                   WithinAbs(0.712584585829059256406, 1e-14));
    }
    SECTION("monotone in the resolution") {
        double prev = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double ds = 0.2 + 4.8 * i / 99.0;
            const double v = k_expectation_closed_form(MeasurementKernel(ds));
            CHECK(v > prev);
            prev = v;
        }
        CHECK(prev < 2.0 * std::numbers::sqrt2);
    }
    SECTION("threshold") {
        const double t = k_threshold();
        CHECK_THAT(t, WithinAbs(1.14253345927433990383, 1e-11));
        CHECK_THAT(k_threshold_closed_form(), WithinAbs(1.14253345927433990383, 1e-14));
        CHECK_THAT(k_expectation_closed_form(MeasurementKernel(t)), WithinAbs(2.0, 1e-10));
    }
}

TEST_CASE("Peaks of the (+,-) channel at ds = 2", "[pair]") {
    const auto report = peak_locations(MeasurementKernel(2.0), Sign::plus, Sign::minus);
    REQUIRE(report.multiplicity() >= 1);
    for (const auto &p : report.maxima) {
        CHECK_THAT(std::abs(p.s1ma), WithinAbs(1.38276618, 1e-5));
        CHECK_THAT(std::abs(p.s1mb), WithinAbs(1.38276618, 1e-5));
    }
    const auto &best = report.best();
    CHECK_THAT(best.density,
               WithinRel(joint_density_pair(MeasurementKernel(2.0), best.s1ma, best.s1mb, Sign::plus,
                                            Sign::minus),
                         1e-12));
    CHECK_THAT(best.k_point, WithinAbs(3.68, 0.01));
}
