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
 * Synthetic measurement records generated by applying the measurement
 * postulate step by step (s1 finite resolution, collapse, then projective
 * s2), plus estimators over the records.
 *
 * Reproducibility: records are produced in fixed-size chunks, each with its
 * own generator seeded from (seed, chunk index), and concatenated in chunk
 * order, so output is bit-identical for any thread count.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "entangled_pair.hpp"
#include "errors.hpp"
#include "numerics.hpp"
#include "operator_core.hpp"
#include "single_photon.hpp"

namespace finres::monte_carlo {

/// One detection event. Single-photon runs leave the b fields empty.
struct SampleRecord {
    double s1ma;
    std::optional<double> s1mb;
    Sign sigma_a;
    std::optional<Sign> sigma_b;

    [[nodiscard]] bool is_pair() const { return s1mb.has_value() && sigma_b.has_value(); }
    friend bool operator==(const SampleRecord &, const SampleRecord &) = default;
};

struct EstimatorResult {
    double mean;
    double std_error;
    std::size_t n;
};

inline constexpr std::size_t kChunkSize = 8192;

/// Default worker count: $FINRES_THREADS if set and positive, else hardware concurrency.
inline std::size_t default_thread_count() {
    if (const char *env = std::getenv("FINRES_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

struct SamplerOptions {
    std::size_t threads = default_thread_count();
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    return splitmix64(splitmix64(seed) ^ splitmix64(chunk + 0x632be59bd9b4e019ULL));
}

/// 64-bit Mersenne twister with a platform-independent uniform on (0, 1).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

  private:
    std::mt19937_64 engine_;
};

/**
 * Inverse CDF of p_plus G(s - 1) + p_minus G(s + 1) at u, by Newton steps on
 * the closed-form CDF, kept inside a shrinking bracket.
 */
inline double inverse_mixture_cdf(double u, double p_plus, double p_minus, double sigma) {
    const auto cdf = [&](double s) {
        return p_plus * numerics::gaussian_cdf(s - 1.0, sigma) +
               p_minus * numerics::gaussian_cdf(s + 1.0, sigma);
    };
    const auto pdf = [&](double s) {
        return p_plus * numerics::gaussian_pdf(s - 1.0, sigma) +
               p_minus * numerics::gaussian_pdf(s + 1.0, sigma);
    };
    double lo = -1.0 - 12.0 * sigma;
    double hi = 1.0 + 12.0 * sigma;
    // start from the inverse of whichever component dominates
    double s = p_plus >= p_minus ? 1.0 : -1.0;
    for (int it = 0; it < 200; ++it) {
        const double f = cdf(s) - u;
        if (f > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        const double d = pdf(s);
        double next = d > 0.0 ? s - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - s) <= 1e-13 * (1.0 + std::abs(s)) || hi - lo <= 1e-13) {
            return next;
        }
        s = next;
    }
    return s;
}

namespace detail {

/// Populations of the s1 = +1 / -1 eigenspaces of one photon.
inline std::pair<double, double> s1_populations(const PolarizationKet &state) {
    const double p = std::norm(inner(stokes_eigenstate(1, Sign::plus).vec(), state.vec()));
    return {p, 1.0 - p};
}

inline std::pair<double, double> s1_populations(const PairKet &state, Photon photon) {
    const Mat2 proj = involution_projector(stokes_operator(1), Sign::plus);
    const Mat4 local =
        photon == Photon::a ? kron(proj, Mat2::identity()) : kron(Mat2::identity(), proj);
    const double p = std::clamp(expectation(local, state), 0.0, 1.0);
    return {p, 1.0 - p};
}

template <typename Generate>
std::vector<SampleRecord> run_chunks(std::uint64_t seed, std::size_t n,
                                     const SamplerOptions &options, const Generate &generate) {
    if (n < 1) {
        throw RejectedInput("sample count must be at least 1");
    }
    std::vector<SampleRecord> records(n);
    const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t c = next++; c < chunks; c = next++) {
            Rng rng(chunk_seed(seed, c));
            const std::size_t end = std::min(n, (c + 1) * kChunkSize);
            for (std::size_t i = c * kChunkSize; i < end; ++i) {
                records[i] = generate(rng);
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, chunks);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    return records;
}

} // namespace detail

/// n single-photon records: s1m from the outcome marginal, collapse, then s2.
inline std::vector<SampleRecord> sample_single(const PolarizationKet &state,
                                               const MeasurementKernel &kernel, std::uint64_t seed,
                                               std::size_t n, const SamplerOptions &options = {}) {
    const HermitianOp2 s1 = stokes_operator(1);
    const Vec2 e_plus = stokes_eigenstate(2, Sign::plus).vec();
    const auto [p_plus, p_minus] = detail::s1_populations(state);
    return detail::run_chunks(seed, n, options, [&](Rng &rng) {
        const double s =
            inverse_mixture_cdf(rng.uniform(), p_plus, p_minus, kernel.resolution());
        const auto collapsed = apply_measurement(state, kernel, s1, s);
        const double prob_plus = std::norm(inner(e_plus, collapsed.post_state.vec()));
        const Sign sigma = rng.uniform() < prob_plus ? Sign::plus : Sign::minus;
        return SampleRecord{s, std::nullopt, sigma, std::nullopt};
    });
}

/// n coincidence records: photon a measured and collapsed first, then photon
/// b from its conditional marginal, then both s2 outcomes jointly.
inline std::vector<SampleRecord> sample_pair(const MeasurementKernel &kernel, std::uint64_t seed,
                                             std::size_t n, const SamplerOptions &options = {},
                                             const PairKet &state = entangled_pair::bell_state()) {
    const HermitianOp2 s1 = stokes_operator(1);
    std::array<Vec4, 4> channel_states;
    for (std::size_t c = 0; c < 4; ++c) {
        const auto [sa, sb] = entangled_pair::kChannels[c];
        channel_states[c] = kron(stokes_eigenstate(2, sa).vec(), stokes_eigenstate(2, sb).vec());
    }
    const auto [pa_plus, pa_minus] = detail::s1_populations(state, Photon::a);
    return detail::run_chunks(seed, n, options, [&](Rng &rng) {
        const double sa = inverse_mixture_cdf(rng.uniform(), pa_plus, pa_minus, kernel.resolution());
        const PairKet after_a = apply_measurement(state, kernel, s1, sa, Photon::a).post_state;
        const auto [pb_plus, pb_minus] = detail::s1_populations(after_a, Photon::b);
        const double sb = inverse_mixture_cdf(rng.uniform(), pb_plus, pb_minus, kernel.resolution());
        const PairKet after_b = apply_measurement(after_a, kernel, s1, sb, Photon::b).post_state;

        double u = rng.uniform();
        std::size_t chosen = 3;
        for (std::size_t c = 0; c < 3; ++c) {
            const double p = std::norm(inner(channel_states[c], after_b.vec()));
            if (u < p) {
                chosen = c;
                break;
            }
            u -= p;
        }
        const auto [sig_a, sig_b] = entangled_pair::kChannels[chosen];
        return SampleRecord{sa, sb, sig_a, sig_b};
    });
}

/// Mean and standard error of independent values.
inline EstimatorResult estimate_mean(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw RejectedInput("at least two samples are required");
    }
    double mean = 0.0;
    for (const double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

/// Per-record K = s1ma s1mb + sa s1mb - s1ma sb + sa sb, averaged.
inline EstimatorResult estimate_k(std::span<const SampleRecord> records) {
    std::vector<double> k;
    k.reserve(records.size());
    for (const auto &r : records) {
        if (!r.is_pair()) {
            throw RejectedInput("estimate_k needs two-photon records");
        }
        k.push_back(entangled_pair::bell_combination(r.s1ma, value(r.sigma_a), *r.s1mb,
                                                     value(*r.sigma_b))
                        .value());
    }
    return estimate_mean(k);
}

/// Sample mean of the projective s2 outcome of single-photon records.
inline EstimatorResult estimate_sigma_mean(std::span<const SampleRecord> records) {
    std::vector<double> s;
    s.reserve(records.size());
    for (const auto &r : records) {
        if (r.is_pair()) {
            throw RejectedInput("expected single-photon records");
        }
        s.push_back(value(r.sigma_a));
    }
    return estimate_mean(s);
}

/**
 * Sample covariance <s1m^2 s2> - <s1m^2><s2> of single-photon records. The
 * standard error uses the influence function (x - <x>)(y - <y>) - C.
 */
inline EstimatorResult estimate_correlation_s1sq_s2(std::span<const SampleRecord> records) {
    const std::size_t n = records.size();
    if (n < 2) {
        throw RejectedInput("at least two samples are required");
    }
    double mx = 0.0;
    double my = 0.0;
    for (const auto &r : records) {
        if (r.is_pair()) {
            throw RejectedInput("correlation estimate needs single-photon records");
        }
        mx += r.s1ma * r.s1ma;
        my += value(r.sigma_a);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    std::vector<double> prod;
    prod.reserve(n);
    for (const auto &r : records) {
        prod.push_back((r.s1ma * r.s1ma - mx) * (value(r.sigma_a) - my));
    }
    // mean((x - mx)(y - my)) == mean(xy) - mx my
    return estimate_mean(prod);
}

} // namespace finres::monte_carlo
