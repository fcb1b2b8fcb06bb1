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
 * Signed Gaussian mixtures (one per measurement channel) and discrete signed
 * quasi-probability tables.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace finres {

inline constexpr double kWeightSumTolerance = 1e-12;

/// One shifted Gaussian. center_b is set for two-photon (2-D) components.
struct GaussianComponent {
    double weight;
    double center_a;
    std::optional<double> center_b;
};

/// Sum of shifted normalized Gaussians with a common width; weights may be negative.
class SignedGaussianMixture {
  public:
    SignedGaussianMixture(double sigma, std::vector<GaussianComponent> components)
        : sigma_(sigma), components_(std::move(components)) {
        if (!std::isfinite(sigma_) || !(sigma_ > 0.0)) {
            throw RejectedInput("mixture width must be positive");
        }
        const bool two_d = !components_.empty() && components_.front().center_b.has_value();
        for (const auto &c : components_) {
            if (c.center_b.has_value() != two_d) {
                throw RejectedInput("mixture mixes 1-D and 2-D components");
            }
        }
    }

    [[nodiscard]] double sigma() const { return sigma_; }
    [[nodiscard]] const std::vector<GaussianComponent> &components() const { return components_; }
    [[nodiscard]] bool is_two_dimensional() const {
        return !components_.empty() && components_.front().center_b.has_value();
    }

    [[nodiscard]] double total_weight() const {
        double acc = 0.0;
        for (const auto &c : components_) {
            acc += c.weight;
        }
        return acc;
    }

    /// Summed weight of components at the given center(s).
    [[nodiscard]] double weight_at(double center_a, std::optional<double> center_b = {}) const {
        double acc = 0.0;
        for (const auto &c : components_) {
            if (c.center_a == center_a && c.center_b == center_b) {
                acc += c.weight;
            }
        }
        return acc;
    }

    double operator()(double x) const {
        double acc = 0.0;
        for (const auto &c : components_) {
            acc += c.weight * numerics::gaussian_pdf(x - c.center_a, sigma_);
        }
        return acc;
    }

    double operator()(double x, double y) const {
        double acc = 0.0;
        for (const auto &c : components_) {
            acc += c.weight * numerics::gaussian_pdf(x - c.center_a, sigma_) *
                   numerics::gaussian_pdf(y - c.center_b.value_or(0.0), sigma_);
        }
        return acc;
    }

  private:
    double sigma_;
    std::vector<GaussianComponent> components_;
};

/**
 * One signed mixture per discrete outcome channel. Channels = 2 for a single
 * photon (indexed by s2 = +1, -1) and 4 for a pair (++, +-, -+, --).
 * The weights of all channels together sum to one.
 */
template <std::size_t Channels> class ChannelDecomposition {
  public:
    explicit ChannelDecomposition(std::array<SignedGaussianMixture, Channels> channels)
        : channels_(std::move(channels)) {
        double total = 0.0;
        for (const auto &m : channels_) {
            if (m.sigma() != channels_.front().sigma()) {
                throw RejectedInput("channel mixtures must share a single width");
            }
            total += m.total_weight();
        }
        if (std::abs(total - 1.0) > kWeightSumTolerance) {
            throw ConsistencyError("decomposition weights sum to " + std::to_string(total));
        }
    }

    const SignedGaussianMixture &operator[](std::size_t channel) const {
        return channels_.at(channel);
    }
    [[nodiscard]] const std::array<SignedGaussianMixture, Channels> &channels() const {
        return channels_;
    }

  private:
    std::array<SignedGaussianMixture, Channels> channels_;
};

/**
 * Discrete signed joint distribution. Keys are integer outcome tuples; for a
 * single photon (s1, s2), for a pair (s1(a), s2(a), s1(b), s2(b)). Entries
 * keep insertion order, which callers make row-major.
 */
template <std::size_t Arity> class QuasiProbabilityTable {
  public:
    using Key = std::array<int, Arity>;
    using Entry = std::pair<Key, double>;

    explicit QuasiProbabilityTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
        double total = 0.0;
        for (const auto &[key, p] : entries_) {
            total += p;
        }
        if (std::abs(total - 1.0) > kWeightSumTolerance) {
            throw ConsistencyError("quasi-probabilities sum to " + std::to_string(total));
        }
    }

    [[nodiscard]] const std::vector<Entry> &entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }

    [[nodiscard]] double at(const Key &key) const {
        const auto it = std::find_if(entries_.begin(), entries_.end(),
                                     [&](const Entry &e) { return e.first == key; });
        if (it == entries_.end()) {
            throw RejectedInput("no such outcome in quasi-probability table");
        }
        return it->second;
    }

    [[nodiscard]] double total() const {
        double acc = 0.0;
        for (const auto &e : entries_) {
            acc += e.second;
        }
        return acc;
    }

    /// Sum of entries whose key component `axis` equals `v`.
    [[nodiscard]] double marginal(std::size_t axis, int v) const {
        double acc = 0.0;
        for (const auto &[key, p] : entries_) {
            if (key.at(axis) == v) {
                acc += p;
            }
        }
        return acc;
    }

  private:
    std::vector<Entry> entries_;
};

} // namespace finres
