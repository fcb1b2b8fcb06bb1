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
 * States, Stokes operators and the finite-resolution (Gaussian) measurement
 * operator for single photons and photon pairs.
 *
 * Basis convention, used everywhere: single photon {|R>, |L>} (index 0, 1);
 * pair {|RR>, |RL>, |LR>, |LL>} with photon a as the left tensor factor.
 * Linear and diagonal polarizations are eigenstates of s1 and s2 expressed
 * in this basis, e.g. x = (|R> + |L>)/sqrt(2), diagonal = (|R> + i|L>)/sqrt(2).
 */

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"

namespace finres {

inline constexpr std::size_t kR = 0;
inline constexpr std::size_t kL = 1;
inline constexpr std::size_t kRR = 0;
inline constexpr std::size_t kRL = 1;
inline constexpr std::size_t kLR = 2;
inline constexpr std::size_t kLL = 3;

/// Eigenvalue label of a projective +-1 outcome.
enum class Sign : int { minus = -1, plus = +1 };

constexpr double value(Sign s) { return static_cast<double>(static_cast<int>(s)); }
constexpr Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

inline Sign sign_from_int(int v) {
    if (v == 1) {
        return Sign::plus;
    }
    if (v == -1) {
        return Sign::minus;
    }
    throw RejectedInput("sign must be +1 or -1, got " + std::to_string(v));
}

inline constexpr std::array<Sign, 2> kSigns{Sign::plus, Sign::minus};

/**
 * Unit-norm state vector. Construction renormalizes a norm error between
 * 1e-12 and 1e-6 and rejects anything larger; use normalize() for vectors
 * that are legitimately unnormalized (e.g. after applying an operator).
 */
template <std::size_t N> class Ket {
  public:
    static constexpr double kRenormalizeTolerance = 1e-12;
    static constexpr double kRejectTolerance = 1e-6;

    explicit Ket(const Vec<N> &amplitudes) : amps_(amplitudes) {
        if (!amps_.is_finite()) {
            throw RejectedInput("state amplitudes must be finite");
        }
        const double n2 = amps_.squared_norm();
        const double deviation = std::abs(n2 - 1.0);
        if (deviation > kRejectTolerance) {
            throw RejectedInput("state norm^2 " + std::to_string(n2) +
                                " deviates from 1 by more than 1e-6");
        }
        if (deviation > kRenormalizeTolerance) {
            amps_ = Complex(1.0 / std::sqrt(n2)) * amps_;
        }
    }

    /// Scales any nonzero finite vector to unit norm.
    static Ket normalize(const Vec<N> &v) {
        const double n2 = v.squared_norm();
        if (!v.is_finite() || !(n2 > 0.0)) {
            throw RejectedInput("cannot normalize a zero or non-finite vector");
        }
        return Ket(Complex(1.0 / std::sqrt(n2)) * v);
    }

    [[nodiscard]] const Vec<N> &vec() const { return amps_; }
    [[nodiscard]] Complex amp(std::size_t i) const { return amps_[i]; }

  private:
    Vec<N> amps_;
};

using PolarizationKet = Ket<2>;
using PairKet = Ket<4>;

inline PolarizationKet make_polarization(Complex amp_r, Complex amp_l) {
    return PolarizationKet(Vec2{{amp_r, amp_l}});
}

inline PairKet make_pair(Complex rr, Complex rl, Complex lr, Complex ll) {
    return PairKet(Vec4{{rr, rl, lr, ll}});
}

/// Hermitian matrix, checked entrywise against its adjoint at construction.
template <std::size_t N> class HermitianOp {
  public:
    static constexpr double kTolerance = 1e-14;

    explicit HermitianOp(const Mat<N> &m) : m_(m) {
        if (!m_.is_finite()) {
            throw RejectedInput("operator entries must be finite");
        }
        double scale = 1.0;
        for (const auto &c : m_.data) {
            scale = std::max(scale, std::abs(c));
        }
        if (max_abs_diff(m_, m_.adjoint()) > kTolerance * scale) {
            throw RejectedInput("operator is not Hermitian");
        }
    }

    [[nodiscard]] const Mat<N> &mat() const { return m_; }
    [[nodiscard]] Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    friend HermitianOp operator+(const HermitianOp &a, const HermitianOp &b) {
        return HermitianOp(a.m_ + b.m_);
    }
    friend HermitianOp operator-(const HermitianOp &a, const HermitianOp &b) {
        return HermitianOp(a.m_ - b.m_);
    }
    friend HermitianOp operator*(double s, const HermitianOp &a) {
        return HermitianOp(Complex(s) * a.m_);
    }

  private:
    Mat<N> m_;
};

using HermitianOp2 = HermitianOp<2>;
using HermitianOp4 = HermitianOp<4>;
using Op4 = Mat4;

inline HermitianOp2 identity2() { return HermitianOp2(Mat2::identity()); }
inline HermitianOp4 identity4() { return HermitianOp4(Mat4::identity()); }

/// Single-photon Stokes operator s_index in the {|R>, |L>} basis:
/// s1 = |L><R| + |R><L|, s2 = i|L><R| - i|R><L|, s3 = |R><R| - |L><L|.
inline HermitianOp2 stokes_operator(int index) {
    const Complex i{0.0, 1.0};
    Mat2 m;
    switch (index) {
    case 1:
        m(kL, kR) = 1.0;
        m(kR, kL) = 1.0;
        break;
    case 2:
        m(kL, kR) = i;
        m(kR, kL) = -i;
        break;
    case 3:
        m(kR, kR) = 1.0;
        m(kL, kL) = -1.0;
        break;
    default:
        throw RejectedInput("Stokes index must be 1, 2 or 3, got " + std::to_string(index));
    }
    return HermitianOp2(m);
}

/// Eigenstate of stokes_operator(index) with eigenvalue value(sign).
inline PolarizationKet stokes_eigenstate(int index, Sign sign) {
    const double r = 1.0 / std::numbers::sqrt2;
    const double s = value(sign);
    switch (index) {
    case 1:
        return make_polarization(r, s * r);
    case 2:
        return make_polarization(r, Complex(0.0, s * r));
    case 3:
        return sign == Sign::plus ? make_polarization(1.0, 0.0) : make_polarization(0.0, 1.0);
    default:
        throw RejectedInput("Stokes index must be 1, 2 or 3, got " + std::to_string(index));
    }
}

/// Resolution parameter delta_s of the Gaussian measurement kernel.
class MeasurementKernel {
  public:
    explicit MeasurementKernel(double resolution) : resolution_(resolution) {
        if (!std::isfinite(resolution) || !(resolution > 0.0)) {
            throw RejectedInput("resolution must be a positive finite number");
        }
    }

    [[nodiscard]] double resolution() const { return resolution_; }

    /// (2 pi ds^2)^(-1/4)
    [[nodiscard]] double amplitude_normalization() const {
        return std::pow(2.0 * std::numbers::pi * resolution_ * resolution_, -0.25);
    }

    /// Amplitude factor for outcome s_m given eigenvalue e (without normalization).
    [[nodiscard]] double amplitude_factor(double s_m, double eigenvalue) const {
        const double d = s_m - eigenvalue;
        return std::exp(-d * d / (4.0 * resolution_ * resolution_));
    }

    /// Factor exp(-1/(2 ds^2)) by which coherences between the +1 and -1
    /// eigenstates are suppressed.
    [[nodiscard]] double decoherence() const {
        return std::exp(-1.0 / (2.0 * resolution_ * resolution_));
    }

  private:
    double resolution_;
};

inline bool is_involution(const HermitianOp2 &target, double tol = 1e-12) {
    return max_abs_diff(target.mat() * target.mat(), Mat2::identity()) <= tol;
}

/// Spectral projector (I + e*T)/2 onto the eigenvalue-e subspace of an involution T.
inline Mat2 involution_projector(const HermitianOp2 &target, Sign eigenvalue) {
    return Complex(0.5) * (Mat2::identity() + Complex(value(eigenvalue)) * target.mat());
}

/**
 * Gaussian measurement operator
 *   P(s_m) = (2 pi ds^2)^(-1/4) exp(-(s_m - T)^2 / (4 ds^2))
 * for an observable T with eigenvalues +-1, evaluated through T's spectral
 * projectors. Non-involutory targets are rejected.
 */
inline HermitianOp2 measurement_operator(const MeasurementKernel &kernel,
                                         const HermitianOp2 &target, double s_m) {
    if (!is_involution(target)) {
        throw RejectedInput("measurement target must square to the identity");
    }
    if (!std::isfinite(s_m)) {
        throw RejectedInput("measurement value must be finite");
    }
    const double c = kernel.amplitude_normalization();
    const Mat2 m = Complex(c * kernel.amplitude_factor(s_m, +1.0)) *
                       involution_projector(target, Sign::plus) +
                   Complex(c * kernel.amplitude_factor(s_m, -1.0)) *
                       involution_projector(target, Sign::minus);
    // Spectral sums of Hermitian projectors are Hermitian up to rounding.
    return HermitianOp2(Complex(0.5) * (m + m.adjoint()));
}

template <std::size_t N> struct MeasurementResult {
    double density;
    Ket<N> post_state;
};

inline constexpr double kDegenerateDensity = 1e-300;

/// Outcome density <psi|P^2|psi> and collapsed state P|psi>/sqrt(density).
inline MeasurementResult<2> apply_measurement(const PolarizationKet &state,
                                              const MeasurementKernel &kernel,
                                              const HermitianOp2 &target, double s_m) {
    const Vec2 projected = measurement_operator(kernel, target, s_m).mat() * state.vec();
    const double density = projected.squared_norm();
    if (!(density >= kDegenerateDensity)) {
        throw DegenerateOutcome("outcome density below 1e-300; post-state undefined");
    }
    return {density, PolarizationKet::normalize(projected)};
}

enum class Photon { a, b };

/// Same postulate applied to one photon of a pair.
inline MeasurementResult<4> apply_measurement(const PairKet &state,
                                              const MeasurementKernel &kernel,
                                              const HermitianOp2 &target, double s_m,
                                              Photon photon) {
    const Mat2 p = measurement_operator(kernel, target, s_m).mat();
    const Mat4 local = photon == Photon::a ? kron(p, Mat2::identity()) : kron(Mat2::identity(), p);
    const Vec4 projected = local * state.vec();
    const double density = projected.squared_norm();
    if (!(density >= kDegenerateDensity)) {
        throw DegenerateOutcome("outcome density below 1e-300; post-state undefined");
    }
    return {density, PairKet::normalize(projected)};
}

inline HermitianOp4 tensor_op(const HermitianOp2 &a, const HermitianOp2 &b) {
    return HermitianOp4(kron(a.mat(), b.mat()));
}

inline Op4 tensor_op(const Mat2 &a, const Mat2 &b) { return kron(a, b); }

inline PairKet tensor_state(const PolarizationKet &a, const PolarizationKet &b) {
    return PairKet(kron(a.vec(), b.vec()));
}

inline constexpr double kImaginaryTolerance = 1e-12;

/// <psi|op|psi>; a non-negligible imaginary part means op was not Hermitian.
template <std::size_t N> double expectation(const Mat<N> &op, const Ket<N> &state) {
    const Complex v = inner(state.vec(), op * state.vec());
    if (std::abs(v.imag()) > kImaginaryTolerance) {
        throw ConsistencyError("expectation value has imaginary part " +
                               std::to_string(v.imag()));
    }
    return v.real();
}

template <std::size_t N> double expectation(const HermitianOp<N> &op, const Ket<N> &state) {
    return expectation(op.mat(), state);
}

} // namespace finres
