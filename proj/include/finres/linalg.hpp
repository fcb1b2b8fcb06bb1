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
 * Fixed-size complex vectors and matrices for 2- and 4-dimensional
 * polarization spaces. Storage is row-major; N is tiny, so everything is
 * value-typed and stack allocated.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace finres {

using Complex = std::complex<double>;

template <std::size_t N> struct Vec {
    std::array<Complex, N> data{};

    constexpr Complex &operator[](std::size_t i) { return data[i]; }
    constexpr const Complex &operator[](std::size_t i) const { return data[i]; }

    [[nodiscard]] double squared_norm() const {
        double acc = 0.0;
        for (const auto &c : data) {
            acc += std::norm(c);
        }
        return acc;
    }

    [[nodiscard]] bool is_finite() const {
        return std::all_of(data.begin(), data.end(), [](const Complex &c) {
            return std::isfinite(c.real()) && std::isfinite(c.imag());
        });
    }

    friend Vec operator+(Vec a, const Vec &b) {
        for (std::size_t i = 0; i < N; ++i) {
            a[i] += b[i];
        }
        return a;
    }
    friend Vec operator-(Vec a, const Vec &b) {
        for (std::size_t i = 0; i < N; ++i) {
            a[i] -= b[i];
        }
        return a;
    }
    friend Vec operator*(Complex s, Vec a) {
        for (auto &c : a.data) {
            c *= s;
        }
        return a;
    }
};

/// <a|b>, antilinear in the first argument.
template <std::size_t N> Complex inner(const Vec<N> &a, const Vec<N> &b) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

template <std::size_t N> struct Mat {
    std::array<Complex, N * N> data{};

    static constexpr std::size_t dim = N;

    static Mat identity() {
        Mat m;
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static Mat diagonal(const std::array<Complex, N> &d) {
        Mat m;
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = d[i];
        }
        return m;
    }

    /// |a><b|
    static Mat outer(const Vec<N> &a, const Vec<N> &b) {
        Mat m;
        for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t c = 0; c < N; ++c) {
                m(r, c) = a[r] * std::conj(b[c]);
            }
        }
        return m;
    }

    constexpr Complex &operator()(std::size_t r, std::size_t c) {
        return data[r * N + c];
    }
    constexpr const Complex &operator()(std::size_t r, std::size_t c) const {
        return data[r * N + c];
    }

    [[nodiscard]] Mat adjoint() const {
        Mat m;
        for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t c = 0; c < N; ++c) {
                m(r, c) = std::conj((*this)(c, r));
            }
        }
        return m;
    }

    [[nodiscard]] Complex trace() const {
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < N; ++i) {
            acc += (*this)(i, i);
        }
        return acc;
    }

    [[nodiscard]] bool is_finite() const {
        return std::all_of(data.begin(), data.end(), [](const Complex &c) {
            return std::isfinite(c.real()) && std::isfinite(c.imag());
        });
    }

    friend Mat operator+(Mat a, const Mat &b) {
        for (std::size_t i = 0; i < N * N; ++i) {
            a.data[i] += b.data[i];
        }
        return a;
    }
    friend Mat operator-(Mat a, const Mat &b) {
        for (std::size_t i = 0; i < N * N; ++i) {
            a.data[i] -= b.data[i];
        }
        return a;
    }
    friend Mat operator*(Complex s, Mat a) {
        for (auto &c : a.data) {
            c *= s;
        }
        return a;
    }
    friend Mat operator*(const Mat &a, const Mat &b) {
        Mat m;
        for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t k = 0; k < N; ++k) {
                const Complex lhs = a(r, k);
                for (std::size_t c = 0; c < N; ++c) {
                    m(r, c) += lhs * b(k, c);
                }
            }
        }
        return m;
    }
    friend Vec<N> operator*(const Mat &a, const Vec<N> &v) {
        Vec<N> out;
        for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t c = 0; c < N; ++c) {
                out[r] += a(r, c) * v[c];
            }
        }
        return out;
    }
};

using Vec2 = Vec<2>;
using Vec4 = Vec<4>;
using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

template <std::size_t N>
double max_abs_diff(const Mat<N> &a, const Mat<N> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) {
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    }
    return worst;
}

template <std::size_t N> double max_abs_diff(const Vec<N> &a, const Vec<N> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

/// Kronecker product; the left factor indexes the slow (most significant) axis.
template <std::size_t N, std::size_t M>
Mat<N * M> kron(const Mat<N> &a, const Mat<M> &b) {
    Mat<N * M> out;
    for (std::size_t ar = 0; ar < N; ++ar) {
        for (std::size_t ac = 0; ac < N; ++ac) {
            for (std::size_t br = 0; br < M; ++br) {
                for (std::size_t bc = 0; bc < M; ++bc) {
                    out(ar * M + br, ac * M + bc) = a(ar, ac) * b(br, bc);
                }
            }
        }
    }
    return out;
}

template <std::size_t N, std::size_t M>
Vec<N * M> kron(const Vec<N> &a, const Vec<M> &b) {
    Vec<N * M> out;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            out[i * M + j] = a[i] * b[j];
        }
    }
    return out;
}

} // namespace finres
