// Copyright 2025-present the fresnelio project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "fresnelio/complex_branch.hpp"

namespace fresnelio::kernels {

// Quadratic-phase exponent  e(y) = c2*y^2 + c1*y + c0  with complex
// coefficients. Every closed-form integrand in the library reduces, row by
// row, to sums of exp(e(y_j)) over a uniform grid, so these reductions are
// the hot loops. All variants advance exp(e(y)) by the two chained geometric
// recurrences of the first and second difference of e, re-anchored on an
// exact std::exp every RENORM_INTERVAL nodes to stop rounding drift.
struct QuadPhase {
    cplx c2{0.0, 0.0};
    cplx c1{0.0, 0.0};
    cplx c0{0.0, 0.0};
};

inline cplx eval(const QuadPhase& q, double y) { return std::exp((q.c2 * y + q.c1) * y + q.c0); }

inline constexpr std::size_t RENORM_INTERVAL = 256;

// Cap on the nodes per recurrence block so the exponent's real part moves by
// at most ~400 between exact re-anchors. A block whose anchor underflows to
// zero can then only skip values below e^{-345}, instead of silently dropping
// a peak that rises within the block.
inline std::size_t block_limit(const QuadPhase& q, double y0, double h, std::size_t n,
                               double extra_slope = 0.0) {
    const double ymax = std::max(std::abs(y0), std::abs(y0 + h * static_cast<double>(n - 1)));
    const double slope = std::abs(2.0 * q.c2.real() * h) * ymax +
                         std::abs((q.c2 * h + q.c1).real() * h) + std::abs(extra_slope * h);
    if (!(slope > 400.0 / static_cast<double>(RENORM_INTERVAL)))
        return RENORM_INTERVAL;
    const double cap = 400.0 / slope;
    return cap < 1.0 ? 1 : static_cast<std::size_t>(cap);
}

struct Backend {
    const char* name;
    // sum_j exp(e(y_j)),  y_j = y0 + j*h,  j = 0..n-1
    cplx (*phase_sum)(const QuadPhase&, double y0, double h, std::size_t n);
    // sum_j exp(e(y_j)) * sech(eps*y_j)
    cplx (*phase_sum_sech)(const QuadPhase&, double eps, double y0, double h, std::size_t n);
    // sum_j f[j] * exp(e(y_j))
    cplx (*phase_dot)(const QuadPhase&, const cplx* f, double y0, double h, std::size_t n);
    // data[j] *= exp(e(y_j))
    void (*apply_phase)(const QuadPhase&, cplx* data, double y0, double h, std::size_t n);
    double (*abs_max)(const cplx*, std::size_t n);
    double (*sum_abs2)(const cplx*, std::size_t n);
};

const Backend& scalar_backend();
const Backend* avx2_backend();  // nullptr when not compiled in or unsupported

// Runtime-selected backend; FRESNELIO_SIMD=scalar|avx2 overrides the choice.
const Backend& active_backend();
std::vector<const Backend*> available_backends();

}  // namespace fresnelio::kernels
