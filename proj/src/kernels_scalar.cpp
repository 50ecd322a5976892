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

#include <algorithm>
#include <cmath>

#include "fresnelio/kernels.hpp"

namespace fresnelio::kernels {
namespace {

// First difference of e at y over a step s:  e(y+s) - e(y) = 2*c2*s*y + c2*s^2 + c1*s.
inline cplx first_diff(const QuadPhase& q, double y, double s) {
    return 2.0 * q.c2 * s * y + (q.c2 * s + q.c1) * s;
}

cplx phase_sum_ref(const QuadPhase& q, double y0, double h, std::size_t n) {
    cplx acc{0.0, 0.0};
    const cplx ratio = std::exp(2.0 * q.c2 * h * h);
    const std::size_t blk = block_limit(q, y0, h, n);
    std::size_t j = 0;
    while (j < n) {
        const std::size_t m = std::min(n - j, blk);
        const double yj = y0 + static_cast<double>(j) * h;
        cplx v = eval(q, yj);
        cplx d = std::exp(first_diff(q, yj, h));
        cplx block{0.0, 0.0};
        for (std::size_t k = 0; k < m; ++k) {
            block += v;
            v *= d;
            d *= ratio;
        }
        acc += block;
        j += m;
    }
    return acc;
}

cplx phase_sum_sech_ref(const QuadPhase& q, double eps, double y0, double h, std::size_t n) {
    cplx acc{0.0, 0.0};
    const cplx ratio = std::exp(2.0 * q.c2 * h * h);
    const double wstep = std::exp(eps * h);
    const std::size_t blk = block_limit(q, y0, h, n, eps);
    std::size_t j = 0;
    while (j < n) {
        const std::size_t m = std::min(n - j, blk);
        const double yj = y0 + static_cast<double>(j) * h;
        cplx v = eval(q, yj);
        cplx d = std::exp(first_diff(q, yj, h));
        double w = std::exp(eps * yj);
        double wi = 1.0 / w;
        cplx block{0.0, 0.0};
        for (std::size_t k = 0; k < m; ++k) {
            block += v * (2.0 / (w + wi));
            v *= d;
            d *= ratio;
            w *= wstep;
            wi /= wstep;
        }
        acc += block;
        j += m;
    }
    return acc;
}

cplx phase_dot_ref(const QuadPhase& q, const cplx* f, double y0, double h, std::size_t n) {
    cplx acc{0.0, 0.0};
    const cplx ratio = std::exp(2.0 * q.c2 * h * h);
    const std::size_t blk = block_limit(q, y0, h, n);
    std::size_t j = 0;
    while (j < n) {
        const std::size_t m = std::min(n - j, blk);
        const double yj = y0 + static_cast<double>(j) * h;
        cplx v = eval(q, yj);
        cplx d = std::exp(first_diff(q, yj, h));
        cplx block{0.0, 0.0};
        for (std::size_t k = 0; k < m; ++k) {
            block += f[j + k] * v;
            v *= d;
            d *= ratio;
        }
        acc += block;
        j += m;
    }
    return acc;
}

void apply_phase_ref(const QuadPhase& q, cplx* data, double y0, double h, std::size_t n) {
    const cplx ratio = std::exp(2.0 * q.c2 * h * h);
    const std::size_t blk = block_limit(q, y0, h, n);
    std::size_t j = 0;
    while (j < n) {
        const std::size_t m = std::min(n - j, blk);
        const double yj = y0 + static_cast<double>(j) * h;
        cplx v = eval(q, yj);
        cplx d = std::exp(first_diff(q, yj, h));
        for (std::size_t k = 0; k < m; ++k) {
            data[j + k] *= v;
            v *= d;
            d *= ratio;
        }
        j += m;
    }
}

double abs_max_ref(const cplx* d, std::size_t n) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::norm(d[j]));
    return std::sqrt(m);
}

double sum_abs2_ref(const cplx* d, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::norm(d[j]);
    return s;
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{
        "scalar",      phase_sum_ref,   phase_sum_sech_ref,
        phase_dot_ref, apply_phase_ref, abs_max_ref,
        sum_abs2_ref,
    };
    return b;
}

}  // namespace fresnelio::kernels
