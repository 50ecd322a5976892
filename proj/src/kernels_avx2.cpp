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

// AVX2/FMA variants of the quadratic-phase reductions. Four complex lanes,
// split re/im registers; lane values advance by the same renormalized
// geometric recurrences as the scalar reference, with a 4*h stride.
// This translation unit is the only one compiled with -mavx2 -mfma.

#include "fresnelio/kernels.hpp"

#if defined(FRESNELIO_AVX2) && (defined(__x86_64__) || defined(_M_X64))

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace fresnelio::kernels {
namespace {

struct CVec {
    __m256d re;
    __m256d im;
};

inline CVec cmul(CVec a, CVec b) {
    return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
            _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

inline CVec broadcast(cplx z) { return {_mm256_set1_pd(z.real()), _mm256_set1_pd(z.imag())}; }

inline cplx first_diff(const QuadPhase& q, double y, double s) {
    return 2.0 * q.c2 * s * y + (q.c2 * s + q.c1) * s;
}

// lane l holds the node at ybase + off[l]*h and advances by stride 4*h
inline void init_lanes(const QuadPhase& q, double ybase, double h, const int* off, CVec& v,
                       CVec& s) {
    const double S = 4.0 * h;
    alignas(32) double vr[4], vi[4], sr[4], si[4];
    for (int l = 0; l < 4; ++l) {
        const double y = ybase + off[l] * h;
        const cplx vv = eval(q, y);
        const cplx ss = std::exp(first_diff(q, y, S));
        vr[l] = vv.real();
        vi[l] = vv.imag();
        sr[l] = ss.real();
        si[l] = ss.imag();
    }
    v = {_mm256_load_pd(vr), _mm256_load_pd(vi)};
    s = {_mm256_load_pd(sr), _mm256_load_pd(si)};
}

inline cplx hsum(CVec a) {
    alignas(32) double re[4], im[4];
    _mm256_store_pd(re, a.re);
    _mm256_store_pd(im, a.im);
    return {((re[0] + re[1]) + (re[2] + re[3])), ((im[0] + im[1]) + (im[2] + im[3]))};
}

constexpr int kNaturalOff[4] = {0, 1, 2, 3};
constexpr int kUnpackOff[4] = {0, 2, 1, 3};

cplx phase_sum_avx2(const QuadPhase& q, double y0, double h, std::size_t n) {
    const std::size_t nvec = n & ~std::size_t{3};
    const cplx ratio = std::exp(2.0 * q.c2 * (4.0 * h) * (4.0 * h));
    const CVec vratio = broadcast(ratio);
    CVec acc = {_mm256_setzero_pd(), _mm256_setzero_pd()};
    const std::size_t blk = std::max<std::size_t>(1, block_limit(q, y0, h, n) / 4);
    std::size_t i = 0;  // vector-iteration index, node j = 4*i
    const std::size_t niter = nvec / 4;
    while (i < niter) {
        const std::size_t m = std::min(niter - i, blk);
        CVec v, s;
        init_lanes(q, y0 + 4.0 * static_cast<double>(i) * h, h, kNaturalOff, v, s);
        for (std::size_t k = 0; k < m; ++k) {
            acc.re = _mm256_add_pd(acc.re, v.re);
            acc.im = _mm256_add_pd(acc.im, v.im);
            v = cmul(v, s);
            s = cmul(s, vratio);
        }
        i += m;
    }
    cplx out = hsum(acc);
    if (nvec < n)
        out += scalar_backend().phase_sum(q, y0 + static_cast<double>(nvec) * h, h, n - nvec);
    return out;
}

cplx phase_sum_sech_avx2(const QuadPhase& q, double eps, double y0, double h, std::size_t n) {
    const std::size_t nvec = n & ~std::size_t{3};
    const CVec vratio = broadcast(std::exp(2.0 * q.c2 * (4.0 * h) * (4.0 * h)));
    const __m256d wratio = _mm256_set1_pd(std::exp(eps * 4.0 * h));
    const __m256d wratio_inv = _mm256_set1_pd(std::exp(-eps * 4.0 * h));
    const __m256d two = _mm256_set1_pd(2.0);
    CVec acc = {_mm256_setzero_pd(), _mm256_setzero_pd()};
    const std::size_t blk = std::max<std::size_t>(1, block_limit(q, y0, h, n, eps) / 4);
    std::size_t i = 0;
    const std::size_t niter = nvec / 4;
    while (i < niter) {
        const std::size_t m = std::min(niter - i, blk);
        const double ybase = y0 + 4.0 * static_cast<double>(i) * h;
        CVec v, s;
        init_lanes(q, ybase, h, kNaturalOff, v, s);
        alignas(32) double w0[4], wi0[4];
        for (int l = 0; l < 4; ++l) {
            w0[l] = std::exp(eps * (ybase + l * h));
            wi0[l] = 1.0 / w0[l];
        }
        __m256d w = _mm256_load_pd(w0);
        __m256d wi = _mm256_load_pd(wi0);
        for (std::size_t k = 0; k < m; ++k) {
            const __m256d sech = _mm256_div_pd(two, _mm256_add_pd(w, wi));
            acc.re = _mm256_fmadd_pd(v.re, sech, acc.re);
            acc.im = _mm256_fmadd_pd(v.im, sech, acc.im);
            v = cmul(v, s);
            s = cmul(s, vratio);
            w = _mm256_mul_pd(w, wratio);
            wi = _mm256_mul_pd(wi, wratio_inv);
        }
        i += m;
    }
    cplx out = hsum(acc);
    if (nvec < n)
        out += scalar_backend().phase_sum_sech(q, eps, y0 + static_cast<double>(nvec) * h, h,
                                               n - nvec);
    return out;
}

cplx phase_dot_avx2(const QuadPhase& q, const cplx* f, double y0, double h, std::size_t n) {
    const std::size_t nvec = n & ~std::size_t{3};
    const CVec vratio = broadcast(std::exp(2.0 * q.c2 * (4.0 * h) * (4.0 * h)));
    CVec acc = {_mm256_setzero_pd(), _mm256_setzero_pd()};
    const std::size_t blk = std::max<std::size_t>(1, block_limit(q, y0, h, n) / 4);
    std::size_t i = 0;
    const std::size_t niter = nvec / 4;
    const double* fd = reinterpret_cast<const double*>(f);
    while (i < niter) {
        const std::size_t m = std::min(niter - i, blk);
        CVec v, s;
        init_lanes(q, y0 + 4.0 * static_cast<double>(i) * h, h, kUnpackOff, v, s);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t j = 4 * (i + k);
            const __m256d a = _mm256_loadu_pd(fd + 2 * j);
            const __m256d b = _mm256_loadu_pd(fd + 2 * j + 4);
            const CVec fv = {_mm256_unpacklo_pd(a, b), _mm256_unpackhi_pd(a, b)};
            const CVec p = cmul(fv, v);
            acc.re = _mm256_add_pd(acc.re, p.re);
            acc.im = _mm256_add_pd(acc.im, p.im);
            v = cmul(v, s);
            s = cmul(s, vratio);
        }
        i += m;
    }
    cplx out = hsum(acc);
    if (nvec < n)
        out += scalar_backend().phase_dot(q, f + nvec, y0 + static_cast<double>(nvec) * h, h,
                                          n - nvec);
    return out;
}

void apply_phase_avx2(const QuadPhase& q, cplx* data, double y0, double h, std::size_t n) {
    const std::size_t nvec = n & ~std::size_t{3};
    const CVec vratio = broadcast(std::exp(2.0 * q.c2 * (4.0 * h) * (4.0 * h)));
    const std::size_t blk = std::max<std::size_t>(1, block_limit(q, y0, h, n) / 4);
    std::size_t i = 0;
    const std::size_t niter = nvec / 4;
    double* fd = reinterpret_cast<double*>(data);
    while (i < niter) {
        const std::size_t m = std::min(niter - i, blk);
        CVec v, s;
        init_lanes(q, y0 + 4.0 * static_cast<double>(i) * h, h, kUnpackOff, v, s);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t j = 4 * (i + k);
            const __m256d a = _mm256_loadu_pd(fd + 2 * j);
            const __m256d b = _mm256_loadu_pd(fd + 2 * j + 4);
            const CVec fv = {_mm256_unpacklo_pd(a, b), _mm256_unpackhi_pd(a, b)};
            const CVec p = cmul(fv, v);
            _mm256_storeu_pd(fd + 2 * j, _mm256_unpacklo_pd(p.re, p.im));
            _mm256_storeu_pd(fd + 2 * j + 4, _mm256_unpackhi_pd(p.re, p.im));
            v = cmul(v, s);
            s = cmul(s, vratio);
        }
        i += m;
    }
    if (nvec < n)
        scalar_backend().apply_phase(q, data + nvec, y0 + static_cast<double>(nvec) * h, h,
                                     n - nvec);
}

double abs_max_avx2(const cplx* d, std::size_t n) {
    const std::size_t nvec = n & ~std::size_t{1};
    const double* p = reinterpret_cast<const double*>(d);
    __m256d best = _mm256_setzero_pd();
    for (std::size_t j = 0; j < nvec; j += 2) {
        const __m256d a = _mm256_loadu_pd(p + 2 * j);
        const __m256d sq = _mm256_mul_pd(a, a);
        best = _mm256_max_pd(best, _mm256_hadd_pd(sq, sq));
    }
    alignas(32) double b[4];
    _mm256_store_pd(b, best);
    double m = std::max(std::max(b[0], b[1]), std::max(b[2], b[3]));
    for (std::size_t j = nvec; j < n; ++j) m = std::max(m, std::norm(d[j]));
    return std::sqrt(m);
}

double sum_abs2_avx2(const cplx* d, std::size_t n) {
    const std::size_t nvec = n & ~std::size_t{1};
    const double* p = reinterpret_cast<const double*>(d);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < nvec; j += 2) {
        const __m256d a = _mm256_loadu_pd(p + 2 * j);
        acc = _mm256_fmadd_pd(a, a, acc);
    }
    alignas(32) double b[4];
    _mm256_store_pd(b, acc);
    double s = (b[0] + b[1]) + (b[2] + b[3]);
    for (std::size_t j = nvec; j < n; ++j) s += std::norm(d[j]);
    return s;
}

}  // namespace

const Backend* avx2_backend() {
    static const Backend b{
        "avx2",         phase_sum_avx2,  phase_sum_sech_avx2,
        phase_dot_avx2, apply_phase_avx2, abs_max_avx2,
        sum_abs2_avx2,
    };
    return &b;
}

}  // namespace fresnelio::kernels

#else

namespace fresnelio::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace fresnelio::kernels

#endif
