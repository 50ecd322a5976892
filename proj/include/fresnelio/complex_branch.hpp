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

#include <cmath>
#include <complex>

namespace fresnelio {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

// Principal-branch z^{-1/2}. Valid without ambiguity for Re z > 0 and for
// purely imaginary z reached as limits from the right half plane, which covers
// every Gaussian-integral prefactor in this library.
inline cplx rsqrt(cplx z) { return 1.0 / std::sqrt(z); }

// Principal-branch z^{p} for real p (used for half-integer powers such as
// (2*pi*i*hbar)^{-d/2}).
inline cplx cpow(cplx z, double p) { return std::exp(p * std::log(z)); }

// (2*pi*i*hbar)^{-d/2}, the chirp normalization. Principal branch:
// modulus (2*pi*hbar)^{-d/2}, phase e^{-i*pi*d/4}.
inline cplx chirp_prefactor(int dim, double hbar, int sign = +1) {
    const double mod = std::pow(2.0 * M_PI * hbar, -0.5 * dim);
    const double ph = -0.25 * M_PI * dim * sign;
    return mod * cplx{std::cos(ph), std::sin(ph)};
}

// w^{-1/2} with the branch continued along the segment s -> 1 + s*(w - 1),
// s in [0,1]. The segment stays in the upper (resp. lower) half plane when
// Im w > 0 (resp. < 0), so the principal branch is already continuous there;
// the only genuine cut crossing is w on the negative real axis, where the
// caller supplies the approach side. Used by the free-propagator closed form
// past a focal time.
inline cplx rsqrt_segment_branch(cplx w, int approach_sign) {
    if (w.imag() == 0.0 && w.real() < 0.0) {
        const double r = 1.0 / std::sqrt(-w.real());
        // limits of (x ± i0)^{-1/2} on the cut
        return approach_sign >= 0 ? cplx{0.0, -r} : cplx{0.0, r};
    }
    return rsqrt(w);
}

inline double sqr(double x) { return x * x; }

}  // namespace fresnelio
