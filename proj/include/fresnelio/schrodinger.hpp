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

#include "fresnelio/gabor.hpp"

namespace fresnelio {

// Free evolution i hbar u_t = -(hbar^2/2) Laplacian u. In the hbar-scaled
// frequency variable the propagator is the multiplier e^{-i t |xi|^2/(2 hbar)}.
struct PropagatorSpec {
    double t = 1.0;
    Params params;
    GridSpec grid{12.0, 12.0 / 1024, 1};  // spatial sampling for the discrete path
};

// Uniform complex samples on [-R, R), n nodes (n a power of two for the FFT path).
struct SampledField {
    double R = 12.0;
    std::vector<cplx> values;

    double h() const { return 2.0 * R / static_cast<double>(values.size()); }
    double x(std::size_t j) const { return -R + static_cast<double>(j) * h(); }
    double sup_abs() const;
    double l2_norm() const;  // discrete L2: sqrt(h * sum |u|^2)
};

void fft_inplace(std::vector<cplx>& a, bool inverse);

SampledField sample(const FunctionObject& f, double R, std::size_t n, const Params& params);

// Discrete-multiplier path; refuses when the multiplier phase changes by more
// than pi per frequency bin over the represented band.
SampledField evolve_free_fft(const SampledField& in, double t, const Params& params);

// Exact Gaussian-type evolution at atom level: z -> z/(1+i t z), b -> b/(1+i t z).
AtomSum evolve_atoms(const AtomSum& atoms, double t, double hbar);

// Closed form for catalog inputs, discrete multiplier otherwise.
SampledField evolve_free(const FunctionObject& f, const PropagatorSpec& spec);
SampledField evolve_free_via_fft(const FunctionObject& f, const PropagatorSpec& spec);

// prod_j (t^2 q_j^2 + 1)^{1/4}: the exact sup/inf operator bound of the free
// propagator from the windowed norm to the sup norm.
double sharp_norm_formula(double t, const vec& q);

// Lower-witness ratio ||evolve(f_eps)||_inf / ||f_eps|| from the closed forms
// transported by (hbar, Q) -> (hbar t, t Q); increases to the formula as eps -> 0.
double sharp_norm_witness(double t, const vec& q, double eps);

}  // namespace fresnelio
