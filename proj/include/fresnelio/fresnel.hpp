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

#include <functional>

#include "fresnelio/gabor.hpp"

namespace fresnelio {

// Regularization schedule for the mollified quadratic-phase integral
//   (2 pi i hbar)^{-d/2} int e^{i|x|^2/(2 hbar)} f(x) phi(eps x) dx,  eps -> 0.
// Both mollifier profiles satisfy phi(0) = 1 exactly.
enum class Mollifier { gaussian, sech };

struct RegularizerSchedule {
    Mollifier mollifier = Mollifier::gaussian;
    std::vector<double> epsilons;         // strictly decreasing
    double settle_tol = 1e-9;             // early exit once the trace settles
    std::size_t node_budget = 1u << 27;   // per-epsilon quadrature cap

    static RegularizerSchedule defaults(Mollifier m = Mollifier::gaussian) {
        RegularizerSchedule s;
        s.mollifier = m;
        for (int j = 0; j <= 16; ++j) s.epsilons.push_back(std::pow(2.0, -j));
        return s;
    }
};

enum class FresnelMethod { direct_eps, phase_space, parseval_measure };
enum class FresnelStatus { ok, non_convergent };

struct FresnelResult {
    cplx value{0.0, 0.0};
    FresnelMethod method = FresnelMethod::direct_eps;
    double error_estimate = 0.0;  // >= |difference of the last two trace values|
    FresnelStatus status = FresnelStatus::ok;
    std::vector<std::pair<double, cplx>> trace;  // (eps or refinement level, partial value)
};

// Mollified-limit route with Richardson-style extrapolation (ratio estimated
// from the last three iterates). Divergent inputs surface as non_convergent
// results carrying the trace, not as exceptions.
FresnelResult fresnel_direct(const FunctionObject& f, const RegularizerSchedule& sched,
                             const Params& params);

// Phase-space route: <gamma,g>^{-1} iint V_g F_+ * (V_{conj gamma} f)(x,-xi) dx dxi.
FresnelResult fresnel_phase_space(const FunctionObject& f, const Window& g, const Window& gamma,
                                  const Params& params, const QuadOptions& opts = {});

// Parseval route for Fourier transforms of atomic measures: sum_j w_j e^{-i hbar |p_j|^2/2}.
cplx fresnel_parseval_measure(const DiscreteMeasure& mu, const Params& params);

// Fresnel integral of the Fourier transform of `preimage` (the amalgam-side
// route; the dominating envelope now lives in x instead of xi).
FresnelResult fresnel_W_infty_1(const FunctionObject& preimage, const Window& g,
                                const Window& gamma, const Params& params,
                                const QuadOptions& opts = {});

// ---- exact functional norms --------------------------------------------------

// prod_j (q_j^2 + 1)^{1/4}, evaluated in log space.
double op_norm_Ln(const vec& q);

// Witness sandwich from the two parametric families:
//   upper(alpha) = prod ((alpha+q_j)^2+1)^{1/4}
//   lower(eps)   = prod ((q_j+eps)^2+1)^{1/4} (1+eps(q_j+eps))^{-1/2}
// both tending to op_norm_Ln as the parameter drops to 0.
std::pair<double, double> op_norm_witnesses(const vec& q, double alpha, double eps);

// Analytic tail bound templates for coefficient sequences; bounds hold for
// j >= from:  geometric: q_j <= scale * ratio^j;  p_series: q_j <= scale * j^{-p}.
struct TailCertificate {
    enum class Type { none, geometric, p_series } type = Type::none;
    double scale = 1.0;
    double ratio = 0.5;
    double p = 2.0;
    int from = 1;

    static TailCertificate geometric(double scale, double ratio, int from = 1);
    static TailCertificate p_series(double scale, double p, int from = 1);
    double bound_at(int j) const;       // pointwise bound on q_j
    double tail_sum(int after) const;   // upper bound on sum_{j > after} q_j
    double tail_sum_sq(int after) const;  // upper bound on sum_{j > after} q_j^2
};

struct UniformBoundReport {
    bool convergent = false;
    double sup_estimate = 0.0;          // certified bound on sup_n ||L_n|| when convergent
    std::vector<double> partials;       // ||L_n|| partial products
};

// Partial products exp((1/4) sum log(1+q_j^2)) plus a certified tail; the
// convergence flag comes from the comparison test against the certificate.
UniformBoundReport uniform_bound_check(const std::function<double(int)>& q, int n_max,
                                       const TailCertificate& tail);

}  // namespace fresnelio
