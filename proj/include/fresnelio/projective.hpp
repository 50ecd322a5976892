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

#include <memory>

#include "fresnelio/fresnel.hpp"

namespace fresnelio {

// The whole window family at once: g_n is built from the first n coefficients.
// Points of the sequence space are finitely supported vectors (implicit zero
// tail); all functionals here depend only on such values.
struct WindowSequence {
    std::function<double(int)> q;  // 1-based
    TailCertificate tail;          // analytic bound on q_j; required for sum q^2 certificates

    GaussianWindow prefix_window(int n, double hbar) const {
        vec qs(n);
        for (int j = 1; j <= n; ++j) qs[j - 1] = q(j);
        return GaussianWindow(std::move(qs), hbar);
    }
};

// Function on the sequence space depending on the first base_dim coordinates.
struct CylinderFunction {
    int base_dim;
    FunctionObject base;
};

// Extension: tensor with the constant 1 in the new coordinates; the value on
// the sequence space is unchanged.
CylinderFunction extend(const CylinderFunction& f, int n);

// Value at a finitely supported point (given by its first coordinates).
cplx evaluate(const CylinderFunction& f, const vec& x, const Params& params);

// The dimension-free norm: the base's mixed norm in its own dimension against
// the matching window; representation independent by the extension isometry.
NormResult norm_infinite(const CylinderFunction& f, const WindowSequence& w,
                         const Params& params);

struct CauchyDistance {
    double value = 0.0;             // exact when quality == exact, else an upper bound
    NormQuality quality = NormQuality::exact;
    double certified_lower = 0.0;   // conclusive lower bound (== value when exact)
};

// || f - g || after co-extension to the larger dimension. For the
// gaussian-vs-extension shape the exact value has no closed form; a certified
// [lower, upper] interval is returned instead (one-sided checks stay sound).
CauchyDistance cauchy_distance(const CylinderFunction& f, const CylinderFunction& g,
                               const WindowSequence& w, const Params& params);

// Restriction to the first k coordinates (identity when k >= base_dim).
FunctionObject restrict_cylinder(const CylinderFunction& f, int k, const Params& params);

// Minimal functional: the Fresnel value of the base in its own dimension
// (measure route when the base is a frequency combination, phase-space
// route otherwise).
cplx L_min(const CylinderFunction& f, const Params& params);

// Fresnel value of a 1-D catalog member (shared by the product-family closed form).
cplx fresnel_value_1d(const FunctionObject& e, const Params& params);

// ---- sequences -----------------------------------------------------------------

// Non-cylinder integrands reachable by the sequential functional: coefficients
// come from a generator plus an analytic tail certificate. product_tones is
// the limit of the tone-product cylinder family; its restrictions carry the
// convergent constant tail prod_{j>n} (1 + a_j).
struct SequenceFunction {
    enum class Kind { plane_wave_l2, gaussian_l1, composite_1d, product_tones };
    Kind kind = Kind::plane_wave_l2;
    std::function<double(int)> coef;  // k_j (plane wave / composite) or r_j (gaussian)
    TailCertificate tail;             // l2 certificate on k, l1 certificate on r
    FunctionObject h = FunctionObject::constant(1, cplx{1.0, 0.0});  // composite symbol, 1-D
    // product_tones: f = prod_j (1 + a_j e^{i k_j x_j}); `coef` holds a_j with
    // an l1 certificate in `tail`, `tone` holds k_j
    std::function<double(int)> tone;

    double partial_norm_sq(int n) const;  // sum_{j<=n} coef_j^2
    double limit_norm_sq() const;         // certified: partial(64) + tail bound
    double tail_product(int after) const;  // certified prod_{j>after} (1 + coef_j)
    // f^{(n)}: the restriction to the first n coordinates, as a catalog object
    // (composite kind requires a frequency-combination symbol)
    FunctionObject restriction(int n, const Params& params) const;
};

struct CylinderSequence {
    enum class Family { product_family, plane_wave, gaussian, restriction_of };
    Family family = Family::product_family;
    // product family: f_n = prod_{j<=n} (1 + a_j e_j(x_j))
    std::function<double(int)> a;
    std::function<FunctionObject(int)> factor1d;
    TailCertificate a_tail;
    // plane_wave (k_j) / gaussian (r_j)
    std::function<double(int)> coef;
    std::shared_ptr<SequenceFunction> source;  // restriction_of

    CylinderFunction term(int n, const Params& params) const;
};

struct CauchyPair {
    int n = 0, m = 0;
    double distance = 0.0;    // upper estimate
    double lower = 0.0;       // certified lower bound
    bool passed = false;
};

struct LTopoResult {
    bool cauchy_ok = false;
    cplx value{0.0, 0.0};
    std::vector<CauchyPair> certificate;  // exactly the pairs that were tested
    CauchyPair violation;                 // first failing pair when !cauchy_ok
    std::vector<std::pair<double, cplx>> trace;  // (n, L_min(f_n))
};

// Topological-closure functional: requires a certified window sequence, runs
// the (finite, one-sided) Cauchy check on doubling pairs beyond the cutoff,
// and returns the limit value for accepted sequences. Rejection with a
// certified positive lower bound is conclusive; acceptance is one-sided (it
// records exactly which pairs were tested).
LTopoResult L_topological(const CylinderSequence& seq, const WindowSequence& w,
                          const Params& params, double tol, int cutoff = 16, int n_max = 64);

struct LPrimeResult {
    cplx value{0.0, 0.0};
    FresnelStatus status = FresnelStatus::ok;
    std::vector<std::pair<double, cplx>> trace;  // (n, L_n(f^{(n)}))
};

std::vector<int> default_doubling_schedule();  // 1, 2, 4, ..., 1024

// Sequential functional: lim_n L_n(f^{(n)}) along the schedule, with closed
// fast paths per kind and the certified limit when the tail certificate
// pins the coefficient sums.
LPrimeResult L_prime(const SequenceFunction& f, const WindowSequence& w, const Params& params,
                     const std::vector<int>& schedule, double tol);

// Pairing of the transformed symbol with the scaled chirp, normalized so that
// it equals the n-dimensional Fresnel value of x -> h(k.x) at lambda = |k|;
// at lambda = 0 it returns h(0). Requires ||g||_L2 = 1.
cplx composite_dual_value(const FunctionObject& h, double lambda, const Window& g,
                          const Params& params, const QuadOptions& opts = {});

// Representation formula recovering h(t) from the phase-space pairing of the
// transformed symbol with a pure tone; property-test harness.
cplx inversion_from_fourier(const FunctionObject& h, double t, const Window& g,
                            const Window& gamma, const Params& params,
                            const QuadOptions& opts = {});

// ---- kernel identity and dominating envelope ------------------------------------

struct AppendixKernelResult {
    cplx lhs{0.0, 0.0};  // direct n-dim regularized integral of the windowed tone
    cplx rhs{0.0, 0.0};  // the (w, lambda) kernel representation
};

AppendixKernelResult windowed_tone_kernel_identity(int n, const vec& k, double x, double xi,
                                                   double eps, const Params& params,
                                                   const QuadOptions& opts = {});

// Piecewise dominating envelope: 1 on |xi| <= B^2 |x|, else
// (1 + B^{-2} min{|xi - B^2 x|^2, |xi + B^2 x|^2})^{-m}.
double phi_dominator(int m, double B, double x, double xi);

// int phi(x, .) dxi: closed form 2 B^2 |x| + 2 B J_m and a trapezoid oracle.
double phi_xi_integral_closed(int m, double B, double x);
double phi_xi_integral_numeric(int m, double B, double x, double R, double h);

// Frozen once: sup_x (2 B^2 |x| + 2 B J_m) / <x> for m = 2, B = 1 is attained
// at x = 4/pi with value 2.54311; the stored constant rounds up.
inline constexpr double kPhiTailRatioBound = 2.5435;

struct DominatorReport {
    double B = 0.0;
    std::vector<std::pair<int, double>> max_ratio;  // (n, max |V(F_+ o lambda_n)| / phi)
    bool grows_beyond_5pct = false;
};

// Checks that one envelope constant works for every tested truncation level.
DominatorReport dominator_check(const std::function<double(int)>& k,
                                const TailCertificate& k_tail, const std::vector<int>& n_list,
                                int m, const Window& g1d, const Params& params,
                                unsigned long long seed);

// ---- serialization ----------------------------------------------------------------
// Coefficient sequences serialize as an explicit prefix plus a template tail;
// beyond `from` the sequence follows the template exactly, so the certificate
// is the template itself. Example: {"tail": {"type": "geometric", "ratio": 0.5,
// "scale": 1.0, "from": 21}}.

nlohmann::json to_json(const TailCertificate& t);
TailCertificate tail_from_json(const nlohmann::json& j);

nlohmann::json window_sequence_to_json(const WindowSequence& w, int prefix_len);
WindowSequence window_sequence_from_json(const nlohmann::json& j);

nlohmann::json sequence_function_to_json(const SequenceFunction& f, int prefix_len);
SequenceFunction sequence_function_from_json(const nlohmann::json& j);

}  // namespace fresnelio
