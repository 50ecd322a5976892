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

#include <optional>

#include "fresnelio/catalog.hpp"
#include "fresnelio/params.hpp"

namespace fresnelio {

struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

struct divergent_error : std::runtime_error {
    double envelope_level;  // level of the non-decaying envelope, as a tail witness
    divergent_error(const std::string& what, double level)
        : std::runtime_error(what), envelope_level(level) {}
};

// The diagonal-covariance window family: (2*pi*hbar)^{-n/2} e^{-<x,Qx>/(2 hbar)}
// with Q = diag(q_1..q_n), q_j > 0.
struct GaussianWindow {
    vec q;
    double hbar = 1.0;

    GaussianWindow(vec qq, double h) : q(std::move(qq)), hbar(h) {
        for (double v : q)
            if (!(v > 0.0)) throw std::invalid_argument("GaussianWindow: q_j must be positive");
    }
    int dim() const { return static_cast<int>(q.size()); }
};

// General diagonal Gaussian-type window: prod_j amp_j * exp(-a_j y_j^2/(2 hbar)),
// Re a_j > 0. Covers the window family above, the L2-normalized unit window
// and the chirped witnesses gamma_alpha.
struct WindowAxis {
    cplx a{1.0, 0.0};
    cplx amp{1.0, 0.0};
};

struct Window {
    std::vector<WindowAxis> axes;
    double hbar = 1.0;
    int dim() const { return static_cast<int>(axes.size()); }
};

Window to_window(const GaussianWindow& g);
Window unit_window(int dim, double hbar);                       // (pi hbar)^{-d/4} e^{-|y|^2/2hbar}
Window chirped_window(int dim, double alpha, double hbar);      // e^{-(alpha - i)|y|^2/2hbar}
Window conj_window(const Window& w);
Window fourier_window(const Window& w);

cplx window_value(const Window& w, const vec& y);
cplx window_inner(const Window& g, const Window& gamma);        // <g, gamma> = int g conj(gamma)

// Uniform symmetric grid [-R, R]^axes with step h; 2*floor(R/h)+1 nodes/axis.
struct GridSpec {
    double R = 12.0;
    double h = 0.01;
    int axes = 1;

    std::size_t nodes_per_axis() const {
        return 2 * static_cast<std::size_t>(std::floor(R / h)) + 1;
    }
};

struct StftSample {
    vec x;
    vec xi;
    cplx value;
    enum class Method { closed_form, quadrature } method = Method::closed_form;
};

// V_g f(x, xi) = (2 pi hbar)^{-d/2} int e^{-i xi.y/hbar} f(y) conj(g(y - x)) dy
cplx stft_closed(const FunctionObject& f, const Window& g, const vec& x, const vec& xi,
                 const Params& params);
cplx stft_closed(const AtomSum& f, const Window& g, const vec& x, const vec& xi, double hbar);
cplx stft_closed(const MeasureSum& f, const Window& g, const vec& x, const vec& xi, double hbar);

// Trapezoidal reference on a grid centered at x (per axis); refuses when the
// step cannot resolve the integrand's oscillation (h <= pi*hbar/(|xi| + rate*R))
// or when the window keeps mass beyond the grid's half width.
cplx stft_numeric(const FunctionObject& f, const Window& g, const vec& x, const vec& xi,
                  const GridSpec& grid, const Params& params);

// Closed form with quadrature fallback for kinds outside the closed family.
StftSample stft(const FunctionObject& f, const Window& g, const vec& x, const vec& xi,
                const GridSpec& grid, const Params& params);

enum class NormQuality { exact, upper_bound, grid_lower_bound };

struct NormResult {
    double value = 0.0;
    NormQuality quality = NormQuality::exact;
};

// int sup_x |V_g f(x, xi)| d(xi). Analytic x-supremum on the closed-form path
// (phases drop, the Gaussian envelope remains); throws divergent_error when the
// xi-envelope does not decay (chirps).
NormResult norm_M_infty_1(const FunctionObject& f, const Window& g, const Params& params);
NormResult norm_M_infty_1(const AtomSum& f, const Window& g, double hbar);

// grid path: sup over an x-grid (a lower bound), then xi-quadrature
NormResult norm_M_infty_1_grid(const FunctionObject& f, const Window& g, const GridSpec& grid,
                               const Params& params);

// sup_xi int |V_g f(x, xi)| dx
NormResult norm_M_1_infty(const FunctionObject& f, const Window& g, const Params& params);

// Pointwise product via the product-convolution identity at atom level.
AtomSum pointwise_product(const FunctionObject& f, const FunctionObject& g, const Params& params);

// ---- phase-space integration ------------------------------------------------
//
// All 2d-dimensional pairings reduce, per axis pair, to
//     mult * exp( qxx x^2 + qxy x*xi + qyy xi^2 + lx x + ly xi + k )
// integrated over the plane. The integrator plans a box from the real part
// (negative definite, else divergent_error), resolves the imaginary part at
// Nyquist with a safety factor, and reduces rows with the kernel backend.

struct Quad2D {
    cplx qxx{0, 0}, qxy{0, 0}, qyy{0, 0}, lx{0, 0}, ly{0, 0}, k{0, 0};
    cplx mult{1.0, 0.0};
};

struct QuadOptions {
    double tail_log = 41.4;    // boundary attenuation e^{-tail_log}
    double oversample = 1.3;   // Nyquist safety factor
    double pts_per_sigma = 6.0;
    std::size_t max_nodes = 400000000;       // per-integral budget
    std::optional<GridSpec> grid;            // explicit [-R,R]^2 override
};

cplx integrate_quad2d(const Quad2D& q, const QuadOptions& opts = {});

// 1-D companion: mult * int exp(c2 y^2 + c1 y + c0) dy with Re c2 < 0.
struct Quad1D {
    cplx c2{0, 0}, c1{0, 0}, c0{0, 0};
    cplx mult{1.0, 0.0};
};

cplx integrate_quad1d(const Quad1D& q, const QuadOptions& opts = {});

// One axis of an STFT factor as the quadratic form above. `conjugated` takes
// the complex conjugate; `negate_xi` evaluates at (x, -xi) (the V_{bar g}
// route used by the pairing); `extra_xy` adds a phase-space rotation phase
// c * x * xi to the exponent.
Quad2D stft_axis_quad(const GaussAxis& f, const WindowAxis& w, double hbar,
                      bool conjugated = false, bool negate_xi = false);
Quad2D delta_axis_quad(double point, const WindowAxis& w, double hbar, bool conjugated = false,
                       bool negate_xi = false);
Quad2D combine(const Quad2D& a, const Quad2D& b);  // product of the factors

// <h, f>_* = <g, gamma>^{-1} iint V_gamma h(x,xi) conj(V_g f(x,xi)) dx dxi,
// computed per term pair with closed-form factors. Throws divergent_error if
// <g,gamma> = 0 or if a term pair has a non-decaying envelope.
cplx dual_pairing(const FunctionObject& h, const FunctionObject& f, const Window& gamma,
                  const Window& g, const Params& params, const QuadOptions& opts = {});

// Both sides of the phase-space rotation identity
//   V_g f(x,xi) = e^{-i x.xi/hbar} V_{g^} f^(xi, -x)
// (closed forms only); a property-test harness.
std::pair<cplx, cplx> stft_fourier_rotation_check(const FunctionObject& f, const Window& g,
                                                  const vec& x, const vec& xi,
                                                  const Params& params);

}  // namespace fresnelio
