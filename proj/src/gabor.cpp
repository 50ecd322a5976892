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

#include "fresnelio/gabor.hpp"
#include "fresnelio/kernels.hpp"
#include "fresnelio/parallel.hpp"

namespace fresnelio {

// ---- windows ----------------------------------------------------------------

Window to_window(const GaussianWindow& g) {
    Window w;
    w.hbar = g.hbar;
    const cplx amp{std::pow(2.0 * M_PI * g.hbar, -0.5), 0.0};
    for (double qj : g.q) w.axes.push_back({cplx{qj, 0.0}, amp});
    return w;
}

Window unit_window(int dim, double hbar) {
    Window w;
    w.hbar = hbar;
    const cplx amp{std::pow(M_PI * hbar, -0.25), 0.0};
    for (int j = 0; j < dim; ++j) w.axes.push_back({cplx{1.0, 0.0}, amp});
    return w;
}

Window chirped_window(int dim, double alpha, double hbar) {
    if (!(alpha > 0.0)) throw std::invalid_argument("chirped_window: alpha must be positive");
    Window w;
    w.hbar = hbar;
    for (int j = 0; j < dim; ++j) w.axes.push_back({cplx{alpha, -1.0}, cplx{1.0, 0.0}});
    return w;
}

Window conj_window(const Window& w) {
    Window c = w;
    for (auto& ax : c.axes) {
        ax.a = std::conj(ax.a);
        ax.amp = std::conj(ax.amp);
    }
    return c;
}

Window fourier_window(const Window& w) {
    Window f = w;
    for (auto& ax : f.axes) {
        ax.amp = ax.amp * rsqrt(ax.a);
        ax.a = 1.0 / ax.a;
    }
    return f;
}

cplx window_value(const Window& w, const vec& y) {
    if (y.size() != w.axes.size()) throw dimension_mismatch("window_value: dim mismatch");
    cplx v{1.0, 0.0};
    for (std::size_t j = 0; j < y.size(); ++j)
        v *= w.axes[j].amp * std::exp(-w.axes[j].a * (y[j] * y[j]) / (2.0 * w.hbar));
    return v;
}

cplx window_inner(const Window& g, const Window& gamma) {
    if (g.axes.size() != gamma.axes.size()) throw dimension_mismatch("window_inner: dim mismatch");
    cplx v{1.0, 0.0};
    for (std::size_t j = 0; j < g.axes.size(); ++j) {
        const cplx s = g.axes[j].a + std::conj(gamma.axes[j].a);
        v *= g.axes[j].amp * std::conj(gamma.axes[j].amp) * std::sqrt(2.0 * M_PI * g.hbar / s);
    }
    return v;
}

// ---- closed-form STFT ---------------------------------------------------------
//
// Per axis, with S = z + conj(a) and beta = conj(a) x + b - i xi,
//   V-axis = conj(amp) S^{-1/2} exp( -(conj(a) x^2 - beta^2/S) / (2 hbar) ).
// The (2 pi hbar)^{-1/2} of the transform cancels against the Gaussian
// integral, so no extra prefactor appears.

namespace {

cplx stft_axis_value(const GaussAxis& f, const WindowAxis& w, double x, double xi, double hbar) {
    const cplx abar = std::conj(w.a);
    const cplx S = f.z + abar;
    const cplx beta = abar * x + f.b - I * xi;
    return std::conj(w.amp) * rsqrt(S) *
           std::exp(-(abar * (x * x) - beta * beta / S) / (2.0 * hbar));
}

}  // namespace

cplx stft_closed(const AtomSum& f, const Window& g, const vec& x, const vec& xi, double hbar) {
    if (f.dim != g.dim() || static_cast<int>(x.size()) != f.dim ||
        static_cast<int>(xi.size()) != f.dim)
        throw dimension_mismatch("stft_closed: dim mismatch");
    cplx total{0.0, 0.0};
    for (const auto& t : f.terms) {
        cplx v = t.weight;
        for (int j = 0; j < f.dim; ++j) v *= stft_axis_value(t.axes[j], g.axes[j], x[j], xi[j], hbar);
        total += v;
    }
    return total;
}

cplx stft_closed(const MeasureSum& f, const Window& g, const vec& x, const vec& xi, double hbar) {
    if (f.dim != g.dim()) throw dimension_mismatch("stft_closed: dim mismatch");
    const double pref = std::pow(2.0 * M_PI * hbar, -0.5 * f.dim);
    cplx total{0.0, 0.0};
    for (const auto& a : f.atoms) {
        double phase = 0.0;
        vec diff(f.dim);
        for (int j = 0; j < f.dim; ++j) {
            phase -= xi[j] * a.point[j] / hbar;
            diff[j] = a.point[j] - x[j];
        }
        total += a.weight * pref * cplx{std::cos(phase), std::sin(phase)} *
                 std::conj(window_value(g, diff));
    }
    return total;
}

cplx stft_closed(const FunctionObject& f, const Window& g, const vec& x, const vec& xi,
                 const Params& params) {
    return stft_closed(atomize(f, params), g, x, xi, params.hbar);
}

// ---- numeric STFT -------------------------------------------------------------

namespace {

// worst-case chirp rate and frequency shift of f, for the oscillation guard
void oscillation_scales(const FunctionObject& f, const Params& params, double& rate,
                        double& freq) {
    rate = 0.0;
    freq = 0.0;
    try {
        const AtomSum atoms = atomize(f, params);
        for (const auto& t : atoms.terms)
            for (const auto& ax : t.axes) {
                rate = std::max(rate, std::abs(ax.z.imag()));
                freq = std::max(freq, std::abs(ax.b.imag()));
            }
    } catch (const not_closed_form&) {
        rate = 1.0;  // assume a unit-rate chirp for opaque integrands
    }
}

}  // namespace

cplx stft_numeric(const FunctionObject& f, const Window& g, const vec& x, const vec& xi,
                  const GridSpec& grid, const Params& params) {
    const int d = f.dim();
    if (g.dim() != d || static_cast<int>(x.size()) != d || static_cast<int>(xi.size()) != d)
        throw dimension_mismatch("stft_numeric: dim mismatch");
    if (d > 2) throw std::invalid_argument("stft_numeric: grid path supports d <= 2");
    const double hbar = params.hbar;

    double rate = 0.0, freq = 0.0;
    oscillation_scales(f, params, rate, freq);
    double xi_max = 0.0;
    for (double v : xi) xi_max = std::max(xi_max, std::abs(v));
    const double limit = M_PI * hbar / (xi_max + freq + rate * grid.R + 1e-300);
    if (grid.h > limit)
        throw resolution_error("stft_numeric: step too coarse for the oscillation scale");
    // grid must cover the window's effective support around x
    for (const auto& ax : g.axes)
        if (ax.a.real() * grid.R * grid.R / (2.0 * hbar) < 27.6)  // e^{-27.6} ~ 1e-12
            throw resolution_error("stft_numeric: grid does not cover the window support");

    const std::size_t n = grid.nodes_per_axis();
    const double pref = std::pow(2.0 * M_PI * hbar, -0.5 * d);
    const double h = grid.h;
    cplx total{0.0, 0.0};
    if (d == 1) {
        vec y(1), dy(1);
        for (std::size_t j = 0; j < n; ++j) {
            y[0] = x[0] - grid.R + static_cast<double>(j) * h;
            dy[0] = y[0] - x[0];
            const double ph = -xi[0] * y[0] / hbar;
            total += evaluate(f, y, params) * std::conj(window_value(g, dy)) *
                     cplx{std::cos(ph), std::sin(ph)};
        }
        return pref * h * total;
    }
    vec y(2), dy(2);
    for (std::size_t j0 = 0; j0 < n; ++j0) {
        y[0] = x[0] - grid.R + static_cast<double>(j0) * h;
        dy[0] = y[0] - x[0];
        cplx row{0.0, 0.0};
        for (std::size_t j1 = 0; j1 < n; ++j1) {
            y[1] = x[1] - grid.R + static_cast<double>(j1) * h;
            dy[1] = y[1] - x[1];
            const double ph = -(xi[0] * y[0] + xi[1] * y[1]) / hbar;
            row += evaluate(f, y, params) * std::conj(window_value(g, dy)) *
                   cplx{std::cos(ph), std::sin(ph)};
        }
        total += row;
    }
    return pref * h * h * total;
}

// ---- norm algebra -------------------------------------------------------------
//
// Per axis, writing t = xi - Im b and b_r = Re b, the modulus of the STFT is
//   env * exp( -(axx x^2 + att t^2 + 2 axt x t + 2 bx x + 2 bt t + g0) / (2 hbar) )
// with the real coefficients below. The x-supremum and the xi-integral (or the
// x-integral and xi-supremum) are then exact Gaussian algebra.

namespace {

struct AxisNorm {
    double axx, att, axt, bx, bt, g0;
    double env;      // |amp| |S|^{-1/2}
    double t0;       // center Im b
    double scale;    // coefficient magnitude, for degeneracy thresholds
};

AxisNorm axis_norm_algebra(const GaussAxis& f, const WindowAxis& w) {
    const cplx abar = std::conj(w.a);
    const cplx S = f.z + abar;
    const cplx A = abar * f.z / S;
    const cplx B = abar / S;
    const cplx C = 1.0 / S;
    const double br = f.b.real();
    AxisNorm r{};
    r.axx = A.real();
    r.att = C.real();
    r.axt = -B.imag();
    r.bx = -B.real() * br;
    r.bt = -C.imag() * br;
    r.g0 = -C.real() * br * br;
    r.env = std::abs(w.amp) * std::pow(std::abs(S), -0.5);
    r.t0 = f.b.imag();
    r.scale = std::abs(A) + std::abs(B) + std::abs(C);
    return r;
}

constexpr double kDegenerate = 1e-12;

// int_R sup_x |V-axis| d(xi); throws divergent_error when the xi-envelope
// fails to decay (the chirp phenomenon)
double axis_norm_minfty1(const GaussAxis& f, const WindowAxis& w, double hbar) {
    const AxisNorm r = axis_norm_algebra(f, w);
    const double tol = kDegenerate * (r.scale + 1.0);
    double att = r.att, bt = r.bt, g0 = r.g0;
    if (r.axx > tol) {
        att -= r.axt * r.axt / r.axx;
        bt -= r.axt * r.bx / r.axx;
        g0 -= r.bx * r.bx / r.axx;
    } else {
        if (std::abs(r.bx) > tol || std::abs(r.axt) > tol)
            throw std::invalid_argument("norm: unbounded x-direction");
    }
    if (att <= tol)
        throw divergent_error("norm_M_infty_1: xi-envelope does not decay",
                              r.env * std::exp(-g0 / (2.0 * hbar)));
    return r.env * std::sqrt(2.0 * M_PI * hbar / att) *
           std::exp(-(g0 - bt * bt / att) / (2.0 * hbar));
}

// sup_xi int_R |V-axis| dx
double axis_norm_m1infty(const GaussAxis& f, const WindowAxis& w, double hbar) {
    const AxisNorm r = axis_norm_algebra(f, w);
    const double tol = kDegenerate * (r.scale + 1.0);
    if (r.axx <= tol)
        throw divergent_error("norm_M_1_infty: x-envelope does not decay", r.env);
    const double att = r.att - r.axt * r.axt / r.axx;
    const double bt = r.bt - r.axt * r.bx / r.axx;
    const double g0 = r.g0 - r.bx * r.bx / r.axx;
    const double integral = r.env * std::sqrt(2.0 * M_PI * hbar / r.axx);
    if (att > tol) return integral * std::exp(-(g0 - bt * bt / att) / (2.0 * hbar));
    if (att < -tol || std::abs(bt) > tol)
        throw divergent_error("norm_M_1_infty: xi-supremum diverges", integral);
    return integral * std::exp(-g0 / (2.0 * hbar));
}

bool window_is_real(const Window& w) {
    for (const auto& ax : w.axes)
        if (ax.a.imag() != 0.0 || ax.amp.imag() != 0.0) return false;
    return true;
}

void merge_terms(AtomSum& f) {
    std::vector<GaussTerm> out;
    for (const auto& t : f.terms) {
        bool merged = false;
        for (auto& u : out) {
            bool same = true;
            for (int j = 0; j < f.dim && same; ++j)
                same = (u.axes[j].z == t.axes[j].z) && (u.axes[j].b == t.axes[j].b);
            if (same) {
                u.weight += t.weight;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(t);
    }
    std::erase_if(out, [](const GaussTerm& t) { return std::abs(t.weight) == 0.0; });
    f.terms = std::move(out);
}

}  // namespace

NormResult norm_M_infty_1(const AtomSum& f_in, const Window& g, double hbar) {
    if (f_in.dim != g.dim()) throw dimension_mismatch("norm_M_infty_1: dim mismatch");
    AtomSum f = f_in;
    merge_terms(f);
    if (f.terms.empty()) return {0.0, NormQuality::exact};
    if (f.terms.size() == 1) {
        const auto& t = f.terms.front();
        double v = std::abs(t.weight);
        for (int j = 0; j < f.dim; ++j) v *= axis_norm_minfty1(t.axes[j], g.axes[j], hbar);
        return {v, NormQuality::exact};
    }
    // sum of terms: sup_x |sum| <= sum sup_x, with equality when the x-phases
    // can be aligned pointwise in xi (always for two distinct frequencies, and
    // for positive weights against a real window)
    bool pure_freq = true, positive = true;
    for (const auto& t : f.terms) {
        if (!(t.weight.imag() == 0.0 && t.weight.real() > 0.0)) positive = false;
        for (const auto& ax : t.axes)
            if (ax.z != cplx{0.0, 0.0} || ax.b.real() != 0.0) pure_freq = false;
    }
    double v = 0.0;
    for (const auto& t : f.terms) {
        double tv = std::abs(t.weight);
        for (int j = 0; j < f.dim; ++j) tv *= axis_norm_minfty1(t.axes[j], g.axes[j], hbar);
        v += tv;
    }
    const bool exact = pure_freq && (f.terms.size() <= 2 || (positive && window_is_real(g)));
    return {v, exact ? NormQuality::exact : NormQuality::upper_bound};
}

namespace {

Window window_slice(const Window& g, int from, int len) {
    Window w;
    w.hbar = g.hbar;
    w.axes.assign(g.axes.begin() + from, g.axes.begin() + from + len);
    return w;
}

}  // namespace

NormResult norm_M_infty_1(const FunctionObject& f, const Window& g, const Params& params) {
    if (f.dim() != g.dim()) throw dimension_mismatch("norm_M_infty_1: dim mismatch");
    if (f.kind() == Kind::tensor) {
        double v = 1.0;
        NormQuality q = NormQuality::exact;
        int off = 0;
        for (const auto& fac : f.factors()) {
            const NormResult r =
                norm_M_infty_1(fac, window_slice(g, off, fac.dim()), params);
            v *= r.value;
            if (r.quality != NormQuality::exact) q = r.quality;
            off += fac.dim();
        }
        return {v, q};
    }
    return norm_M_infty_1(atomize(f, params), g, params.hbar);
}

NormResult norm_M_1_infty(const FunctionObject& f, const Window& g, const Params& params) {
    if (f.dim() != g.dim()) throw dimension_mismatch("norm_M_1_infty: dim mismatch");
    const double hbar = params.hbar;
    if (f.kind() == Kind::tensor) {
        double v = 1.0;
        NormQuality q = NormQuality::exact;
        int off = 0;
        for (const auto& fac : f.factors()) {
            const NormResult r = norm_M_1_infty(fac, window_slice(g, off, fac.dim()), params);
            v *= r.value;
            if (r.quality != NormQuality::exact) q = r.quality;
            off += fac.dim();
        }
        return {v, q};
    }
    AtomSum a = atomize(f, params);
    merge_terms(a);
    if (a.terms.empty()) return {0.0, NormQuality::exact};
    double v = 0.0;
    for (const auto& t : a.terms) {
        double tv = std::abs(t.weight);
        for (int j = 0; j < a.dim; ++j) tv *= axis_norm_m1infty(t.axes[j], g.axes[j], hbar);
        v += tv;
    }
    return {v, a.terms.size() == 1 ? NormQuality::exact : NormQuality::upper_bound};
}

NormResult norm_M_infty_1_grid(const FunctionObject& f, const Window& g, const GridSpec& grid,
                               const Params& params) {
    if (f.dim() != 1) throw std::invalid_argument("grid norm path supports d = 1");
    // sup over the x-grid underestimates the true supremum; flagged as such
    const std::size_t n = grid.nodes_per_axis();
    const GridSpec inner{grid.R, grid.h, 1};
    double total = 0.0;
    std::vector<double> sups = parallel_map<double>(n, [&](std::size_t jxi) {
        const double xi = -grid.R + static_cast<double>(jxi) * grid.h;
        double sup = 0.0;
        for (std::size_t jx = 0; jx < n; ++jx) {
            const double x = -grid.R + static_cast<double>(jx) * grid.h;
            sup = std::max(sup, std::abs(stft_numeric(f, g, {x}, {xi}, inner, params)));
        }
        return sup;
    });
    for (double s : sups) total += s;
    return {grid.h * total, NormQuality::grid_lower_bound};
}

AtomSum pointwise_product(const FunctionObject& f, const FunctionObject& g, const Params& params) {
    if (f.dim() != g.dim()) throw dimension_mismatch("pointwise_product: dim mismatch");
    const AtomSum a = atomize(f, params), b = atomize(g, params);
    AtomSum out;
    out.dim = a.dim;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) {
            GaussTerm t;
            t.weight = ta.weight * tb.weight;
            for (int j = 0; j < a.dim; ++j)
                t.axes.push_back({ta.axes[j].z + tb.axes[j].z, ta.axes[j].b + tb.axes[j].b});
            out.terms.push_back(std::move(t));
        }
    return out;
}

// ---- phase-space integration ---------------------------------------------------

Quad2D stft_axis_quad(const GaussAxis& f, const WindowAxis& w, double hbar, bool conjugated,
                      bool negate_xi) {
    const cplx abar = std::conj(w.a);
    const cplx S = f.z + abar;
    const cplx A = abar * f.z / S;
    const cplx B = abar / S;
    const cplx C = 1.0 / S;
    Quad2D q;
    q.qxx = -A / (2.0 * hbar);
    q.qxy = -I * B / hbar;
    q.qyy = -C / (2.0 * hbar);
    q.lx = B * f.b / hbar;
    q.ly = -I * C * f.b / hbar;
    q.k = C * f.b * f.b / (2.0 * hbar);
    q.mult = std::conj(w.amp) * rsqrt(S);
    if (negate_xi) {
        q.qxy = -q.qxy;
        q.ly = -q.ly;
    }
    if (conjugated) {
        q.qxx = std::conj(q.qxx);
        q.qxy = std::conj(q.qxy);
        q.qyy = std::conj(q.qyy);
        q.lx = std::conj(q.lx);
        q.ly = std::conj(q.ly);
        q.k = std::conj(q.k);
        q.mult = std::conj(q.mult);
    }
    return q;
}

Quad2D delta_axis_quad(double point, const WindowAxis& w, double hbar, bool conjugated,
                       bool negate_xi) {
    const cplx abar = std::conj(w.a);
    Quad2D q;
    q.qxx = -abar / (2.0 * hbar);
    q.lx = abar * point / hbar;
    q.k = -abar * point * point / (2.0 * hbar);
    q.ly = -I * point / hbar;
    q.mult = std::pow(2.0 * M_PI * hbar, -0.5) * std::conj(w.amp);
    if (negate_xi) q.ly = -q.ly;
    if (conjugated) {
        q.qxx = std::conj(q.qxx);
        q.lx = std::conj(q.lx);
        q.ly = std::conj(q.ly);
        q.k = std::conj(q.k);
        q.mult = std::conj(q.mult);
    }
    return q;
}

Quad2D combine(const Quad2D& a, const Quad2D& b) {
    Quad2D q;
    q.qxx = a.qxx + b.qxx;
    q.qxy = a.qxy + b.qxy;
    q.qyy = a.qyy + b.qyy;
    q.lx = a.lx + b.lx;
    q.ly = a.ly + b.ly;
    q.k = a.k + b.k;
    q.mult = a.mult * b.mult;
    return q;
}

cplx integrate_quad2d(const Quad2D& q, const QuadOptions& opts) {
    // negative-definiteness of the real part fixes the box
    const double m00 = -q.qxx.real();
    const double m11 = -q.qyy.real();
    const double m01 = -0.5 * q.qxy.real();
    const double scale = std::abs(q.qxx) + std::abs(q.qyy) + std::abs(q.qxy) + 1e-300;
    const double det = m00 * m11 - m01 * m01;
    if (!(m00 > 0.0) || !(m11 > 0.0) || det <= 1e-12 * scale * scale) {
        const double level = std::abs(q.mult) * std::exp(std::min(q.k.real(), 0.0));
        throw divergent_error("integrate_quad2d: envelope is not integrable", level);
    }
    double cx = 0.0, cy = 0.0, Rx = 0.0, Ry = 0.0, hx = 0.0, hy = 0.0;
    if (opts.grid) {
        Rx = Ry = opts.grid->R;
        hx = hy = opts.grid->h;
    } else {
        // critical point of the real part
        cx = (0.5 * q.lx.real() * m11 - 0.5 * q.ly.real() * m01) / det;
        cy = (0.5 * q.ly.real() * m00 - 0.5 * q.lx.real() * m01) / det;
        const double sx = m00 - m01 * m01 / m11;  // decay after maximizing over y
        const double sy = m11 - m01 * m01 / m00;
        Rx = std::sqrt(opts.tail_log / sx);
        Ry = std::sqrt(opts.tail_log / sy);
        const double wx =
            2.0 * std::abs(q.qxx.imag()) * (std::abs(cx) + Rx) +
            std::abs(q.qxy.imag()) * (std::abs(cy) + Ry) + std::abs(q.lx.imag());
        const double wy =
            2.0 * std::abs(q.qyy.imag()) * (std::abs(cy) + Ry) +
            std::abs(q.qxy.imag()) * (std::abs(cx) + Rx) + std::abs(q.ly.imag());
        hx = std::min(M_PI / (opts.oversample * (wx + 1e-300)),
                      1.0 / (opts.pts_per_sigma * std::sqrt(2.0 * m00)));
        hy = std::min(M_PI / (opts.oversample * (wy + 1e-300)),
                      1.0 / (opts.pts_per_sigma * std::sqrt(2.0 * m11)));
    }
    const std::size_t nx = 2 * static_cast<std::size_t>(std::ceil(Rx / hx)) + 1;
    const std::size_t ny = 2 * static_cast<std::size_t>(std::ceil(Ry / hy)) + 1;
    if (nx * ny > opts.max_nodes)
        throw resolution_error("integrate_quad2d: node budget exceeded");

    const double x0 = cx - 0.5 * hx * static_cast<double>(nx - 1);
    const double y0 = cy - 0.5 * hy * static_cast<double>(ny - 1);
    const auto& be = kernels::active_backend();

    constexpr std::size_t kRowChunk = 32;
    const std::size_t nchunks = (ny + kRowChunk - 1) / kRowChunk;
    std::vector<cplx> partial = parallel_map<cplx>(nchunks, [&](std::size_t c) {
        cplx acc{0.0, 0.0};
        const std::size_t jend = std::min(ny, (c + 1) * kRowChunk);
        for (std::size_t j = c * kRowChunk; j < jend; ++j) {
            const double y = y0 + static_cast<double>(j) * hy;
            kernels::QuadPhase row;
            row.c2 = q.qxx;
            row.c1 = q.qxy * y + q.lx;
            row.c0 = (q.qyy * y + q.ly) * y + q.k;
            acc += be.phase_sum(row, x0, hx, nx);
        }
        return acc;
    });
    cplx total{0.0, 0.0};
    for (const cplx& p : partial) total += p;
    return q.mult * hx * hy * total;
}

StftSample stft(const FunctionObject& f, const Window& g, const vec& x, const vec& xi,
                const GridSpec& grid, const Params& params) {
    StftSample s;
    s.x = x;
    s.xi = xi;
    try {
        s.value = stft_closed(f, g, x, xi, params);
        s.method = StftSample::Method::closed_form;
    } catch (const not_closed_form&) {
        s.value = stft_numeric(f, g, x, xi, grid, params);
        s.method = StftSample::Method::quadrature;
    }
    return s;
}

cplx integrate_quad1d(const Quad1D& q, const QuadOptions& opts) {
    const double m = -q.c2.real();
    if (!(m > 0.0)) {
        const double level = std::abs(q.mult) * std::exp(std::min(q.c0.real(), 0.0));
        throw divergent_error("integrate_quad1d: envelope is not integrable", level);
    }
    const double c = 0.5 * q.c1.real() / m;
    const double R = std::sqrt(opts.tail_log / m);
    const double omega =
        2.0 * std::abs(q.c2.imag()) * (std::abs(c) + R) + std::abs(q.c1.imag());
    const double h = std::min(M_PI / (opts.oversample * (omega + 1e-300)),
                              1.0 / (opts.pts_per_sigma * std::sqrt(2.0 * m)));
    const std::size_t n = 2 * static_cast<std::size_t>(std::ceil(R / h)) + 1;
    if (n > opts.max_nodes) throw resolution_error("integrate_quad1d: node budget exceeded");
    const double y0 = c - 0.5 * h * static_cast<double>(n - 1);
    kernels::QuadPhase row{q.c2, q.c1, q.c0};
    return q.mult * h * kernels::active_backend().phase_sum(row, y0, h, n);
}

// ---- pairings -------------------------------------------------------------------

cplx dual_pairing(const FunctionObject& h, const FunctionObject& f, const Window& gamma,
                  const Window& g, const Params& params, const QuadOptions& opts) {
    if (h.dim() != f.dim()) throw dimension_mismatch("dual_pairing: dim mismatch");
    const double hbar = params.hbar;
    const cplx gg = window_inner(g, gamma);
    if (std::abs(gg) == 0.0) throw divergent_error("dual_pairing: <g,gamma> = 0", 0.0);
    const AtomSum ha = atomize(h, params), fa = atomize(f, params);
    cplx total{0.0, 0.0};
    for (const auto& th : ha.terms)
        for (const auto& tf : fa.terms) {
            cplx v = th.weight * std::conj(tf.weight);
            for (int j = 0; j < ha.dim; ++j) {
                const Quad2D a = stft_axis_quad(th.axes[j], gamma.axes[j], hbar);
                const Quad2D b =
                    stft_axis_quad(tf.axes[j], g.axes[j], hbar, /*conjugated=*/true);
                v *= integrate_quad2d(combine(a, b), opts);
            }
            total += v;
        }
    return total / gg;
}

std::pair<cplx, cplx> stft_fourier_rotation_check(const FunctionObject& f, const Window& g,
                                                  const vec& x, const vec& xi,
                                                  const Params& params) {
    const double hbar = params.hbar;
    const cplx lhs = stft_closed(f, g, x, xi, params);
    const FourierImage fi = fourier_transform(f, params);
    const Window ghat = fourier_window(g);
    vec mx(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) mx[j] = -x[j];
    double dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += x[j] * xi[j];
    const cplx phase = std::exp(-I * dot / hbar);
    cplx vhat{0.0, 0.0};
    if (!fi.smooth.terms.empty()) vhat += stft_closed(fi.smooth, ghat, xi, mx, hbar);
    if (!fi.masses.atoms.empty()) vhat += stft_closed(fi.masses, ghat, xi, mx, hbar);
    return {lhs, phase * vhat};
}

}  // namespace fresnelio
