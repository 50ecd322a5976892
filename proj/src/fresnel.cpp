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
#include <limits>

#include "fresnelio/fresnel.hpp"
#include "fresnelio/kernels.hpp"
#include "fresnelio/parallel.hpp"

namespace fresnelio {

namespace {

constexpr double kTailLog = 41.0;  // e^{-41} boundary attenuation

// One mollified coordinate integral of a Gaussian-type atom against the
// quadratic phase:  int exp( ((i - z) y^2/(2 hbar) + b y/hbar ) ) * phi(eps y) dy.
// Returns the integral value; n_used reports the node count.
cplx mollified_axis_integral(const GaussAxis& ax, double eps, Mollifier moll, double hbar,
                             std::size_t budget, std::size_t& n_used) {
    kernels::QuadPhase q;
    q.c2 = (I - ax.z) / (2.0 * hbar);
    q.c1 = ax.b / hbar;
    q.c0 = {0.0, 0.0};
    double alpha = 0.5 * ax.z.real() / hbar;  // Gaussian decay rate of the integrand
    double lin = 0.0;                         // exponential decay rate
    if (moll == Mollifier::gaussian) {
        alpha += 0.5 * eps * eps;
        q.c2 -= 0.5 * eps * eps;
    } else {
        lin = eps;  // sech(eps y) ~ 2 e^{-eps |y|}
    }
    double R;
    if (alpha > 0.0)
        R = (-lin + std::sqrt(lin * lin + 4.0 * alpha * kTailLog)) / (2.0 * alpha);
    else
        R = (kTailLog + 4.0) / lin;
    // oscillation: |d/dy Im(exponent)| <= 2|Im c2| R + |Im c1|
    const double omega = 2.0 * std::abs(q.c2.imag()) * R + std::abs(q.c1.imag());
    const double h = std::min(M_PI / (1.25 * omega + 1e-300), R / 64.0);
    std::size_t n = 2 * static_cast<std::size_t>(std::ceil(R / h)) + 1;
    if (n > budget) throw resolution_error("fresnel_direct: node budget exceeded");
    n_used = n;
    const double y0 = -h * static_cast<double>(n - 1) / 2.0;
    const auto& be = kernels::active_backend();

    constexpr std::size_t kChunk = 1u << 14;
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<cplx> parts = parallel_map<cplx>(nchunks, [&](std::size_t c) {
        const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
        const double yy = y0 + static_cast<double>(lo) * h;
        return moll == Mollifier::gaussian ? be.phase_sum(q, yy, h, hi - lo)
                                           : be.phase_sum_sech(q, eps, yy, h, hi - lo);
    });
    cplx s{0.0, 0.0};
    for (const cplx& p : parts) s += p;
    return h * s;
}

// The mollified value at one eps for an atomizable integrand, any dimension
// (atoms are coordinate-separable, and so are both mollifier profiles).
cplx mollified_value_atoms(const AtomSum& atoms, double eps, Mollifier moll, double hbar,
                           std::size_t budget) {
    const cplx pref1 = chirp_prefactor(1, hbar);
    cplx total{0.0, 0.0};
    for (const auto& t : atoms.terms) {
        cplx v = t.weight;
        for (const auto& ax : t.axes) {
            std::size_t used = 0;
            v *= pref1 * mollified_axis_integral(ax, eps, moll, hbar, budget, used);
        }
        total += v;
    }
    return total;
}

double moll_profile(Mollifier m, double u) {
    return m == Mollifier::gaussian ? std::exp(-0.5 * u * u) : 1.0 / std::cosh(u);
}

// Grid fallback for non-separable integrands (d <= 2).
cplx mollified_value_grid(const FunctionObject& f, double eps, Mollifier moll,
                          const Params& params, std::size_t budget) {
    const int d = f.dim();
    if (d > 2) throw not_closed_form("fresnel_direct: non-separable integrand needs d <= 2");
    const double hbar = params.hbar;
    const double alpha = moll == Mollifier::gaussian ? 0.5 * eps * eps : 0.0;
    const double lin = moll == Mollifier::gaussian ? 0.0 : eps;
    const double R = alpha > 0.0
                         ? (-lin + std::sqrt(lin * lin + 4.0 * alpha * kTailLog)) / (2.0 * alpha)
                         : (kTailLog + 4.0) / lin;
    const double omega = R / hbar + 1.0;
    const double h = M_PI / (1.25 * omega);
    const std::size_t n = 2 * static_cast<std::size_t>(std::ceil(R / h)) + 1;
    if ((d == 1 ? n : n * n) > budget)
        throw resolution_error("fresnel_direct: node budget exceeded on the grid path");
    cplx total{0.0, 0.0};
    if (d == 1) {
        vec y(1);
        for (std::size_t j = 0; j < n; ++j) {
            y[0] = -R + static_cast<double>(j) * h;
            const double ph = y[0] * y[0] / (2.0 * hbar);
            total += evaluate(f, y, params) * cplx{std::cos(ph), std::sin(ph)} *
                     moll_profile(moll, eps * y[0]);
        }
        return chirp_prefactor(1, hbar) * h * total;
    }
    std::vector<cplx> rows = parallel_map<cplx>(n, [&](std::size_t j0) {
        vec y(2);
        y[0] = -R + static_cast<double>(j0) * h;
        cplx row{0.0, 0.0};
        for (std::size_t j1 = 0; j1 < n; ++j1) {
            y[1] = -R + static_cast<double>(j1) * h;
            const double ph = (y[0] * y[0] + y[1] * y[1]) / (2.0 * hbar);
            row += evaluate(f, y, params) * cplx{std::cos(ph), std::sin(ph)} *
                   moll_profile(moll, eps * std::hypot(y[0], y[1]));
        }
        return row;
    });
    for (const cplx& r : rows) total += r;
    return chirp_prefactor(2, hbar) * h * h * total;
}

// Richardson with the contraction ratio estimated from the last three
// iterates (Aitken form); falls back to the last value when degenerate.
cplx extrapolate3(cplx v0, cplx v1, cplx v2) {
    const cplx d1 = v1 - v0, d2 = v2 - v1;
    const cplx den = d2 - d1;
    if (std::abs(den) < 1e-15 * (std::abs(d1) + std::abs(d2) + 1e-300)) return v2;
    return v2 - d2 * d2 / den;
}

}  // namespace

FresnelResult fresnel_direct(const FunctionObject& f, const RegularizerSchedule& sched,
                             const Params& params) {
    if (sched.epsilons.size() < 3)
        throw std::invalid_argument("fresnel_direct: schedule needs at least 3 entries");
    for (std::size_t i = 1; i < sched.epsilons.size(); ++i)
        if (!(sched.epsilons[i] < sched.epsilons[i - 1]))
            throw std::invalid_argument("fresnel_direct: epsilons must decrease strictly");

    bool separable = true;
    AtomSum atoms;
    try {
        atoms = atomize(f, params);
    } catch (const not_closed_form&) {
        separable = false;
    }

    FresnelResult res;
    res.method = FresnelMethod::direct_eps;
    for (double eps : sched.epsilons) {
        cplx v;
        try {
            v = separable
                    ? mollified_value_atoms(atoms, eps, sched.mollifier, params.hbar,
                                            sched.node_budget)
                    : mollified_value_grid(f, eps, sched.mollifier, params, sched.node_budget);
        } catch (const resolution_error&) {
            break;  // schedule truncated by the node budget; use what we have
        }
        res.trace.emplace_back(eps, v);
        const std::size_t k = res.trace.size();
        if (k >= 3) {
            const double d1 = std::abs(res.trace[k - 2].second - res.trace[k - 3].second);
            const double d2 = std::abs(res.trace[k - 1].second - res.trace[k - 2].second);
            const double scale = 1.0 + std::abs(v);
            if (d1 < sched.settle_tol * scale && d2 < sched.settle_tol * scale) break;
        }
    }
    if (res.trace.size() < 3) {
        res.status = FresnelStatus::non_convergent;
        if (!res.trace.empty()) res.value = res.trace.back().second;
        res.error_estimate = std::abs(res.value);
        return res;
    }
    const std::size_t k = res.trace.size();
    const cplx v0 = res.trace[k - 3].second, v1 = res.trace[k - 2].second,
               v2 = res.trace[k - 1].second;
    const cplx ext = extrapolate3(v0, v1, v2);
    const double last_diff = std::abs(v2 - v1);
    res.value = ext;
    res.error_estimate = std::max(last_diff, std::abs(ext - v2));

    // a convergent trace contracts; flag stalled or growing differences over
    // the last iterates
    const double prev_diff = std::abs(v1 - v0);
    const double scale = 1.0 + std::abs(v2);
    const bool stalled = last_diff > 0.9 * prev_diff && last_diff > 1e-9 * scale;
    if (stalled || last_diff > 0.5 * scale) {
        res.status = FresnelStatus::non_convergent;
        res.value = v2;
        res.error_estimate = std::max(last_diff, prev_diff);
    }
    return res;
}

namespace {

// Core phase-space pairing: <gamma,g>^{-1} iint V_g F_+ * V_{conj gamma} f(x,-xi).
// The f-side factor may be an atom sum or a point-mass sum (the amalgam route).
cplx pair_axes_product(const std::vector<Quad2D>& a, const std::vector<Quad2D>& b,
                       const QuadOptions& opts) {
    cplx v{1.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) v *= integrate_quad2d(combine(a[j], b[j]), opts);
    return v;
}

std::vector<Quad2D> chirp_factor_axes(int dim, const Window& g, double hbar) {
    std::vector<Quad2D> axes;
    const GaussAxis chirp_ax{cplx{0.0, -1.0}, cplx{0.0, 0.0}};
    for (int j = 0; j < dim; ++j) axes.push_back(stft_axis_quad(chirp_ax, g.axes[j], hbar));
    return axes;
}

cplx phase_space_value(const AtomSum& fa, const Window& g, const Window& gamma,
                       const Params& params, const QuadOptions& opts) {
    const double hbar = params.hbar;
    const cplx gg = window_inner(gamma, g);
    if (std::abs(gg) == 0.0) throw divergent_error("phase_space: <gamma,g> = 0", 0.0);
    const Window gamma_bar = conj_window(gamma);
    const std::vector<Quad2D> chirp_axes = chirp_factor_axes(fa.dim, g, hbar);
    const cplx chirp_weight = chirp_prefactor(fa.dim, hbar);
    cplx total{0.0, 0.0};
    for (const auto& tf : fa.terms) {
        std::vector<Quad2D> fx;
        for (int j = 0; j < fa.dim; ++j)
            fx.push_back(stft_axis_quad(tf.axes[j], gamma_bar.axes[j], hbar,
                                        /*conjugated=*/false, /*negate_xi=*/true));
        total += tf.weight * pair_axes_product(chirp_axes, fx, opts);
    }
    return chirp_weight * total / gg;
}

cplx phase_space_value(const MeasureSum& fm, const Window& g, const Window& gamma,
                       const Params& params, const QuadOptions& opts) {
    const double hbar = params.hbar;
    const cplx gg = window_inner(gamma, g);
    if (std::abs(gg) == 0.0) throw divergent_error("phase_space: <gamma,g> = 0", 0.0);
    const Window gamma_bar = conj_window(gamma);
    const std::vector<Quad2D> chirp_axes = chirp_factor_axes(fm.dim, g, hbar);
    const cplx chirp_weight = chirp_prefactor(fm.dim, hbar);
    cplx total{0.0, 0.0};
    for (const auto& a : fm.atoms) {
        std::vector<Quad2D> fx;
        for (int j = 0; j < fm.dim; ++j)
            fx.push_back(delta_axis_quad(a.point[j], gamma_bar.axes[j], hbar,
                                         /*conjugated=*/false, /*negate_xi=*/true));
        total += a.weight * pair_axes_product(chirp_axes, fx, opts);
    }
    return chirp_weight * total / gg;
}

cplx phase_space_value(const FourierImage& fi, const Window& g, const Window& gamma,
                       const Params& params, const QuadOptions& opts) {
    cplx v{0.0, 0.0};
    if (!fi.smooth.terms.empty()) v += phase_space_value(fi.smooth, g, gamma, params, opts);
    if (!fi.masses.atoms.empty()) v += phase_space_value(fi.masses, g, gamma, params, opts);
    return v;
}

// two refinement levels: the coarse/fine difference is the error estimate
template <class FSide>
FresnelResult phase_space_result(const FSide& fside, const Window& g, const Window& gamma,
                                 const Params& params, const QuadOptions& opts) {
    FresnelResult res;
    res.method = FresnelMethod::phase_space;
    const cplx coarse = phase_space_value(fside, g, gamma, params, opts);
    QuadOptions fine = opts;
    fine.tail_log = opts.tail_log + 6.0;
    fine.oversample = opts.oversample * 1.4;
    const cplx refined = phase_space_value(fside, g, gamma, params, fine);
    res.trace.emplace_back(1.0, coarse);
    res.trace.emplace_back(2.0, refined);
    res.value = refined;
    res.error_estimate = std::abs(refined - coarse);
    return res;
}

}  // namespace

FresnelResult fresnel_phase_space(const FunctionObject& f, const Window& g, const Window& gamma,
                                  const Params& params, const QuadOptions& opts) {
    // membership surrogate: the mixed norm must be finite on the f side
    norm_M_infty_1(f, gamma, params);  // throws divergent_error for chirp-type inputs
    return phase_space_result(atomize(f, params), g, gamma, params, opts);
}

cplx fresnel_parseval_measure(const DiscreteMeasure& mu, const Params& params) {
    cplx s{0.0, 0.0};
    for (const auto& [p, w] : mu.atoms) {
        double p2 = 0.0;
        for (double v : p) p2 += v * v;
        const double ph = -0.5 * params.hbar * p2;
        s += w * cplx{std::cos(ph), std::sin(ph)};
    }
    return s;
}

FresnelResult fresnel_W_infty_1(const FunctionObject& preimage, const Window& g,
                                const Window& gamma, const Params& params,
                                const QuadOptions& opts) {
    return phase_space_result(fourier_transform(preimage, params), g, gamma, params, opts);
}

// ---- exact norms ----------------------------------------------------------------

double op_norm_Ln(const vec& q) {
    double s = 0.0;
    for (double qj : q) s += std::log1p(qj * qj);
    return std::exp(0.25 * s);
}

std::pair<double, double> op_norm_witnesses(const vec& q, double alpha, double eps) {
    if (!(alpha > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("op_norm_witnesses: parameters must be positive");
    double lu = 0.0, ll = 0.0;
    for (double qj : q) {
        lu += 0.25 * std::log1p((alpha + qj) * (alpha + qj));
        ll += 0.25 * std::log1p((qj + eps) * (qj + eps)) -
              0.5 * std::log1p(eps * (qj + eps));
    }
    return {std::exp(lu), std::exp(ll)};
}

// ---- tail certificates ------------------------------------------------------------

TailCertificate TailCertificate::geometric(double scale, double ratio, int from) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("geometric certificate needs 0 < ratio < 1");
    TailCertificate t;
    t.type = Type::geometric;
    t.scale = scale;
    t.ratio = ratio;
    t.from = from;
    return t;
}

TailCertificate TailCertificate::p_series(double scale, double p, int from) {
    if (!(p > 0.5)) throw std::invalid_argument("p_series certificate needs p > 1/2");
    TailCertificate t;
    t.type = Type::p_series;
    t.scale = scale;
    t.p = p;
    t.from = from;
    return t;
}

double TailCertificate::bound_at(int j) const {
    switch (type) {
        case Type::geometric: return scale * std::pow(ratio, j);
        case Type::p_series: return scale * std::pow(static_cast<double>(j), -p);
        case Type::none: break;
    }
    return std::numeric_limits<double>::infinity();
}

double TailCertificate::tail_sum(int after) const {
    switch (type) {
        case Type::geometric: return scale * std::pow(ratio, after + 1) / (1.0 - ratio);
        case Type::p_series:
            if (!(p > 1.0)) return std::numeric_limits<double>::infinity();
            return scale * std::pow(static_cast<double>(after), 1.0 - p) / (p - 1.0);
        case Type::none: break;
    }
    return std::numeric_limits<double>::infinity();
}

double TailCertificate::tail_sum_sq(int after) const {
    switch (type) {
        case Type::geometric: {
            const double r2 = ratio * ratio;
            return scale * scale * std::pow(r2, after + 1) / (1.0 - r2);
        }
        case Type::p_series:
            return scale * scale * std::pow(static_cast<double>(after), 1.0 - 2.0 * p) /
                   (2.0 * p - 1.0);
        case Type::none: break;
    }
    return std::numeric_limits<double>::infinity();
}

UniformBoundReport uniform_bound_check(const std::function<double(int)>& q, int n_max,
                                       const TailCertificate& tail) {
    UniformBoundReport rep;
    double logsum = 0.0;
    bool certified = tail.type != TailCertificate::Type::none;
    for (int j = 1; j <= n_max; ++j) {
        const double qj = q(j);
        if (!(qj > 0.0)) throw std::invalid_argument("uniform_bound_check: q_j must be positive");
        if (certified && j >= tail.from && qj > tail.bound_at(j) * (1.0 + 1e-12))
            throw std::invalid_argument("uniform_bound_check: certificate violated by q_j");
        logsum += std::log1p(qj * qj);
        rep.partials.push_back(std::exp(0.25 * logsum));
    }
    const double tail_sq = certified ? tail.tail_sum_sq(n_max)
                                     : std::numeric_limits<double>::infinity();
    rep.convergent = certified && std::isfinite(tail_sq);
    // log(1+x) <= x turns the tail of sum q_j^2 into a bound on the remaining factor
    rep.sup_estimate = rep.convergent
                           ? rep.partials.back() * std::exp(0.25 * tail_sq)
                           : rep.partials.back();
    return rep;
}

}  // namespace fresnelio
