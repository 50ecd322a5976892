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
#include "fresnelio/schrodinger.hpp"

namespace fresnelio {

double SampledField::sup_abs() const {
    return kernels::active_backend().abs_max(values.data(), values.size());
}

double SampledField::l2_norm() const {
    return std::sqrt(h() * kernels::active_backend().sum_abs2(values.data(), values.size()));
}

void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_inplace: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const cplx wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& v : a) v /= static_cast<double>(n);
}

SampledField sample(const FunctionObject& f, double R, std::size_t n, const Params& params) {
    if (f.dim() != 1) throw std::invalid_argument("sample: 1-D fields only");
    SampledField out;
    out.R = R;
    out.values.resize(n);
    const double h = 2.0 * R / static_cast<double>(n);
    vec y(1);
    for (std::size_t j = 0; j < n; ++j) {
        y[0] = -R + static_cast<double>(j) * h;
        out.values[j] = evaluate(f, y, params);
    }
    return out;
}

SampledField evolve_free_fft(const SampledField& in, double t, const Params& params) {
    const std::size_t n = in.values.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("evolve_free_fft: need a power-of-two sample count");
    const double hbar = params.hbar;
    const double dxi = M_PI * hbar / in.R;  // hbar-scaled bin spacing

    SampledField out = in;
    fft_inplace(out.values, false);

    // aliasing guard: the multiplier phase change per bin must stay below pi
    // across the occupied band (equivalently, the fastest occupied component
    // must not wrap around the periodization box)
    double peak = 0.0;
    for (const cplx& v : out.values) peak = std::max(peak, std::norm(v));
    double xi_occ = 0.0;
    const double floor_sq = 1e-18 * peak;
    for (std::size_t m = 0; m < n; ++m) {
        if (std::norm(out.values[m]) <= floor_sq) continue;
        const double signed_m =
            m <= n / 2 - 1 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        xi_occ = std::max(xi_occ, std::abs(signed_m) * dxi);
    }
    if (std::abs(t) * xi_occ * dxi / hbar > M_PI)
        throw resolution_error("evolve_free_fft: multiplier aliases; refine the grid");
    for (std::size_t m = 0; m < n; ++m) {
        const double signed_m =
            m <= n / 2 - 1 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        const double xi = signed_m * dxi;
        const double ph = -t * xi * xi / (2.0 * hbar);
        out.values[m] *= cplx{std::cos(ph), std::sin(ph)};
    }
    fft_inplace(out.values, true);
    return out;
}

AtomSum evolve_atoms(const AtomSum& atoms, double t, double hbar) {
    AtomSum out;
    out.dim = atoms.dim;
    for (const auto& term : atoms.terms) {
        GaussTerm e;
        e.weight = term.weight;
        for (const auto& ax : term.axes) {
            if (ax.z == cplx{0.0, 0.0}) {
                // pure frequency: picks up the dispersion phase only
                e.weight *= std::exp(I * t * ax.b * ax.b / (2.0 * hbar));
                e.axes.push_back(ax);
                continue;
            }
            const cplx w = 1.0 + I * t * ax.z;
            // both factors stay in the closed right half plane, so the
            // principal branches compose without a cut crossing
            e.weight *= rsqrt(ax.z) * rsqrt(1.0 / ax.z + I * t) *
                        std::exp(I * t * ax.b * ax.b / (2.0 * hbar * w));
            e.axes.push_back({ax.z / w, ax.b / w});
        }
        out.terms.push_back(std::move(e));
    }
    return out;
}

SampledField evolve_free(const FunctionObject& f, const PropagatorSpec& spec) {
    if (f.dim() != 1) throw std::invalid_argument("evolve_free: sampled path is 1-D");
    std::size_t n = 1;
    while (n < spec.grid.nodes_per_axis()) n <<= 1;
    AtomSum atoms;
    try {
        atoms = atomize(f, spec.params);
    } catch (const not_closed_form&) {
        return evolve_free_fft(sample(f, spec.grid.R, n, spec.params), spec.t, spec.params);
    }
    const AtomSum ev = evolve_atoms(atoms, spec.t, spec.params.hbar);
    SampledField out;
    out.R = spec.grid.R;
    out.values.resize(n);
    const double h = 2.0 * spec.grid.R / static_cast<double>(n);
    vec y(1);
    for (std::size_t j = 0; j < n; ++j) {
        y[0] = -spec.grid.R + static_cast<double>(j) * h;
        cplx v{0.0, 0.0};
        for (const auto& term : ev.terms) v += eval_term(term, y, spec.params.hbar);
        out.values[j] = v;
    }
    return out;
}

SampledField evolve_free_via_fft(const FunctionObject& f, const PropagatorSpec& spec) {
    std::size_t n = 1;
    while (n < spec.grid.nodes_per_axis()) n <<= 1;
    return evolve_free_fft(sample(f, spec.grid.R, n, spec.params), spec.t, spec.params);
}

double sharp_norm_formula(double t, const vec& q) {
    double s = 0.0;
    for (double qj : q) s += std::log1p(t * t * qj * qj);
    return std::exp(0.25 * s);
}

double sharp_norm_witness(double t, const vec& q, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("sharp_norm_witness: eps must be positive");
    if (t == 0.0) return 1.0;
    const double at = std::abs(t);
    double s = 0.0;
    for (double qj : q) {
        const double tq = at * qj;
        s += 0.25 * std::log1p((tq + eps) * (tq + eps)) - 0.5 * std::log1p(eps * (tq + eps));
    }
    return std::exp(s);
}

}  // namespace fresnelio
