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

#include <doctest.h>

#include "fresnelio/schrodinger.hpp"

using namespace fresnelio;

namespace {

const Params P{1.0};

PropagatorSpec spec(double t, double R = 16.0, std::size_t n = 4096) {
    PropagatorSpec s;
    s.t = t;
    s.params = P;
    s.grid = GridSpec{R, 2.0 * R / static_cast<double>(n), 1};
    return s;
}

}  // namespace

TEST_CASE("fft round trip and small transform against the definition") {
    std::vector<cplx> a = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0.5}, cplx{2, -1},
                           cplx{0, 0}, cplx{1, 1}, cplx{-0.5, 0}, cplx{0.25, -0.25}};
    std::vector<cplx> b = a;
    fft_inplace(b, false);
    // compare against the naive transform
    const std::size_t n = a.size();
    for (std::size_t m = 0; m < n; ++m) {
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * static_cast<double>(j * m) / static_cast<double>(n);
            s += a[j] * cplx{std::cos(ang), std::sin(ang)};
        }
        CHECK(std::abs(s - b[m]) < 1e-12);
    }
    fft_inplace(b, true);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-13);
}

TEST_CASE("plane waves pick up the dispersion phase") {
    // a bin-aligned wave number keeps the sampled tone exactly periodic
    const double k = M_PI / 2.0, t = 0.8;
    const auto f = FunctionObject::plane_wave({k});
    const SampledField u = evolve_free_via_fft(f, spec(t));
    // u(t,x) = e^{i(kx - t k^2/2)/hbar}; compare at 10 interior sample points
    for (int i = 0; i < 10; ++i) {
        const std::size_t j = u.values.size() / 4 + static_cast<std::size_t>(i) * 100;
        const double x = u.x(j);
        const cplx expected = std::exp(I * (k * x - 0.5 * t * k * k));
        CHECK(std::abs(u.values[j] - expected) < 1e-8);
    }
    // closed atom path agrees
    const SampledField uc = evolve_free(f, spec(t));
    for (std::size_t j = 0; j < u.values.size(); j += 37)
        CHECK(std::abs(u.values[j] - uc.values[j]) < 1e-8);
}

TEST_CASE("gaussian spreading: closed evolution against the multiplier path") {
    const auto f = FunctionObject::complex_gaussian({cplx{1.0, 0.0}});
    for (double t : {0.3, 1.0, 2.0}) {
        const SampledField uc = evolve_free(f, spec(t));
        const SampledField uf = evolve_free_via_fft(f, spec(t));
        double worst = 0.0;
        for (std::size_t j = 0; j < uc.values.size(); ++j)
            worst = std::max(worst, std::abs(uc.values[j] - uf.values[j]));
        CHECK(worst < 1e-6);
        // sup norm shrinks by (1+t^2)^{-1/4}
        CHECK(uc.sup_abs() == doctest::Approx(std::pow(1.0 + t * t, -0.25)).epsilon(1e-6));
    }
}

TEST_CASE("five gaussian parameters: closed vs discrete path") {
    const std::vector<cplx> zs = {cplx{1.0, 0.0}, cplx{0.5, 0.2}, cplx{2.0, -0.5},
                                  cplx{0.8, 0.8}, cplx{1.5, 0.0}};
    for (const cplx& z : zs) {
        const auto f = FunctionObject::complex_gaussian({z});
        const SampledField uc = evolve_free(f, spec(1.0));
        const SampledField uf = evolve_free_via_fft(f, spec(1.0));
        double worst = 0.0;
        for (std::size_t j = 0; j < uc.values.size(); ++j)
            worst = std::max(worst, std::abs(uc.values[j] - uf.values[j]));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("short times approach the identity") {
    const auto f = FunctionObject::complex_gaussian({cplx{1.0, 0.3}});
    const SampledField u0 = sample(f, 16.0, 4096, P);
    const SampledField ut = evolve_free_fft(u0, 1e-9, P);
    double worst = 0.0;
    for (std::size_t j = 0; j < u0.values.size(); ++j)
        worst = std::max(worst, std::abs(u0.values[j] - ut.values[j]));
    CHECK(worst < 1e-8);
}

TEST_CASE("discrete evolution is unitary") {
    const auto f = FunctionObject::complex_gaussian({cplx{0.7, 0.4}});
    const SampledField u0 = sample(f, 16.0, 4096, P);
    const SampledField ut = evolve_free_fft(u0, 1.3, P);
    CHECK(std::abs(ut.l2_norm() - u0.l2_norm()) < 1e-8);
}

TEST_CASE("aliasing guard refuses an under-resolved multiplier") {
    const auto f = FunctionObject::complex_gaussian({cplx{1.0, 0.0}});
    const SampledField u0 = sample(f, 16.0, 1 << 14, P);
    CHECK_THROWS_AS(evolve_free_fft(u0, 100.0, P), resolution_error);
}

TEST_CASE("sharp bound formula values") {
    CHECK(sharp_norm_formula(0.0, {1.0, 2.0}) == doctest::Approx(1.0));
    CHECK(sharp_norm_formula(2.0, {1.0}) == doctest::Approx(std::pow(5.0, 0.25)).epsilon(1e-14));
    CHECK(sharp_norm_formula(1.0, {1.0}) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("witness ratio approaches the sharp bound from below") {
    for (const auto& [t, q] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 1.0},
                                                                     {0.5, 0.3}}) {
        const double formula = sharp_norm_formula(t, {q});
        double prev = 0.0;
        for (int j = 0; j <= 12; ++j) {
            const double w = sharp_norm_witness(t, {q}, std::pow(2.0, -j));
            CHECK(w <= formula * (1.0 + 1e-13));
            CHECK(w >= prev - 1e-12);  // monotone along the halving schedule
            prev = w;
        }
        CHECK(std::abs(sharp_norm_witness(t, {q}, 1e-3) - formula) < 0.01 * formula);
    }
}

TEST_CASE("witness ratio is realized by an actual evolved family member") {
    // ratio ||u(t)||_inf / ||f_eps|| computed from samples and the norm module
    const double t = 1.0, q = 1.0, eps = 0.05;
    const cplx z = cplx{eps, 1.0} / t;  // the near-chirp family transported to time t
    const auto f = FunctionObject::complex_gaussian({z});
    const SampledField u = evolve_free(f, spec(t, 24.0, 1 << 13));
    const double nrm = norm_M_infty_1(f, to_window(GaussianWindow({q}, 1.0)), P).value;
    const double got = u.sup_abs() / nrm;
    CHECK(got == doctest::Approx(sharp_norm_witness(t, {q}, eps)).epsilon(1e-6));
}

TEST_CASE("the sup bound holds across the closed-form corpus") {
    const vec q{0.8};
    const Window gw = to_window(GaussianWindow(q, 1.0));
    const std::vector<FunctionObject> corpus = {
        FunctionObject::complex_gaussian({cplx{1.0, 0.0}}),
        FunctionObject::complex_gaussian({cplx{0.5, 0.6}}),
        FunctionObject::plane_wave({1.2}),
        FunctionObject::affine_combo({{cplx{1.0, 0.0}, FunctionObject::plane_wave({1.0})},
                                      {cplx{0.5, 0.0}, FunctionObject::plane_wave({-2.0})}}),
    };
    for (double t : {0.5, 1.0, 2.0})
        for (const auto& f : corpus) {
            const SampledField u = evolve_free(f, spec(t, 24.0, 1 << 13));
            const double nrm = norm_M_infty_1(f, gw, P).value;
            CHECK(u.sup_abs() <= sharp_norm_formula(t, q) * nrm * (1.0 + 1e-6));
        }
}
