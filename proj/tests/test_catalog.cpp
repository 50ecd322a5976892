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

#include <random>

#include "fresnelio/catalog.hpp"

using namespace fresnelio;

namespace {

const Params P{1.0};

vec random_point(int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    vec y(d);
    for (auto& v : y) v = u(rng);
    return y;
}

}  // namespace

TEST_CASE("constant evaluates to itself") {
    const auto f = FunctionObject::constant(3, cplx{1.0, 0.0});
    CHECK(evaluate(f, {0.3, -1.0, 2.0}, P) == cplx{1.0, 0.0});
}

TEST_CASE("chirp at the origin reduces to the prefactor") {
    const auto f = FunctionObject::chirp(1, +1);
    const cplx v = evaluate(f, {0.0}, P);
    const cplx expected = std::pow(2.0 * M_PI, -0.5) * cplx{std::cos(M_PI / 4), -std::sin(M_PI / 4)};
    CHECK(std::abs(v - expected) < 1e-15);
}

TEST_CASE("measure transform at a point: single atom") {
    DiscreteMeasure mu;
    mu.dim = 1;
    mu.atoms.push_back({{2.0}, cplx{1.0, 0.0}});
    const auto f = FunctionObject::fourier_measure(mu);
    // e^{2 pi i} = 1, by direct evaluation of the atom sum
    CHECK(std::abs(evaluate(f, {M_PI}, P) - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("tensorize: extension leaves values unchanged") {
    const auto pw = FunctionObject::plane_wave({2.0});
    const auto ext = tensorize({pw, FunctionObject::constant(2, cplx{1.0, 0.0})});
    CHECK(ext.dim() == 3);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const vec y = random_point(3, rng);
        CHECK(std::abs(evaluate(ext, y, P) - evaluate(pw, {y[0]}, P)) < 1e-15);
    }
}

TEST_CASE("tensorize merges adjacent equal-sign chirps") {
    const auto t = tensorize({FunctionObject::chirp(1, +1), FunctionObject::chirp(1, +1)});
    CHECK(t.kind() == Kind::chirp);
    CHECK(t.dim() == 2);
    // opposite signs do not merge
    const auto u = tensorize({FunctionObject::chirp(1, +1), FunctionObject::chirp(1, -1)});
    CHECK(u.kind() == Kind::tensor);
}

TEST_CASE("tensorize builds the n-fold witness family") {
    std::vector<FunctionObject> fs(4, FunctionObject::complex_gaussian({cplx{0.5, 1.0}}));
    const auto f = tensorize(std::move(fs));
    CHECK(f.dim() == 4);
    std::mt19937_64 rng(17);
    const vec y = random_point(4, rng);
    cplx expected{1.0, 0.0};
    for (double v : y) expected *= std::exp(-cplx{0.5, 1.0} * (v * v) / 2.0);
    CHECK(std::abs(evaluate(f, y, P) - expected) < 1e-14);
}

TEST_CASE("tensor evaluation factorizes over random catalog pairs") {
    std::mt19937_64 rng(23);
    DiscreteMeasure mu;
    mu.dim = 1;
    mu.atoms = {{{1.0}, cplx{0.5, 0.0}}, {{-3.0}, cplx{0.0, 0.25}}};
    const std::vector<FunctionObject> pool = {
        FunctionObject::constant(1, cplx{0.7, 0.1}),
        FunctionObject::plane_wave({1.5}),
        FunctionObject::complex_gaussian({cplx{1.0, -0.3}}),
        FunctionObject::chirp(1, -1),
        FunctionObject::fourier_measure(mu),
        FunctionObject::cos_norm(1),
    };
    for (const auto& f : pool)
        for (const auto& g : pool) {
            const auto t = tensorize({f, g});
            for (int i = 0; i < 5; ++i) {
                const vec y = random_point(2, rng);
                const cplx lhs = evaluate(t, y, P);
                const cplx rhs = evaluate(f, {y[0]}, P) * evaluate(g, {y[1]}, P);
                CHECK(std::abs(lhs - rhs) < 1e-14 * (1.0 + std::abs(rhs)));
            }
        }
}

TEST_CASE("chirp value matches the canonical closed form") {
    std::mt19937_64 rng(31);
    const double hbar = 0.5;
    const Params p{hbar};
    const auto f = FunctionObject::chirp(2, +1);
    for (int i = 0; i < 10; ++i) {
        const vec y = random_point(2, rng);
        const double y2 = y[0] * y[0] + y[1] * y[1];
        const cplx expected = chirp_prefactor(2, hbar) * std::exp(I * y2 / (2.0 * hbar));
        CHECK(std::abs(evaluate(f, y, p) - expected) < 1e-14);
    }
}

TEST_CASE("measure transforms are bounded by the total variation") {
    std::mt19937_64 rng(37);
    DiscreteMeasure mu;
    mu.dim = 2;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 6; ++i)
        mu.atoms.push_back({{u(rng), u(rng)}, cplx{u(rng), u(rng)}});
    const auto f = FunctionObject::fourier_measure(mu);
    const double tv = mu.total_variation();
    for (int i = 0; i < 40; ++i) {
        const vec y = random_point(2, rng);
        CHECK(std::abs(evaluate(f, y, P)) <= tv + 1e-12);
    }
}

TEST_CASE("error paths: dimension mismatch and growing gaussians") {
    const auto f = FunctionObject::plane_wave({1.0, 2.0});
    CHECK_THROWS_AS(evaluate(f, {1.0}, P), dimension_mismatch);
    CHECK_THROWS_AS(FunctionObject::complex_gaussian({cplx{-0.1, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FunctionObject::affine_combo(
                        {{cplx{1.0, 0.0}, FunctionObject::constant(1, cplx{1.0, 0.0})},
                         {cplx{1.0, 0.0}, FunctionObject::constant(2, cplx{1.0, 0.0})}}),
                    dimension_mismatch);
}

TEST_CASE("atomize: affine and tensor structures distribute") {
    const auto f = FunctionObject::affine_combo(
        {{cplx{2.0, 0.0}, FunctionObject::plane_wave({1.0})},
         {cplx{0.0, 1.0}, FunctionObject::complex_gaussian({cplx{1.0, 0.0}})}});
    const AtomSum a = atomize(f, P);
    REQUIRE(a.terms.size() == 2);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 10; ++i) {
        const vec y = random_point(1, rng);
        cplx s{0.0, 0.0};
        for (const auto& t : a.terms) s += eval_term(t, y, P.hbar);
        CHECK(std::abs(s - evaluate(f, y, P)) < 1e-14);
    }
    CHECK_THROWS_AS(atomize(FunctionObject::cos_norm(2), P), not_closed_form);
    CHECK_THROWS_AS(
        atomize(FunctionObject::sampled(1, [](const vec& y) { return cplx{y[0], 0.0}; }), P),
        not_closed_form);
}

TEST_CASE("symbolic transform: gaussians map to gaussians, tones to point masses") {
    std::mt19937_64 rng(43);
    // self-dual unit gaussian
    const auto g = FunctionObject::complex_gaussian({cplx{1.0, 0.0}});
    const FourierImage gi = fourier_transform(g, P);
    REQUIRE(gi.masses.atoms.empty());
    const AtomSum& ga = gi.smooth;
    for (int i = 0; i < 5; ++i) {
        const vec y = random_point(1, rng);
        cplx v{0.0, 0.0};
        for (const auto& t : ga.terms) v += eval_term(t, y, P.hbar);
        CHECK(std::abs(v - evaluate(g, y, P)) < 1e-14);
    }
    // tone: point mass at hbar * p
    DiscreteMeasure mu;
    mu.dim = 1;
    mu.atoms = {{{2.0}, cplx{1.0, 0.0}}};
    const FourierImage fi = fourier_transform(FunctionObject::fourier_measure(mu), P);
    REQUIRE(fi.smooth.terms.empty());
    const MeasureSum& ms = fi.masses;
    REQUIRE(ms.atoms.size() == 1);
    CHECK(ms.atoms[0].point[0] == doctest::Approx(2.0 * P.hbar));
    // a mixed sum populates both parts
    const auto mix = FunctionObject::affine_combo(
        {{cplx{1.0, 0.0}, FunctionObject::complex_gaussian({cplx{1.0, 0.0}})},
         {cplx{0.5, 0.0}, FunctionObject::plane_wave({1.0})}});
    const FourierImage mi = fourier_transform(mix, P);
    CHECK(mi.smooth.terms.size() == 1);
    CHECK(mi.masses.atoms.size() == 1);
}

TEST_CASE("restriction pins trailing coordinates to zero") {
    std::mt19937_64 rng(47);
    const auto pw = FunctionObject::plane_wave({1.0, -2.0, 0.5});
    const auto r = restrict_tail_zero(pw, 2, P);
    for (int i = 0; i < 10; ++i) {
        vec y = random_point(3, rng);
        y[2] = 0.0;
        CHECK(std::abs(evaluate(r, {y[0], y[1]}, P) - evaluate(pw, y, P)) < 1e-14);
    }
    // tensor with a factor evaluated at zero
    const auto t = tensorize({FunctionObject::complex_gaussian({cplx{1.0, 0.0}}),
                              FunctionObject::plane_wave({3.0})});
    const auto rt = restrict_tail_zero(t, 1, P);
    for (int i = 0; i < 10; ++i) {
        const vec y = random_point(1, rng);
        CHECK(std::abs(evaluate(rt, y, P) - evaluate(t, {y[0], 0.0}, P)) < 1e-14);
    }
    // chirp restriction keeps the original normalization
    const auto c = FunctionObject::chirp(3, +1);
    const auto rc = restrict_tail_zero(c, 1, P);
    for (int i = 0; i < 10; ++i) {
        const vec y = random_point(1, rng);
        CHECK(std::abs(evaluate(rc, y, P) - evaluate(c, {y[0], 0.0, 0.0}, P)) < 1e-14);
    }
}

TEST_CASE("json round trip and strict schema") {
    DiscreteMeasure mu;
    mu.dim = 1;
    mu.atoms = {{{1.0}, cplx{0.5, 0.0}}, {{-3.0}, cplx{0.0, 0.25}}};
    const auto f = FunctionObject::affine_combo(
        {{cplx{1.0, 0.0}, tensorize({FunctionObject::fourier_measure(mu),
                                     FunctionObject::complex_gaussian({cplx{0.1, 1.0}})})},
         {cplx{0.0, -2.0}, FunctionObject::chirp(2, -1)}});
    const auto j = to_json(f);
    const auto g = function_from_json(j);
    std::mt19937_64 rng(53);
    for (int i = 0; i < 10; ++i) {
        const vec y = random_point(2, rng);
        CHECK(std::abs(evaluate(f, y, P) - evaluate(g, y, P)) < 1e-14);
    }
    auto bad = j;
    bad["unexpected"] = 1;
    CHECK_THROWS_AS(function_from_json(bad), std::invalid_argument);
}

TEST_CASE("hbar regime flag") {
    CHECK(!Params{1.0}.beyond_unit_regime());
    CHECK(Params{1.5}.beyond_unit_regime());
    CHECK_THROWS_AS(Params{0.0}, std::invalid_argument);
}
