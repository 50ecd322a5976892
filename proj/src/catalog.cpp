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
#include <numeric>

#include "fresnelio/catalog.hpp"

namespace fresnelio {

double DiscreteMeasure::total_variation() const {
    double tv = 0.0;
    for (const auto& [p, w] : atoms) tv += std::abs(w);
    return tv;
}

// ---- factories -------------------------------------------------------------

FunctionObject FunctionObject::constant(int dim, cplx c) {
    if (dim < 1) throw std::invalid_argument("constant: dim must be positive");
    FunctionObject f;
    f.dim_ = dim;
    f.kind_ = Kind::constant;
    f.constant_ = c;
    return f;
}

FunctionObject FunctionObject::plane_wave(vec k, bool hbar_scaled, bool unit_prefactor) {
    if (k.empty()) throw std::invalid_argument("plane_wave: empty wave vector");
    FunctionObject f;
    f.dim_ = static_cast<int>(k.size());
    f.kind_ = Kind::plane_wave;
    f.k_ = std::move(k);
    f.hbar_scaled_ = hbar_scaled;
    f.unit_prefactor_ = unit_prefactor;
    return f;
}

FunctionObject FunctionObject::complex_gaussian(std::vector<cplx> z) {
    if (z.empty()) throw std::invalid_argument("complex_gaussian: empty covariance");
    for (const cplx& zj : z)
        if (zj.real() < 0.0)
            throw std::invalid_argument("complex_gaussian: Re z < 0 grows unboundedly");
    FunctionObject f;
    f.dim_ = static_cast<int>(z.size());
    f.kind_ = Kind::complex_gaussian;
    f.z_ = std::move(z);
    return f;
}

FunctionObject FunctionObject::chirp(int dim, int sign) {
    if (dim < 1) throw std::invalid_argument("chirp: dim must be positive");
    if (sign != 1 && sign != -1) throw std::invalid_argument("chirp: sign must be +-1");
    FunctionObject f;
    f.dim_ = dim;
    f.kind_ = Kind::chirp;
    f.sign_ = sign;
    return f;
}

FunctionObject FunctionObject::fourier_measure(DiscreteMeasure mu) {
    if (mu.dim < 1) throw std::invalid_argument("fourier_measure: dim must be positive");
    for (const auto& [p, w] : mu.atoms)
        if (static_cast<int>(p.size()) != mu.dim)
            throw dimension_mismatch("fourier_measure: atom dimension mismatch");
    FunctionObject f;
    f.dim_ = mu.dim;
    f.kind_ = Kind::fourier_measure;
    f.mu_ = std::move(mu);
    return f;
}

FunctionObject FunctionObject::cos_norm(int dim) {
    if (dim < 1) throw std::invalid_argument("cos_norm: dim must be positive");
    FunctionObject f;
    f.dim_ = dim;
    f.kind_ = Kind::cos_norm;
    return f;
}

FunctionObject FunctionObject::affine_combo(std::vector<std::pair<cplx, FunctionObject>> terms) {
    if (terms.empty()) throw std::invalid_argument("affine_combo: empty term list");
    const int d = terms.front().second.dim();
    for (const auto& [c, g] : terms)
        if (g.dim() != d) throw dimension_mismatch("affine_combo: members must share dim");
    FunctionObject f;
    f.dim_ = d;
    f.kind_ = Kind::affine_combo;
    f.terms_ = std::move(terms);
    return f;
}

FunctionObject FunctionObject::sampled(int dim, std::function<cplx(const vec&)> fn) {
    if (dim < 1) throw std::invalid_argument("sampled: dim must be positive");
    FunctionObject f;
    f.dim_ = dim;
    f.kind_ = Kind::sampled;
    f.sampled_ = std::move(fn);
    return f;
}

FunctionObject scaled(cplx c, FunctionObject f) {
    return FunctionObject::affine_combo({{c, std::move(f)}});
}

// ---- evaluation ------------------------------------------------------------

cplx evaluate(const FunctionObject& f, const vec& y, const Params& params) {
    if (static_cast<int>(y.size()) != f.dim())
        throw dimension_mismatch("evaluate: point dimension != function dimension");
    const double hbar = params.hbar;
    switch (f.kind()) {
        case Kind::constant:
            return f.constant_value();
        case Kind::plane_wave: {
            double phase = 0.0;
            for (std::size_t j = 0; j < y.size(); ++j) phase += f.wave_vector()[j] * y[j];
            if (f.hbar_scaled()) phase /= hbar;
            cplx v{std::cos(phase), std::sin(phase)};
            if (f.unit_prefactor()) v *= std::pow(2.0 * M_PI * hbar, -0.5 * f.dim());
            return v;
        }
        case Kind::complex_gaussian: {
            cplx e{0.0, 0.0};
            for (std::size_t j = 0; j < y.size(); ++j) e -= f.gaussian_z()[j] * (y[j] * y[j]);
            return std::exp(e / (2.0 * hbar));
        }
        case Kind::chirp: {
            double y2 = 0.0;
            for (double v : y) y2 += v * v;
            return chirp_prefactor(f.dim(), hbar) *
                   std::exp(I * (f.chirp_sign() * y2 / (2.0 * hbar)));
        }
        case Kind::fourier_measure: {
            cplx s{0.0, 0.0};
            for (const auto& [p, w] : f.measure().atoms) {
                double phase = 0.0;
                for (std::size_t j = 0; j < y.size(); ++j) phase += p[j] * y[j];
                s += w * cplx{std::cos(phase), std::sin(phase)};
            }
            return s;
        }
        case Kind::cos_norm: {
            double y2 = 0.0;
            for (double v : y) y2 += v * v;
            return {std::cos(std::sqrt(y2)), 0.0};
        }
        case Kind::tensor: {
            cplx prod{1.0, 0.0};
            std::size_t off = 0;
            for (const auto& g : f.factors()) {
                vec slice(y.begin() + off, y.begin() + off + g.dim());
                prod *= evaluate(g, slice, params);
                off += g.dim();
            }
            return prod;
        }
        case Kind::affine_combo: {
            cplx s{0.0, 0.0};
            for (const auto& [c, g] : f.terms()) s += c * evaluate(g, y, params);
            return s;
        }
        case Kind::sampled:
            return f.sampler()(y);
    }
    throw std::logic_error("evaluate: unreachable");
}

// ---- tensorize -------------------------------------------------------------

FunctionObject tensorize(std::vector<FunctionObject> factors) {
    if (factors.empty()) throw std::invalid_argument("tensorize: empty factor list");
    // flatten nested tensors
    std::vector<FunctionObject> flat;
    for (auto& g : factors) {
        if (g.kind() == Kind::tensor)
            for (const auto& sub : g.factors()) flat.push_back(sub);
        else
            flat.push_back(std::move(g));
    }
    // merge adjacent chirps of equal sign; e^{i|x|^2/(2 hbar)} factorizes and
    // the (2 pi i hbar)^{-d/2} prefactors compose
    std::vector<FunctionObject> merged;
    for (auto& g : flat) {
        if (!merged.empty() && merged.back().kind() == Kind::chirp && g.kind() == Kind::chirp &&
            merged.back().chirp_sign() == g.chirp_sign()) {
            merged.back() = FunctionObject::chirp(merged.back().dim() + g.dim(), g.chirp_sign());
        } else {
            merged.push_back(std::move(g));
        }
    }
    if (merged.size() == 1) return merged.front();
    FunctionObject f;
    f.kind_ = Kind::tensor;
    f.dim_ = 0;
    for (const auto& g : merged) f.dim_ += g.dim();
    f.factors_ = std::move(merged);
    return f;
}

// ---- restriction -----------------------------------------------------------

FunctionObject restrict_tail_zero(const FunctionObject& f, int k, const Params& params) {
    if (k >= f.dim()) return f;
    if (k < 1) throw std::invalid_argument("restrict_tail_zero: target dim must be >= 1");
    const double hbar = params.hbar;
    switch (f.kind()) {
        case Kind::constant:
            return FunctionObject::constant(k, f.constant_value());
        case Kind::plane_wave: {
            vec kk(f.wave_vector().begin(), f.wave_vector().begin() + k);
            FunctionObject pw = FunctionObject::plane_wave(kk, f.hbar_scaled(), false);
            if (!f.unit_prefactor()) return pw;
            return scaled(std::pow(2.0 * M_PI * hbar, -0.5 * f.dim()), pw);
        }
        case Kind::complex_gaussian:
            return FunctionObject::complex_gaussian(
                std::vector<cplx>(f.gaussian_z().begin(), f.gaussian_z().begin() + k));
        case Kind::chirp:
            return scaled(chirp_prefactor(f.dim() - k, hbar),
                          FunctionObject::chirp(k, f.chirp_sign()));
        case Kind::fourier_measure: {
            DiscreteMeasure mu;
            mu.dim = k;
            for (const auto& [p, w] : f.measure().atoms) {
                vec pk(p.begin(), p.begin() + k);
                bool mergedAtom = false;
                for (auto& [q, u] : mu.atoms)
                    if (q == pk) {
                        u += w;
                        mergedAtom = true;
                        break;
                    }
                if (!mergedAtom) mu.atoms.push_back({pk, w});
            }
            return FunctionObject::fourier_measure(std::move(mu));
        }
        case Kind::cos_norm:
            return FunctionObject::cos_norm(k);
        case Kind::tensor: {
            std::vector<FunctionObject> kept;
            cplx tail_value{1.0, 0.0};
            int off = 0;
            for (const auto& g : f.factors()) {
                if (off >= k) {
                    tail_value *= evaluate(g, vec(g.dim(), 0.0), params);
                } else if (off + g.dim() <= k) {
                    kept.push_back(g);
                } else {
                    kept.push_back(restrict_tail_zero(g, k - off, params));
                }
                off += g.dim();
            }
            FunctionObject body = kept.size() == 1 ? kept.front() : tensorize(std::move(kept));
            if (tail_value == cplx{1.0, 0.0}) return body;
            return scaled(tail_value, std::move(body));
        }
        case Kind::affine_combo: {
            std::vector<std::pair<cplx, FunctionObject>> terms;
            for (const auto& [c, g] : f.terms())
                terms.emplace_back(c, restrict_tail_zero(g, k, params));
            return FunctionObject::affine_combo(std::move(terms));
        }
        case Kind::sampled: {
            const int d = f.dim();
            auto fn = f.sampler();
            return FunctionObject::sampled(k, [fn, d, k](const vec& y) {
                vec full(d, 0.0);
                std::copy(y.begin(), y.end(), full.begin());
                return fn(full);
            });
        }
    }
    throw std::logic_error("restrict_tail_zero: unreachable");
}

// ---- atomization -----------------------------------------------------------

cplx eval_term(const GaussTerm& t, const vec& y, double hbar) {
    cplx e{0.0, 0.0};
    for (std::size_t j = 0; j < t.axes.size(); ++j)
        e += (-0.5 * t.axes[j].z * y[j] + t.axes[j].b) * y[j];
    return t.weight * std::exp(e / hbar);
}

namespace {

constexpr std::size_t kMaxTerms = 4096;

void check_terms(std::size_t n) {
    if (n > kMaxTerms) throw not_closed_form("atomize: term expansion too large");
}

}  // namespace

AtomSum atomize(const FunctionObject& f, const Params& params) {
    const double hbar = params.hbar;
    AtomSum out;
    out.dim = f.dim();
    switch (f.kind()) {
        case Kind::constant: {
            GaussTerm t;
            t.weight = f.constant_value();
            t.axes.assign(f.dim(), GaussAxis{});
            out.terms.push_back(std::move(t));
            return out;
        }
        case Kind::plane_wave: {
            GaussTerm t;
            t.weight =
                f.unit_prefactor() ? cplx{std::pow(2.0 * M_PI * hbar, -0.5 * f.dim()), 0.0}
                                   : cplx{1.0, 0.0};
            for (double kj : f.wave_vector())
                t.axes.push_back({cplx{0.0, 0.0}, I * (f.hbar_scaled() ? kj : hbar * kj)});
            out.terms.push_back(std::move(t));
            return out;
        }
        case Kind::complex_gaussian: {
            GaussTerm t;
            for (const cplx& zj : f.gaussian_z()) t.axes.push_back({zj, cplx{0.0, 0.0}});
            out.terms.push_back(std::move(t));
            return out;
        }
        case Kind::chirp: {
            GaussTerm t;
            t.weight = chirp_prefactor(f.dim(), hbar);
            t.axes.assign(f.dim(), GaussAxis{cplx{0.0, -1.0 * f.chirp_sign()}, cplx{0.0, 0.0}});
            out.terms.push_back(std::move(t));
            return out;
        }
        case Kind::fourier_measure: {
            for (const auto& [p, w] : f.measure().atoms) {
                GaussTerm t;
                t.weight = w;
                for (double pj : p) t.axes.push_back({cplx{0.0, 0.0}, I * (hbar * pj)});
                out.terms.push_back(std::move(t));
            }
            check_terms(out.terms.size());
            return out;
        }
        case Kind::cos_norm: {
            if (f.dim() != 1) throw not_closed_form("cos_norm beyond d=1 is quadrature-only");
            for (int s : {+1, -1}) {
                GaussTerm t;
                t.weight = cplx{0.5, 0.0};
                t.axes.push_back({cplx{0.0, 0.0}, I * (s * hbar)});
                out.terms.push_back(std::move(t));
            }
            return out;
        }
        case Kind::tensor: {
            std::vector<GaussTerm> acc{GaussTerm{cplx{1.0, 0.0}, {}}};
            for (const auto& g : f.factors()) {
                const AtomSum sub = atomize(g, params);
                std::vector<GaussTerm> next;
                check_terms(acc.size() * sub.terms.size());
                for (const auto& a : acc)
                    for (const auto& s : sub.terms) {
                        GaussTerm t;
                        t.weight = a.weight * s.weight;
                        t.axes = a.axes;
                        t.axes.insert(t.axes.end(), s.axes.begin(), s.axes.end());
                        next.push_back(std::move(t));
                    }
                acc = std::move(next);
            }
            out.terms = std::move(acc);
            return out;
        }
        case Kind::affine_combo: {
            for (const auto& [c, g] : f.terms()) {
                const AtomSum sub = atomize(g, params);
                for (const auto& s : sub.terms) {
                    GaussTerm t = s;
                    t.weight *= c;
                    out.terms.push_back(std::move(t));
                }
            }
            check_terms(out.terms.size());
            return out;
        }
        case Kind::sampled:
            throw not_closed_form("sampled functions have no closed-form decomposition");
    }
    throw std::logic_error("atomize: unreachable");
}

// ---- Fourier transform ------------------------------------------------------

FourierImage fourier_transform(const FunctionObject& f, const Params& params) {
    const double hbar = params.hbar;
    const AtomSum atoms = atomize(f, params);
    FourierImage out;
    out.smooth.dim = atoms.dim;
    out.masses.dim = atoms.dim;
    const double mass_scale = std::pow(2.0 * M_PI * hbar, 0.5 * atoms.dim);
    for (const auto& t : atoms.terms) {
        bool any_gauss = false, any_freq = false;
        for (const auto& ax : t.axes) (ax.z == cplx{0.0, 0.0} ? any_freq : any_gauss) = true;
        if (any_gauss && any_freq)
            throw not_closed_form("fourier_transform: term mixes gaussian and frequency axes");
        if (any_gauss) {
            GaussTerm w;
            w.weight = t.weight;
            for (const auto& ax : t.axes) {
                w.weight *= rsqrt(ax.z) * std::exp(ax.b * ax.b / (2.0 * hbar * ax.z));
                w.axes.push_back({1.0 / ax.z, -I * ax.b / ax.z});
            }
            out.smooth.terms.push_back(std::move(w));
        } else {
            DeltaAtom a;
            a.weight = t.weight * mass_scale;
            for (const auto& ax : t.axes) {
                if (ax.b.real() != 0.0)
                    throw not_closed_form("fourier_transform: complex frequency");
                a.point.push_back(ax.b.imag());
            }
            out.masses.atoms.push_back(std::move(a));
        }
    }
    return out;
}

// ---- JSON -------------------------------------------------------------------

namespace {

using nlohmann::json;

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

void expect_keys(const json& j, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* ok : keys)
            if (k == ok) known = true;
        if (!known) throw std::invalid_argument("unknown field: " + k);
    }
}

}  // namespace

nlohmann::json to_json(const FunctionObject& f) {
    json j;
    j["dim"] = f.dim();
    switch (f.kind()) {
        case Kind::constant:
            j["kind"] = "constant";
            j["params"] = {{"value", cplx_json(f.constant_value())}};
            break;
        case Kind::plane_wave:
            j["kind"] = "plane_wave";
            j["params"] = {{"k", f.wave_vector()},
                           {"hbar_scaled", f.hbar_scaled()},
                           {"unit_prefactor", f.unit_prefactor()}};
            break;
        case Kind::complex_gaussian: {
            json zs = json::array();
            for (const cplx& z : f.gaussian_z()) zs.push_back(cplx_json(z));
            j["kind"] = "complex_gaussian";
            j["params"] = {{"z", zs}};
            break;
        }
        case Kind::chirp:
            j["kind"] = "chirp";
            j["params"] = {{"sign", f.chirp_sign()}};
            break;
        case Kind::fourier_measure: {
            json atoms = json::array();
            for (const auto& [p, w] : f.measure().atoms)
                atoms.push_back({{"p", p}, {"w", cplx_json(w)}});
            j["kind"] = "fourier_measure";
            j["params"] = {{"atoms", atoms}};
            break;
        }
        case Kind::cos_norm:
            j["kind"] = "cos_norm";
            j["params"] = json::object();
            break;
        case Kind::tensor: {
            json fs = json::array();
            for (const auto& g : f.factors()) fs.push_back(to_json(g));
            j["kind"] = "tensor";
            j["params"] = {{"factors", fs}};
            break;
        }
        case Kind::affine_combo: {
            json ts = json::array();
            for (const auto& [c, g] : f.terms()) ts.push_back({{"c", cplx_json(c)}, {"f", to_json(g)}});
            j["kind"] = "affine_combo";
            j["params"] = {{"terms", ts}};
            break;
        }
        case Kind::sampled:
            throw std::invalid_argument("sampled functions are not serializable");
    }
    return j;
}

FunctionObject function_from_json(const nlohmann::json& j) {
    expect_keys(j, {"dim", "kind", "params"});
    if (!j.contains("dim") || !j.contains("kind"))
        throw std::invalid_argument("function spec needs dim and kind");
    const int dim = j["dim"].get<int>();
    const std::string kind = j["kind"].get<std::string>();
    const json params = j.value("params", json::object());
    if (kind == "constant") {
        expect_keys(params, {"value"});
        return FunctionObject::constant(dim, cplx_from(params.at("value")));
    }
    if (kind == "plane_wave") {
        expect_keys(params, {"k", "hbar_scaled", "unit_prefactor"});
        vec k = params.at("k").get<vec>();
        if (static_cast<int>(k.size()) != dim)
            throw dimension_mismatch("plane_wave: |k| != dim");
        return FunctionObject::plane_wave(std::move(k), params.value("hbar_scaled", true),
                                          params.value("unit_prefactor", false));
    }
    if (kind == "complex_gaussian") {
        expect_keys(params, {"z"});
        std::vector<cplx> z;
        for (const auto& zj : params.at("z")) z.push_back(cplx_from(zj));
        if (static_cast<int>(z.size()) != dim)
            throw dimension_mismatch("complex_gaussian: |z| != dim");
        return FunctionObject::complex_gaussian(std::move(z));
    }
    if (kind == "chirp") {
        expect_keys(params, {"sign"});
        return FunctionObject::chirp(dim, params.value("sign", +1));
    }
    if (kind == "fourier_measure") {
        expect_keys(params, {"atoms"});
        DiscreteMeasure mu;
        mu.dim = dim;
        for (const auto& a : params.at("atoms")) {
            expect_keys(a, {"p", "w"});
            mu.atoms.push_back({a.at("p").get<vec>(), cplx_from(a.at("w"))});
        }
        return FunctionObject::fourier_measure(std::move(mu));
    }
    if (kind == "cos_norm") {
        expect_keys(params, {});
        return FunctionObject::cos_norm(dim);
    }
    if (kind == "tensor") {
        expect_keys(params, {"factors"});
        std::vector<FunctionObject> fs;
        for (const auto& g : params.at("factors")) fs.push_back(function_from_json(g));
        FunctionObject t = tensorize(std::move(fs));
        if (t.dim() != dim) throw dimension_mismatch("tensor: factor dims do not sum to dim");
        return t;
    }
    if (kind == "affine_combo") {
        expect_keys(params, {"terms"});
        std::vector<std::pair<cplx, FunctionObject>> ts;
        for (const auto& t : params.at("terms")) {
            expect_keys(t, {"c", "f"});
            ts.emplace_back(cplx_from(t.at("c")), function_from_json(t.at("f")));
        }
        return FunctionObject::affine_combo(std::move(ts));
    }
    throw std::invalid_argument("unknown function kind: " + kind);
}

}  // namespace fresnelio
