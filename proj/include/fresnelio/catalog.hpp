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
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fresnelio/complex_branch.hpp"
#include "fresnelio/params.hpp"

namespace fresnelio {

using vec = std::vector<double>;

struct not_closed_form : std::runtime_error {
    explicit not_closed_form(const std::string& what) : std::runtime_error(what) {}
};

struct dimension_mismatch : std::invalid_argument {
    explicit dimension_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Finite atomic complex measure: sum_j w_j * delta_{p_j}. Its Fourier
// transform y -> sum_j w_j e^{i p_j . y} is the measure-algebra member of the
// catalog; the total variation sum |w_j| is that algebra's norm.
struct DiscreteMeasure {
    int dim = 1;
    std::vector<std::pair<vec, cplx>> atoms;  // (point, weight)

    double total_variation() const;
};

enum class Kind {
    constant,
    plane_wave,
    complex_gaussian,
    chirp,
    fourier_measure,
    cos_norm,
    tensor,
    affine_combo,
    sampled,
};

// Closed-form integrand family. Everything the library integrates, windows or
// evolves is one of these; Sampled is the escape hatch for quadrature-only
// paths and is rejected by every closed-form route.
class FunctionObject {
public:
    static FunctionObject constant(int dim, cplx c);
    // e^{i k.y / hbar} when hbar_scaled, else e^{i k.y}; optional (2*pi*hbar)^{-d/2}
    static FunctionObject plane_wave(vec k, bool hbar_scaled = true, bool unit_prefactor = false);
    // e^{-<y, diag(z) y>/(2 hbar)}, Re z_j >= 0 entrywise
    static FunctionObject complex_gaussian(std::vector<cplx> z);
    // (2*pi*i*hbar)^{-d/2} e^{+-i|y|^2/(2 hbar)}
    static FunctionObject chirp(int dim, int sign);
    static FunctionObject fourier_measure(DiscreteMeasure mu);
    static FunctionObject cos_norm(int dim);
    static FunctionObject affine_combo(std::vector<std::pair<cplx, FunctionObject>> terms);
    static FunctionObject sampled(int dim, std::function<cplx(const vec&)> f);

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }

    cplx constant_value() const { return constant_; }
    const vec& wave_vector() const { return k_; }
    bool hbar_scaled() const { return hbar_scaled_; }
    bool unit_prefactor() const { return unit_prefactor_; }
    const std::vector<cplx>& gaussian_z() const { return z_; }
    int chirp_sign() const { return sign_; }
    const DiscreteMeasure& measure() const { return mu_; }
    const std::vector<FunctionObject>& factors() const { return factors_; }
    const std::vector<std::pair<cplx, FunctionObject>>& terms() const { return terms_; }
    const std::function<cplx(const vec&)>& sampler() const { return sampled_; }

    friend FunctionObject tensorize(std::vector<FunctionObject> factors);

private:
    FunctionObject() = default;

    int dim_ = 1;
    Kind kind_ = Kind::constant;
    cplx constant_{1.0, 0.0};
    vec k_;
    bool hbar_scaled_ = true;
    bool unit_prefactor_ = false;
    std::vector<cplx> z_;
    int sign_ = +1;
    DiscreteMeasure mu_;
    std::vector<FunctionObject> factors_;
    std::vector<std::pair<cplx, FunctionObject>> terms_;
    std::function<cplx(const vec&)> sampled_;
};

// Exact pointwise value; pure, safe for concurrent callers.
cplx evaluate(const FunctionObject& f, const vec& y, const Params& params);

// Tensor product with canonicalization: nested tensors are flattened and
// adjacent chirp factors of equal sign merge into one higher-dimensional
// chirp (the prefactors compose exactly).
FunctionObject tensorize(std::vector<FunctionObject> factors);

// c * f as a one-term affine combination.
FunctionObject scaled(cplx c, FunctionObject f);

// Restriction to the first k coordinates with the trailing ones pinned to 0.
// Closed form for every catalog kind; Sampled wraps the callback.
FunctionObject restrict_tail_zero(const FunctionObject& f, int k, const Params& params);

// ---- separable Gaussian-atom decomposition -------------------------------
//
// term(y) = weight * prod_j exp( -(z_j/(2 hbar)) y_j^2 + (b_j/hbar) y_j ).
// The catalog closes under pointwise products and Fourier transforms at this
// level, which is what the closed-form STFT engine consumes.

struct GaussAxis {
    cplx z{0.0, 0.0};
    cplx b{0.0, 0.0};
};

struct GaussTerm {
    cplx weight{1.0, 0.0};
    std::vector<GaussAxis> axes;
};

struct AtomSum {
    int dim = 0;
    std::vector<GaussTerm> terms;
};

struct DeltaAtom {
    cplx weight{1.0, 0.0};
    vec point;
};

struct MeasureSum {
    int dim = 0;
    std::vector<DeltaAtom> atoms;
};

// Throws not_closed_form for Sampled and for cos_norm beyond one dimension.
AtomSum atomize(const FunctionObject& f, const Params& params);

cplx eval_term(const GaussTerm& t, const vec& y, double hbar);

// Symbolic hbar-scaled Fourier transform: Gaussian-type terms map to
// Gaussian-type terms, pure frequency terms map to point masses; a sum may
// populate both parts. Terms mixing the two per axis are rejected.
struct FourierImage {
    AtomSum smooth;     // Gaussian-type part (terms may be empty)
    MeasureSum masses;  // point-mass part (atoms may be empty)
};
FourierImage fourier_transform(const FunctionObject& f, const Params& params);

// ---- JSON schema ----------------------------------------------------------
// {"dim": n, "kind": "...", "params": {...}}; unknown fields are rejected.

nlohmann::json to_json(const FunctionObject& f);
FunctionObject function_from_json(const nlohmann::json& j);

}  // namespace fresnelio
