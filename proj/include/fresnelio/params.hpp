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

#include <stdexcept>

namespace fresnelio {

// Scalar parameters shared by every transform in the library. The
// semiclassical parameter hbar enters the Fourier normalization, the chirp
// phase and the window family; hbar in (0, 1] is the standard regime, larger
// values are accepted but flagged.
struct Params {
    double hbar = 1.0;

    Params() = default;
    explicit Params(double h) : hbar(h) {
        if (!(hbar > 0.0)) throw std::invalid_argument("Params: hbar must be positive");
    }

    bool beyond_unit_regime() const { return hbar > 1.0; }
};

}  // namespace fresnelio
