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

#include <cstdlib>
#include <cstring>

#include "fresnelio/kernels.hpp"

namespace fresnelio::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Backend* select() {
    const char* env = std::getenv("FRESNELIO_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_backend();
    const Backend* v = avx2_backend();
    if (env && std::strcmp(env, "avx2") == 0 && v && cpu_has_avx2()) return v;
    if (env) return &scalar_backend();
    if (v && cpu_has_avx2()) return v;
    return &scalar_backend();
}

}  // namespace

const Backend& active_backend() {
    static const Backend* chosen = select();
    return *chosen;
}

std::vector<const Backend*> available_backends() {
    std::vector<const Backend*> out{&scalar_backend()};
    if (const Backend* v = avx2_backend(); v && cpu_has_avx2()) out.push_back(v);
    return out;
}

}  // namespace fresnelio::kernels
