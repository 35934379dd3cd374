// Copyright 2026 The selectc Authors. All rights reserved.
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

#include <cstdint>
#include <span>
#include <string_view>

#include "selectc/field.hpp"

// Lane-parallel field arithmetic used by the batch evaluator. Every lane
// holds a canonical representative in [0, p). The scalar kernels are the
// reference; the AVX2 kernels must agree with them bit for bit.
namespace selectc::kernels {

using Lane = std::uint64_t;

enum class Backend : std::uint8_t { Scalar, Avx2 };

std::string_view backend_name(Backend b);

/// True when the AVX2 kernels were compiled in and the CPU supports them.
bool avx2_available();

/// Backend picked at first use: AVX2 when available, unless the environment
/// variable SELECTC_KERNEL says "scalar".
Backend active_backend();

/// Overrides the active backend; throws Error("kernel") if unavailable.
void set_backend(Backend b);

/// out[i] = a[i] op b[i]. Spans must have equal length; out may alias a or b.
void apply(Op op, std::span<const Lane> a, std::span<const Lane> b, std::span<Lane> out);
/// acc[i] += sel[i] * src[i].
void mul_accumulate(std::span<const Lane> sel, std::span<const Lane> src, std::span<Lane> acc);

void apply_with(Backend b, Op op, std::span<const Lane> a, std::span<const Lane> c, std::span<Lane> out);
void mul_accumulate_with(Backend b, std::span<const Lane> sel, std::span<const Lane> src, std::span<Lane> acc);

namespace scalar {
void apply(Op op, const Lane* a, const Lane* b, Lane* out, std::size_t n);
void mul_accumulate(const Lane* sel, const Lane* src, Lane* acc, std::size_t n);
}  // namespace scalar

namespace avx2 {
void apply(Op op, const Lane* a, const Lane* b, Lane* out, std::size_t n);
void mul_accumulate(const Lane* sel, const Lane* src, Lane* acc, std::size_t n);
}  // namespace avx2

}  // namespace selectc::kernels
