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

#include "selectc/kernels.hpp"

namespace selectc::kernels::scalar {

void apply(Op op, const Lane* a, const Lane* b, Lane* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = selectc::apply(op, Value::from_rep(a[i]), Value::from_rep(b[i])).rep();
}

void mul_accumulate(const Lane* sel, const Lane* src, Lane* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto prod = field_mul(Value::from_rep(sel[i]), Value::from_rep(src[i]));
    acc[i] = field_add(Value::from_rep(acc[i]), prod).rep();
  }
}

}  // namespace selectc::kernels::scalar
