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

#include "selectc/error.hpp"

namespace selectc {

/// Number of distinct simple expressions over `numVars` variables and
/// `numOps` operations of the given arity: numOps * numVars^arity.
inline std::uint64_t count_expressions(std::uint64_t numVars, std::uint64_t numOps, std::uint64_t arity) {
  if (numVars < 1 || numOps < 1 || arity < 1) throw Error("invalid-argument", "counts must be at least 1");
  std::uint64_t n = numOps;
  for (std::uint64_t i = 0; i < arity; ++i)
    if (__builtin_mul_overflow(n, numVars, &n)) throw Error("overflow", "expression count exceeds 64 bits");
  return n;
}

}  // namespace selectc
