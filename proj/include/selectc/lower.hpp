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

#include "selectc/ir.hpp"
#include "selectc/surface.hpp"

namespace selectc {

/// Lowers a surface program to branch-free three-address code.
///
/// * Literals become constants `c<i>`; declared constants keep their names.
/// * if/else evaluates both branches and merges every variable they touch as
///   r := c*then + (1-c)*else.
/// * Loops are unrolled to their declared bound. Iteration i is guarded by
///   active_i = active_{i-1} * cond_i, and its effects are merged with the
///   same selector arithmetic.
/// * a[idx] with a non-literal index reads sum_i EQ(idx,i)*a_i; writes merge
///   each element under EQ(idx,i).
///
/// Temporaries are named `t<i>` in emission order.
Program lower(const surface::SurfaceProgram& sp);

}  // namespace selectc
