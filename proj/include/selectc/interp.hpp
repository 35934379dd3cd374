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

#include <map>

#include "selectc/ir.hpp"

namespace selectc {

using Bindings = std::map<VariableId, Value>;
using SelectorBindings = std::map<SelectorId, Value>;

/// Reference interpreter. Inputs are looked up in `inputs`, constants come
/// from the program, and each Combine reads its selectors from `selectors`.
/// Throws Error("unbound-variable") when something is missing.
Value eval_plain(const Program& p, const Bindings& inputs, const SelectorBindings& selectors = {});

}  // namespace selectc
