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
#include <vector>

#include "selectc/interp.hpp"
#include "selectc/ir.hpp"
#include "selectc/kernels.hpp"

namespace selectc {

/// Evaluates one program on many lanes at once. Each lane is an independent
/// run; every input and selector column holds either one value per lane or
/// a single value broadcast to all lanes.
class BatchEvaluator {
 public:
  using Column = std::vector<kernels::Lane>;

  explicit BatchEvaluator(const Program& p);

  std::size_t slot_count() const { return slots_; }

  /// Returns the output of every lane. Missing columns throw
  /// Error("unbound-variable").
  std::vector<kernels::Lane> run(std::size_t lanes, const std::map<VariableId, Column>& inputs,
                                 const std::map<SelectorId, Column>& selectors = {}) const;

 private:
  struct Step {
    bool combine = false;
    Op op = Op::Add;
    std::size_t target = 0;
    std::size_t in1 = 0;
    std::size_t in2 = 0;
    std::vector<std::pair<std::size_t, std::size_t>> options;  // (selector column, source slot)
  };

  std::size_t slots_ = 0;
  std::vector<std::pair<VariableId, std::size_t>> inputSlots_;
  std::vector<std::pair<Value, std::size_t>> constantSlots_;
  std::vector<SelectorId> selectors_;
  std::vector<Step> steps_;
  std::size_t output_ = 0;
};

}  // namespace selectc
