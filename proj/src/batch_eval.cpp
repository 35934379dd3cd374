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

#include "selectc/batch_eval.hpp"

#include <algorithm>
#include <unordered_map>

#include "selectc/error.hpp"

namespace selectc {

BatchEvaluator::BatchEvaluator(const Program& p) {
  std::unordered_map<VariableId, std::size_t> slot;
  std::map<SelectorId, std::size_t> selectorIndex;
  const auto define = [&](const VariableId& v) {
    const auto s = slots_++;
    slot[v] = s;
    return s;
  };
  const auto use = [&](const VariableId& v) {
    const auto it = slot.find(v);
    if (it == slot.end()) throw Error("unbound-variable", "'" + v.name + "' is not defined");
    return it->second;
  };
  for (const auto& in : p.inputs) inputSlots_.emplace_back(in, define(in));
  for (const auto& c : p.constants) constantSlots_.emplace_back(c.value, define(c.name));
  for (const auto& s : p.statements) {
    Step step;
    if (const auto* a = std::get_if<Assign>(&s)) {
      step.op = a->expr.op;
      step.in1 = use(a->expr.in1);
      step.in2 = use(a->expr.in2);
      step.target = define(a->target);
    } else {
      const auto& c = std::get<Combine>(s);
      step.combine = true;
      for (const auto& o : c.options) {
        auto [it, inserted] = selectorIndex.emplace(o.selector, selectors_.size());
        if (inserted) selectors_.push_back(o.selector);
        step.options.emplace_back(it->second, use(o.source));
      }
      step.target = define(c.target);
    }
    steps_.push_back(std::move(step));
  }
  if (p.statements.empty()) throw Error("invalid-program", "program has no statements");
  output_ = slot.at(p.output());
}

std::vector<kernels::Lane> BatchEvaluator::run(std::size_t lanes, const std::map<VariableId, Column>& inputs,
                                               const std::map<SelectorId, Column>& selectors) const {
  std::vector<Column> values(slots_, Column(lanes, 0));
  const auto fill = [&](Column& dst, const Column& src, const std::string& what) {
    if (src.size() == lanes) {
      std::transform(src.begin(), src.end(), dst.begin(), [](kernels::Lane v) { return v % kPrime; });
    } else if (src.size() == 1) {
      std::fill(dst.begin(), dst.end(), src[0] % kPrime);
    } else {
      throw Error("unbound-variable", "column for '" + what + "' has the wrong length");
    }
  };
  for (const auto& [name, s] : inputSlots_) {
    const auto it = inputs.find(name);
    if (it == inputs.end()) throw Error("unbound-variable", "no value for input '" + name.name + "'");
    fill(values[s], it->second, name.name);
  }
  for (const auto& [v, s] : constantSlots_) std::fill(values[s].begin(), values[s].end(), v.rep());

  std::vector<Column> sel(selectors_.size(), Column(lanes, 0));
  for (std::size_t i = 0; i < selectors_.size(); ++i) {
    const auto it = selectors.find(selectors_[i]);
    if (it == selectors.end()) throw Error("unbound-variable", "no value for selector " + selectors_[i].str());
    fill(sel[i], it->second, selectors_[i].str());
  }

  for (const auto& step : steps_) {
    auto& out = values[step.target];
    if (step.combine) {
      for (const auto& [si, src] : step.options) kernels::mul_accumulate(sel[si], values[src], out);
    } else {
      kernels::apply(step.op, values[step.in1], values[step.in2], out);
    }
  }
  return values[output_];
}

}  // namespace selectc
