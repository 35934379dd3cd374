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

#include "selectc/interp.hpp"

#include <unordered_map>

#include "selectc/error.hpp"

namespace selectc {

Value eval_plain(const Program& p, const Bindings& inputs, const SelectorBindings& selectors) {
  std::unordered_map<VariableId, Value> env;
  for (const auto& v : p.inputs) {
    const auto it = inputs.find(v);
    if (it == inputs.end()) throw Error("unbound-variable", "input '" + v.name + "' is not bound");
    env[v] = it->second;
  }
  for (const auto& c : p.constants) env[c.name] = c.value;

  const auto read = [&](const VariableId& v) {
    const auto it = env.find(v);
    if (it == env.end()) throw Error("unbound-variable", "variable '" + v.name + "' is not bound");
    return it->second;
  };

  for (const auto& s : p.statements) {
    if (const auto* a = std::get_if<Assign>(&s)) {
      env[a->target] = apply(a->expr.op, read(a->expr.in1), read(a->expr.in2));
    } else {
      const auto& c = std::get<Combine>(s);
      Value acc;
      for (const auto& o : c.options) {
        const auto it = selectors.find(o.selector);
        if (it == selectors.end())
          throw Error("unbound-variable", "selector '" + o.selector.str() + "' is not bound");
        acc = field_add(acc, field_mul(it->second, read(o.source)));
      }
      env[c.target] = acc;
    }
  }
  return read(p.output());
}

}  // namespace selectc
