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

#include "selectc/ir.hpp"

#include <set>
#include <unordered_set>

#include "selectc/error.hpp"

namespace selectc {

const VariableId& target_of(const Statement& s) {
  return std::visit([](const auto& st) -> const VariableId& { return st.target; }, s);
}

const VariableId& Program::output() const {
  if (statements.empty()) throw Error("invalid-program", "program has no statements");
  return target_of(statements.back());
}

std::size_t Program::combine_count() const {
  std::size_t n = 0;
  for (const auto& s : statements) n += std::holds_alternative<Combine>(s) ? 1 : 0;
  return n;
}

void validate(const Program& p) {
  const auto fail = [](const std::string& msg) { throw Error("invalid-program", msg); };
  std::unordered_set<VariableId> defined;
  const auto define = [&](const VariableId& v) {
    if (v.name.empty()) fail("empty variable name");
    if (!defined.insert(v).second) fail("variable '" + v.name + "' defined twice");
  };
  for (const auto& v : p.inputs) define(v);
  for (const auto& c : p.constants) define(c.name);

  const auto use = [&](const VariableId& v) {
    if (!defined.contains(v)) fail("variable '" + v.name + "' used before assignment");
  };
  std::set<SelectorId> selectors;
  for (const auto& s : p.statements) {
    if (const auto* a = std::get_if<Assign>(&s)) {
      use(a->expr.in1);
      use(a->expr.in2);
    } else {
      const auto& c = std::get<Combine>(s);
      if (c.options.size() < 2) fail("combine '" + c.target.name + "' has fewer than two options");
      for (const auto& o : c.options) {
        use(o.source);
        if (!selectors.insert(o.selector).second) fail("selector " + o.selector.str() + " reused");
      }
    }
    define(target_of(s));
  }
  if (p.statements.empty()) fail("program has no statements");
}

std::vector<SelectorId> selectors_of(const Program& p) {
  std::vector<SelectorId> out;
  for (const auto& s : p.statements)
    if (const auto* c = std::get_if<Combine>(&s))
      for (const auto& o : c->options) out.push_back(o.selector);
  return out;
}

}  // namespace selectc
