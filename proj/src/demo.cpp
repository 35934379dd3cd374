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

#include "selectc/demo.hpp"

#include <algorithm>

#include "selectc/error.hpp"
#include "selectc/lower.hpp"
#include "selectc/surface.hpp"

namespace selectc {
namespace {

// Real variable first, then four of the other five names.
std::vector<VariableId> slot(const std::string& real, Rng& rng) {
  std::vector<VariableId> others;
  for (const auto* n : {"u", "v", "w", "x", "y", "z"})
    if (real != n) others.push_back(VariableId{n});
  rng.shuffle(std::span(others));
  std::vector<VariableId> out{VariableId{real}};
  out.insert(out.end(), others.begin(), others.begin() + 4);
  return out;
}

const Assign& assign_at(const Program& p, std::size_t i, Op op) {
  const auto* a = i < p.statements.size() ? std::get_if<Assign>(&p.statements[i]) : nullptr;
  if (!a || a->expr.op != op) throw Error("internal", "task lowering changed shape");
  return *a;
}

}  // namespace

Demo make_demo(std::string_view level, std::uint64_t seed) {
  Demo d;
  d.level = std::string(level);
  d.source = std::string(kTask1Source);
  d.lowered = lower(surface::parse_surface(kTask1Source));
  // t0 := NEQ y u; t1 := DIV x y; t2 := SUB c0 t0; t3 := MUL t0 t1;
  // t4 := MUL t2 v; t5 := ADD t3 t4
  const auto& cmp = assign_at(d.lowered, 0, Op::Neq);
  const auto& div = assign_at(d.lowered, 1, Op::Div);
  const auto& other = assign_at(d.lowered, 4, Op::Mul);

  if (level == "l0") {
    ObfuscationConfig cfg;
    cfg.k = 2;
    cfg.fakeVars = {"w", "z"};
    cfg.seed = seed;
    cfg.hideNames = false;
    Rng rng(seed ^ 0x4c30);
    std::map<std::size_t, StatementPlan> plans;
    plans[0] = StatementPlan{{}, slot(cmp.expr.in1.name, rng), slot(cmp.expr.in2.name, rng), {Op::Neq, Op::Lt}};
    plans[1] = StatementPlan{{}, slot(div.expr.in1.name, rng), slot(div.expr.in2.name, rng), {Op::Div, Op::Mul}};
    plans[4] = StatementPlan{{}, {other.expr.in1}, slot(other.expr.in2.name, rng), {Op::Mul}};
    d.obf = obfuscate_with_plans(d.lowered, plans, cfg);
  } else if (level == "l1") {
    d.configText = "k = 5\n"
                   "fake_vars = w, z, g, h\n"
                   "ops = NEQ, LT, MUL, DIV, ADD, SUB\n"
                   "fake_combining = 0\n"
                   "strategy = uniform\n"
                   "hide_names = false\n"
                   "seed = " +
                   std::to_string(seed) + "\n";
    d.obf = obfuscate_statement_level(d.lowered, parse_config(*d.configText));
  } else {
    throw Error("invalid-argument", "unknown demo level '" + std::string(level) + "' (expected l0 or l1)");
  }
  return d;
}

}  // namespace selectc
