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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "selectc/field.hpp"

namespace selectc {

struct VariableId {
  std::string name;

  friend auto operator<=>(const VariableId&, const VariableId&) = default;
};

/// Selector variable `s<index>`.
struct SelectorId {
  std::uint32_t index = 0;

  std::string str() const { return "s" + std::to_string(index); }
  friend auto operator<=>(const SelectorId&, const SelectorId&) = default;
};

/// One operation over two variables; constants are always bound to variables.
struct SimpleExpression {
  Op op = Op::Add;
  VariableId in1;
  VariableId in2;

  friend bool operator==(const SimpleExpression&, const SimpleExpression&) = default;
};

struct Assign {
  VariableId target;
  SimpleExpression expr;

  friend bool operator==(const Assign&, const Assign&) = default;
};

struct CombineOption {
  SelectorId selector;
  VariableId source;

  friend bool operator==(const CombineOption&, const CombineOption&) = default;
};

/// target := sum over options of selector * source.
struct Combine {
  VariableId target;
  std::vector<CombineOption> options;

  friend bool operator==(const Combine&, const Combine&) = default;
};

using Statement = std::variant<Assign, Combine>;

const VariableId& target_of(const Statement& s);

struct Constant {
  VariableId name;
  Value value;

  friend bool operator==(const Constant&, const Constant&) = default;
};

/// Three-address program. Every statement writes a fresh variable, every
/// operand is defined before use, and the result is the target of the last
/// statement.
struct Program {
  std::vector<VariableId> inputs;
  std::vector<Constant> constants;
  std::vector<Statement> statements;

  std::size_t length() const { return statements.size(); }
  const VariableId& output() const;
  std::size_t combine_count() const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Checks the structural invariants above; throws Error("invalid-program").
void validate(const Program& p);

/// Selectors in order of appearance.
std::vector<SelectorId> selectors_of(const Program& p);

}  // namespace selectc

template <>
struct std::hash<selectc::VariableId> {
  std::size_t operator()(const selectc::VariableId& v) const noexcept {
    return std::hash<std::string>{}(v.name);
  }
};
