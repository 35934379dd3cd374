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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selectc/field.hpp"
#include "selectc/interp.hpp"

namespace selectc::surface {

struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;
};

enum class UnaryOp : std::uint8_t { Neg, Not };

struct Expr {
  enum class Kind : std::uint8_t { Literal, Name, Index, Binary, Unary };

  Kind kind = Kind::Literal;
  std::int64_t literal = 0;
  std::string name;           // Name, Index
  Op op = Op::Add;            // Binary
  UnaryOp unary = UnaryOp::Neg;
  std::vector<Expr> children; // Index: [idx]; Binary: [lhs, rhs]; Unary: [operand]
  SourceLoc loc;

  static Expr make_literal(std::int64_t v, SourceLoc loc = {});
  static Expr make_name(std::string n, SourceLoc loc = {});
  static Expr make_index(std::string n, Expr idx, SourceLoc loc = {});
  static Expr make_binary(Op op, Expr lhs, Expr rhs, SourceLoc loc = {});
  static Expr make_unary(UnaryOp op, Expr operand, SourceLoc loc = {});

  /// Structural equality; source locations are ignored.
  friend bool operator==(const Expr& a, const Expr& b);
};

struct Stmt {
  enum class Kind : std::uint8_t { Assign, If, For, Return };

  Kind kind = Kind::Assign;
  // Assign: target[index] := value. If: value is the condition.
  // For: value is the loop condition. Return: value is the result.
  std::string target;
  std::optional<Expr> index;
  Expr value;
  std::vector<Stmt> body;      // then-branch or loop body
  std::vector<Stmt> elseBody;
  std::vector<Stmt> init;      // For: exactly one Assign
  std::vector<Stmt> step;      // For: exactly one Assign
  std::uint32_t bound = 0;     // For: maximum number of iterations
  SourceLoc loc;

  friend bool operator==(const Stmt& a, const Stmt& b);
};

struct Declaration {
  enum class Kind : std::uint8_t { Input, Const, Array };

  Kind kind = Kind::Input;
  std::string name;
  std::uint32_t size = 0;  // arrays only; 0 for scalars
  std::int64_t value = 0;  // Const only

  friend bool operator==(const Declaration&, const Declaration&) = default;
};

struct SurfaceProgram {
  std::vector<Declaration> decls;
  std::vector<Stmt> body;

  friend bool operator==(const SurfaceProgram&, const SurfaceProgram&) = default;
};

/// Grammar, one statement per line (`;` also separates):
///
///   input x, a[3]          const u = 0          array buf[4]
///   r := x / y             a[i] := v
///   if (c) { ... } else { ... }      if c then stmt else stmt
///   for(i = 0; i < n; i = i + 1) bound 4 { ... }
///   return expr
///
/// `#` starts a comment. Throws ParseError with line/column.
SurfaceProgram parse_surface(std::string_view text);

/// Canonical text; parse_surface(print_surface(p)) == p.
std::string print_surface(const SurfaceProgram& p);

/// Static facts shared by the interpreter and the lowering.
struct ProgramInfo {
  /// Flattened input variables in declaration / first-use order; array
  /// element i of `a` is named `a_i`.
  std::vector<std::string> inputs;
  std::vector<std::pair<std::string, std::uint32_t>> arrays;  // name, size
  std::vector<std::pair<std::string, std::int64_t>> constants;
  /// Variable whose final value is the program result (empty when the
  /// program ends in `return`).
  std::string output;
  bool hasReturn = false;

  std::optional<std::uint32_t> array_size(std::string_view name) const;
  bool is_constant(std::string_view name) const;
};

/// Throws Error("semantic") for undeclared arrays, scalar/array misuse,
/// assignments to constants, or a program without a result.
ProgramInfo analyze(const SurfaceProgram& p);

std::string element_name(std::string_view array, std::uint32_t i);

/// Reference interpreter over the tree. Loops run while the condition holds,
/// at most `bound` times. Locals start at 0; out-of-range array reads give 0
/// and out-of-range writes are ignored.
Value eval_surface(const SurfaceProgram& p, const Bindings& inputs);

}  // namespace selectc::surface
