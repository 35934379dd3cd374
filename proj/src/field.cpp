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

#include "selectc/field.hpp"

namespace selectc {
namespace {

struct OpNames {
  Op op;
  std::string_view mnemonic;
  std::string_view pattern;
};

constexpr std::array<OpNames, 10> kOpNames = {{
    {Op::Add, "ADD", "plus"},
    {Op::Sub, "SUB", "minus"},
    {Op::Mul, "MUL", "times"},
    {Op::Div, "DIV", "divide"},
    {Op::Eq, "EQ", "equals"},
    {Op::Neq, "NEQ", "notEquals"},
    {Op::Lt, "LT", "less"},
    {Op::Le, "LE", "lessEquals"},
    {Op::Gt, "GT", "greater"},
    {Op::Ge, "GE", "greaterEquals"},
}};

}  // namespace

std::string_view op_name(Op op) { return kOpNames[static_cast<std::size_t>(op)].mnemonic; }

std::optional<Op> parse_op(std::string_view name) {
  for (const auto& n : kOpNames)
    if (n.mnemonic == name) return n.op;
  return std::nullopt;
}

std::string_view op_pattern_name(Op op) { return kOpNames[static_cast<std::size_t>(op)].pattern; }

std::optional<Op> parse_op_pattern_name(std::string_view name) {
  for (const auto& n : kOpNames)
    if (n.pattern == name) return n.op;
  return std::nullopt;
}

Value field_add(Value a, Value b) {
  std::uint64_t s = a.rep() + b.rep();
  if (s >= kPrime) s -= kPrime;
  return Value::from_rep(s);
}

Value field_sub(Value a, Value b) {
  return Value::from_rep(a.rep() >= b.rep() ? a.rep() - b.rep() : a.rep() + kPrime - b.rep());
}

Value field_mul(Value a, Value b) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a.rep()) * b.rep();
  std::uint64_t r = static_cast<std::uint64_t>(prod & kPrime) + static_cast<std::uint64_t>(prod >> 61);
  if (r >= kPrime) r -= kPrime;
  return Value::from_rep(r);
}

Value field_div(Value a, Value b) {
  if (b.rep() == 0) return Value{};
  // Both readings lie in (-p/2, p/2), so the quotient cannot overflow.
  return Value::from_signed(a.to_signed() / b.to_signed());
}

Value apply(Op op, Value a, Value b) {
  const auto bit = [](bool x) { return Value::from_rep(x ? 1 : 0); };
  switch (op) {
    case Op::Add: return field_add(a, b);
    case Op::Sub: return field_sub(a, b);
    case Op::Mul: return field_mul(a, b);
    case Op::Div: return field_div(a, b);
    case Op::Eq: return bit(a == b);
    case Op::Neq: return bit(a != b);
    case Op::Lt: return bit(a.to_signed() < b.to_signed());
    case Op::Le: return bit(a.to_signed() <= b.to_signed());
    case Op::Gt: return bit(a.to_signed() > b.to_signed());
    case Op::Ge: return bit(a.to_signed() >= b.to_signed());
  }
  return Value{};
}

std::string to_string(Value v) { return std::to_string(v.to_signed()); }

}  // namespace selectc
