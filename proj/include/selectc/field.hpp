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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace selectc {

/// Modulus of the value domain, the Mersenne prime 2^61 - 1.
inline constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
/// Largest representative that is read as non-negative.
inline constexpr std::uint64_t kHalfPrime = (kPrime - 1) / 2;

/// An element of Z_p. Representatives above (p-1)/2 denote negative numbers
/// when a signed reading is needed (comparisons, division, printing).
class Value {
 public:
  constexpr Value() = default;

  static constexpr Value from_rep(std::uint64_t rep) { return Value(rep % kPrime); }

  static constexpr Value from_signed(std::int64_t v) {
    auto r = v % static_cast<std::int64_t>(kPrime);
    if (r < 0) r += static_cast<std::int64_t>(kPrime);
    return Value(static_cast<std::uint64_t>(r));
  }

  constexpr std::uint64_t rep() const { return rep_; }

  constexpr std::int64_t to_signed() const {
    return rep_ > kHalfPrime ? static_cast<std::int64_t>(rep_) - static_cast<std::int64_t>(kPrime)
                             : static_cast<std::int64_t>(rep_);
  }

  friend constexpr auto operator<=>(Value, Value) = default;

 private:
  constexpr explicit Value(std::uint64_t rep) : rep_(rep) {}
  std::uint64_t rep_ = 0;
};

enum class Op : std::uint8_t { Add, Sub, Mul, Div, Eq, Neq, Lt, Le, Gt, Ge };

inline constexpr std::array<Op, 10> kAllOps = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Eq,
                                               Op::Neq, Op::Lt,  Op::Le,  Op::Gt,  Op::Ge};

constexpr bool is_comparison(Op op) { return op >= Op::Eq; }

/// Upper-case mnemonic used in program files ("ADD", "NEQ", ...).
std::string_view op_name(Op op);
std::optional<Op> parse_op(std::string_view name);

/// Operator label in the style of Java AST dumps ("plus", "notEquals", ...),
/// the vocabulary of pattern tables.
std::string_view op_pattern_name(Op op);
std::optional<Op> parse_op_pattern_name(std::string_view name);

Value field_add(Value a, Value b);
Value field_sub(Value a, Value b);
Value field_mul(Value a, Value b);
/// Truncated integer division of the signed readings; x / 0 is 0.
Value field_div(Value a, Value b);

/// Applies `op`. Comparisons use the signed reading and return 0 or 1.
Value apply(Op op, Value a, Value b);

std::string to_string(Value v);

}  // namespace selectc
