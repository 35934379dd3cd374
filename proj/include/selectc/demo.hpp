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

#include "selectc/obfuscator.hpp"

namespace selectc {

/// Division guard with an error value; the constants are declared so that
/// they become variables, as in the handouts.
inline constexpr std::string_view kTask1Source =
    "# divide unless the divisor is zero\n"
    "input x, y\n"
    "const u = 0\n"
    "const v = -9999\n"
    "if (y != u) then r := x / y else r := v\n";

/// Maximum of a three-element array.
inline constexpr std::string_view kTask2Source =
    "input a[3]\n"
    "y := 3\n"
    "m := a[0]\n"
    "for(x = 0; x < y; x = x + 1) bound 3 {\n"
    "  if (m < a[x]) { m := a[x] }\n"
    "}\n"
    "return m\n";

struct Demo {
  std::string level;
  std::string source;
  Program lowered;
  /// Config for the generator-driven level; the manual level uses plans.
  std::optional<std::string> configText;
  Obfuscated obf;
};

/// "l0": five operand slots with five candidates each and two operation
/// slots with two, 5^5 * 2^2 = 12,500 candidates. "l1": every lowered
/// statement gets five options, 5^6 = 15,625 candidates.
Demo make_demo(std::string_view level, std::uint64_t seed);

}  // namespace selectc
