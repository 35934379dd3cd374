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

#include <string>
#include <string_view>

#include "selectc/ir.hpp"

namespace selectc {

/// Line format:
///
///   prime 2305843009213693951
///   input x
///   const c0 = -9999
///   t0 := NEQ y c0
///   t3 := COMBINE (s0,t1) (s1,t2)
///
/// Output is byte-stable: golden files compare it verbatim.
std::string format_program(const Program& p);
std::string format_statement(const Statement& s);

/// Statements only, joined by "; ". Used as a compact candidate key.
std::string format_statements_inline(const Program& p);

/// Constant values, then the inline statements:
/// `c0=0 c1=-9999 | t0 := NEQ y c0; ...`. Two normalized programs are equal
/// exactly when these strings are (inputs aside).
std::string format_canonical(const Program& p);

/// Parses and validates. Throws ParseError with line/column.
Program parse_program(std::string_view text);

/// True if `text` looks like the lowered format (first significant line is a
/// `prime` header).
bool looks_like_program(std::string_view text);

}  // namespace selectc
