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
#include <string>
#include <string_view>
#include <vector>

#include "selectc/ir.hpp"

namespace selectc {

/// Operand of a rule statement: `?x` binds any program variable, `#5` matches
/// a constant with that value, a bare name is a rule-local intermediate.
struct RuleOperand {
  enum class Kind : std::uint8_t { Bound, Local, Constant };
  Kind kind = Kind::Bound;
  std::string name;
  std::int64_t constant = 0;

  friend bool operator==(const RuleOperand&, const RuleOperand&) = default;
};

struct RuleStatement {
  RuleOperand target;
  Op op = Op::Add;
  RuleOperand in1;
  RuleOperand in2;

  friend bool operator==(const RuleStatement&, const RuleStatement&) = default;
};

/// A local rewrite such as
///
///   le-minus-one: J := SUB ?I #1 ; ?c := LE ?x J => ?c := LT ?x ?I
///
/// The last pattern statement is the root; its target survives. Pattern
/// locals must have no uses outside the match.
struct RewriteRule {
  std::string name;
  std::vector<RuleStatement> pattern;
  std::vector<RuleStatement> replacement;

  friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
};

RewriteRule parse_rule(std::string_view text);
std::string format_rule(const RewriteRule& r);

/// Compares pattern and replacement on `samples` random bindings.
bool verify_rule(const RewriteRule& r, std::size_t samples = 1000, std::uint64_t seed = 1);

class RewriteRuleSet {
 public:
  /// Rejects rules that fail verify_rule with Error("invalid-rule").
  void add(RewriteRule r);
  const std::vector<RewriteRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

  /// x <= I-1 becomes x < I; EQ(EQ(a,b),0) (not a==b) becomes NEQ(a,b).
  static RewriteRuleSet builtin();

 private:
  std::vector<RewriteRule> rules_;
};

/// Applies the rules until none matches. Semantics-preserving and idempotent.
Program uniformize(const Program& p, const RewriteRuleSet& rules);

}  // namespace selectc
