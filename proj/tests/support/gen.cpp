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

#include "gen.hpp"

#include <string>

namespace selectc::testing {
namespace {

using surface::Declaration;
using surface::Expr;
using surface::Stmt;

class SurfaceGen {
 public:
  SurfaceGen(Rng& rng, const SurfaceGenOptions& opt) : rng_(rng), opt_(opt) {}

  surface::SurfaceProgram run() {
    surface::SurfaceProgram p;
    const auto scalars = 1 + rng_.uniform(3);
    for (std::uint64_t i = 0; i < scalars; ++i) {
      const auto n = "x" + std::to_string(i);
      p.decls.push_back({Declaration::Kind::Input, n, 0, 0});
      readable_.push_back(n);
    }
    if (rng_.bernoulli(0.5)) {
      const auto size = static_cast<std::uint32_t>(1 + rng_.uniform(opt_.maxArray));
      p.decls.push_back({Declaration::Kind::Input, "a", size, 0});
      arrays_.emplace_back("a", size);
    }
    if (rng_.bernoulli(0.3)) {
      const auto size = static_cast<std::uint32_t>(1 + rng_.uniform(opt_.maxArray));
      p.decls.push_back({Declaration::Kind::Array, "b", size, 0});
      arrays_.emplace_back("b", size);
    }
    if (rng_.bernoulli(0.3)) {
      p.decls.push_back({Declaration::Kind::Const, "k", 0, static_cast<std::int64_t>(rng_.uniform(7)) - 3});
      readable_.push_back("k");
    }
    budget_ = 1 + rng_.uniform(opt_.maxStatements - 1);
    p.body = block(0);
    // Always finish with a scalar result.
    p.body.push_back(assign("r", expr(opt_.maxExprDepth)));
    return p;
  }

 private:
  std::vector<Stmt> block(std::size_t depth) {
    std::vector<Stmt> out;
    const auto want = 1 + rng_.uniform(3);
    for (std::uint64_t i = 0; i < want && budget_ > 0; ++i) {
      --budget_;
      const auto pick = rng_.uniform(10);
      if (pick < 2 && depth < opt_.maxDepth) {
        out.push_back(if_stmt(depth));
      } else if (pick < 4 && depth < opt_.maxDepth) {
        out.push_back(for_stmt(depth));
      } else if (pick < 5 && !arrays_.empty()) {
        const auto& [name, size] = arrays_[rng_.uniform(arrays_.size())];
        Stmt s;
        s.kind = Stmt::Kind::Assign;
        s.target = name;
        s.index = index_expr(size);
        s.value = expr(opt_.maxExprDepth);
        out.push_back(std::move(s));
      } else {
        const auto target = "v" + std::to_string(rng_.uniform(3));
        out.push_back(assign(target, expr(opt_.maxExprDepth)));
        remember(target);
      }
    }
    return out;
  }

  Stmt if_stmt(std::size_t depth) {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.value = expr(opt_.maxExprDepth);
    s.body = block(depth + 1);
    if (s.body.empty()) s.body.push_back(assign("v0", expr(1)));
    remember("v0");
    if (rng_.bernoulli(0.6)) s.elseBody = block(depth + 1);
    return s;
  }

  Stmt for_stmt(std::size_t depth) {
    const auto var = "i" + std::to_string(loops_++);
    Stmt s;
    s.kind = Stmt::Kind::For;
    s.init.push_back(assign(var, Expr::make_literal(0)));
    remember(var);
    // Limit is a literal or an input, so trip counts vary with the inputs.
    Expr limit = rng_.bernoulli(0.5) ? Expr::make_literal(static_cast<std::int64_t>(rng_.uniform(6)))
                                     : Expr::make_name(readable_[rng_.uniform(readable_.size())]);
    s.value = Expr::make_binary(rng_.bernoulli(0.8) ? Op::Lt : Op::Le, Expr::make_name(var), std::move(limit));
    s.step.push_back(assign(var, Expr::make_binary(Op::Add, Expr::make_name(var), Expr::make_literal(1))));
    s.bound = static_cast<std::uint32_t>(1 + rng_.uniform(opt_.maxBound));
    s.body = block(depth + 1);
    if (s.body.empty()) s.body.push_back(assign("v1", expr(1)));
    remember("v1");
    return s;
  }

  Stmt assign(const std::string& target, Expr value) {
    Stmt s;
    s.kind = Stmt::Kind::Assign;
    s.target = target;
    s.value = std::move(value);
    return s;
  }

  void remember(const std::string& v) {
    if (std::find(readable_.begin(), readable_.end(), v) == readable_.end()) readable_.push_back(v);
  }

  Expr index_expr(std::uint32_t size) {
    if (rng_.bernoulli(0.4)) return Expr::make_literal(static_cast<std::int64_t>(rng_.uniform(size + 1)));
    return Expr::make_name(readable_[rng_.uniform(readable_.size())]);
  }

  Expr expr(std::size_t depth) {
    const auto pick = rng_.uniform(10);
    if (depth == 0 || pick < 3) {
      if (pick < 1 || readable_.empty()) return Expr::make_literal(static_cast<std::int64_t>(rng_.uniform(11)) - 5);
      if (pick < 2 && !arrays_.empty()) {
        const auto& [name, size] = arrays_[rng_.uniform(arrays_.size())];
        return Expr::make_index(name, index_expr(size));
      }
      return Expr::make_name(readable_[rng_.uniform(readable_.size())]);
    }
    if (pick < 4) return Expr::make_unary(rng_.bernoulli(0.5) ? surface::UnaryOp::Neg : surface::UnaryOp::Not,
                                          expr(depth - 1));
    const auto op = kAllOps[rng_.uniform(kAllOps.size())];
    auto lhs = expr(depth - 1);
    auto rhs = expr(depth - 1);
    return Expr::make_binary(op, std::move(lhs), std::move(rhs));
  }

  Rng& rng_;
  const SurfaceGenOptions& opt_;
  std::vector<std::string> readable_;
  std::vector<std::pair<std::string, std::uint32_t>> arrays_;
  std::uint64_t budget_ = 0;
  std::size_t loops_ = 0;
};

}  // namespace

surface::SurfaceProgram random_surface(Rng& rng, const SurfaceGenOptions& opt) { return SurfaceGen(rng, opt).run(); }

Program random_program(Rng& rng, std::size_t n, std::size_t inputs, std::size_t constants, const std::vector<Op>& ops) {
  Program p;
  std::vector<VariableId> defined;
  for (std::size_t i = 0; i < inputs; ++i) {
    p.inputs.push_back(VariableId{"x" + std::to_string(i)});
    defined.push_back(p.inputs.back());
  }
  for (std::size_t i = 0; i < constants; ++i) {
    p.constants.push_back({VariableId{"k" + std::to_string(i)}, Value::from_signed(static_cast<std::int64_t>(rng.uniform(9)) - 4)});
    defined.push_back(p.constants.back().name);
  }
  for (std::size_t i = 0; i < n; ++i) {
    VariableId t{"t" + std::to_string(i)};
    const auto op = ops[rng.uniform(ops.size())];
    p.statements.emplace_back(Assign{t, {op, defined[rng.uniform(defined.size())], defined[rng.uniform(defined.size())]}});
    defined.push_back(t);
  }
  return p;
}

Value random_value(Rng& rng) {
  if (rng.bernoulli(0.8)) return Value::from_signed(static_cast<std::int64_t>(rng.uniform(41)) - 20);
  return Value::from_rep(rng.uniform(kPrime));
}

Bindings random_inputs(Rng& rng, const std::vector<VariableId>& inputs) {
  Bindings b;
  for (const auto& in : inputs) b[in] = random_value(rng);
  return b;
}

Bindings random_inputs(Rng& rng, const std::vector<std::string>& inputs) {
  Bindings b;
  for (const auto& in : inputs) b[VariableId{in}] = random_value(rng);
  return b;
}

namespace {

ExprTree tree_leaf(std::string kind, std::optional<std::int64_t> v = {}) { return ExprTree{std::move(kind), "", v, {}}; }

}  // namespace

SyntheticCorpus::SyntheticCorpus(std::uint64_t seed, std::size_t targetNodes) {
  Rng rng(seed);
  while (nodes < targetNodes) trees.push_back(node(rng, 0));
}

ExprTree SyntheticCorpus::node(Rng& rng, int depth) {
  ++nodes;
  const auto r = depth >= 3 ? rng.uniform(3) : rng.uniform(6);
  static const char* kLeafKinds[] = {"NameE", "StringLiteralE", "MethodCallE"};
  static const char* kBin[] = {"plus", "minus", "times", "lessThan", "equals"};
  static const char* kUn[] = {"assign", "posIncrement", "not"};
  if (r == 0) return tree_leaf("IntegerLiteralE", static_cast<std::int64_t>(rng.uniform(4)) - 1);
  if (r < 3) return tree_leaf(kLeafKinds[rng.uniform(3)]);
  if (r == 3) {
    const std::string op = kUn[rng.uniform(3)];
    auto c = node(rng, depth + 1);
    expected.add(Family::Operator, op);
    expected.add(Family::Structural, op + " " + c.kind);
    return ExprTree{"UnaryE", op, {}, {std::move(c)}};
  }
  const std::string op = kBin[rng.uniform(5)];
  auto l = node(rng, depth + 1);
  auto rr = node(rng, depth + 1);
  expected.add(Family::Operator, op);
  expected.add(Family::Structural, l.kind + " " + op + " " + rr.kind);
  const bool li = l.kind == "IntegerLiteralE", ri = rr.kind == "IntegerLiteralE";
  if (li && !ri) expected.add(Family::IntConst, op + " " + std::to_string(*l.value));
  if (ri && !li) expected.add(Family::IntConst, op + " " + std::to_string(*rr.value));
  return ExprTree{"BinaryE", op, {}, {std::move(l), std::move(rr)}};
}

}  // namespace selectc::testing
