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

#include "selectc/lower.hpp"

#include <map>
#include <set>
#include <unordered_map>

#include "selectc/error.hpp"

namespace selectc {
namespace {

using surface::Expr;
using surface::Stmt;

class Lowerer {
 public:
  explicit Lowerer(const surface::SurfaceProgram& sp) : info_(surface::analyze(sp)) {
    for (const auto& name : info_.inputs) {
      reserved_.insert(name);
      out_.inputs.push_back(VariableId{name});
      env_[name] = VariableId{name};
    }
    for (const auto& [name, v] : info_.constants) {
      reserved_.insert(name);
      out_.constants.push_back({VariableId{name}, Value::from_signed(v)});
      env_[name] = VariableId{name};
    }
  }

  Program run(const surface::SurfaceProgram& sp) {
    std::optional<VariableId> returned;
    for (const auto& s : sp.body) {
      if (s.kind == Stmt::Kind::Return)
        returned = expr(s.value);
      else
        stmt(s);
    }
    const VariableId result = returned ? *returned : read(info_.output);
    if (out_.statements.empty() || target_of(out_.statements.back()) != result)
      emit(Op::Add, result, constant(0));
    return std::move(out_);
  }

 private:
  using Env = std::map<std::string, VariableId>;

  VariableId fresh(const char* prefix, std::size_t& counter) {
    while (true) {
      auto name = prefix + std::to_string(counter++);
      if (!reserved_.contains(name)) {
        reserved_.insert(name);
        return VariableId{std::move(name)};
      }
    }
  }

  VariableId constant(std::int64_t v) {
    const auto it = literals_.find(v);
    if (it != literals_.end()) return it->second;
    auto name = fresh("c", constCounter_);
    out_.constants.push_back({name, Value::from_signed(v)});
    literals_.emplace(v, name);
    return name;
  }

  VariableId emit(Op op, const VariableId& a, const VariableId& b) {
    auto target = fresh("t", tempCounter_);
    out_.statements.emplace_back(Assign{target, {op, a, b}});
    return target;
  }

  VariableId read(const std::string& name) {
    const auto it = env_.find(name);
    return it == env_.end() ? constant(0) : it->second;
  }

  /// g*a + (1-g)*b for a 0/1 guard g.
  VariableId select(const VariableId& g, const VariableId& a, const VariableId& b) {
    if (a == b) return a;
    auto it = complements_.find(g);
    if (it == complements_.end()) it = complements_.emplace(g, emit(Op::Sub, constant(1), g)).first;
    const auto taken = emit(Op::Mul, g, a);
    const auto other = emit(Op::Mul, it->second, b);
    return emit(Op::Add, taken, other);
  }

  std::optional<std::string> element(const std::string& array, std::int64_t i) const {
    const auto size = *info_.array_size(array);
    if (i < 0 || i >= static_cast<std::int64_t>(size)) return std::nullopt;
    return surface::element_name(array, static_cast<std::uint32_t>(i));
  }

  VariableId expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal: return constant(e.literal);
      case Expr::Kind::Name: return read(e.name);
      case Expr::Kind::Index: {
        const auto& idx = e.children[0];
        if (idx.kind == Expr::Kind::Literal) {
          const auto el = element(e.name, idx.literal);
          return el ? read(*el) : constant(0);
        }
        const auto idxVar = expr(idx);
        std::optional<VariableId> acc;
        const auto size = *info_.array_size(e.name);
        for (std::uint32_t i = 0; i < size; ++i) {
          const auto hit = emit(Op::Eq, idxVar, constant(i));
          const auto term = emit(Op::Mul, hit, read(surface::element_name(e.name, i)));
          acc = acc ? emit(Op::Add, *acc, term) : term;
        }
        return *acc;
      }
      case Expr::Kind::Binary: {
        const auto lhs = expr(e.children[0]);
        const auto rhs = expr(e.children[1]);
        return emit(e.op, lhs, rhs);
      }
      case Expr::Kind::Unary: {
        const auto v = expr(e.children[0]);
        if (e.unary == surface::UnaryOp::Neg) return emit(Op::Sub, constant(0), v);
        return emit(Op::Eq, v, constant(0));
      }
    }
    throw Error("lowering", "unknown expression kind");
  }

  /// 0/1 truth value of a condition.
  VariableId condition(const Expr& e) {
    const auto v = expr(e);
    const bool boolean = (e.kind == Expr::Kind::Binary && is_comparison(e.op)) ||
                         (e.kind == Expr::Kind::Unary && e.unary == surface::UnaryOp::Not);
    return boolean ? v : emit(Op::Neq, v, constant(0));
  }

  void assign(const Stmt& s) {
    const auto v = expr(s.value);
    if (!s.index) {
      env_[s.target] = v;
      return;
    }
    if (s.index->kind == Expr::Kind::Literal) {
      if (const auto el = element(s.target, s.index->literal)) env_[*el] = v;
      return;
    }
    const auto idxVar = expr(*s.index);
    const auto size = *info_.array_size(s.target);
    for (std::uint32_t i = 0; i < size; ++i) {
      const auto el = surface::element_name(s.target, i);
      const auto hit = emit(Op::Eq, idxVar, constant(i));
      env_[el] = select(hit, v, read(el));
    }
  }

  void merge(const VariableId& guard, const Env& taken, const Env& other) {
    std::set<std::string> keys;
    for (const auto& [k, _] : taken) keys.insert(k);
    for (const auto& [k, _] : other) keys.insert(k);
    Env merged;
    for (const auto& k : keys) {
      const auto a = taken.contains(k) ? taken.at(k) : constant(0);
      const auto b = other.contains(k) ? other.at(k) : constant(0);
      merged[k] = select(guard, a, b);
    }
    env_ = std::move(merged);
  }

  void block(const std::vector<Stmt>& body) {
    for (const auto& s : body) stmt(s);
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Assign: assign(s); break;
      case Stmt::Kind::Return: throw Error("lowering", "return is only allowed at top level");
      case Stmt::Kind::If: {
        const auto c = condition(s.value);
        const Env before = env_;
        block(s.body);
        const Env thenEnv = std::move(env_);
        env_ = before;
        block(s.elseBody);
        const Env elseEnv = std::move(env_);
        merge(c, thenEnv, elseEnv);
        break;
      }
      case Stmt::Kind::For: {
        assign(s.init.front());
        std::optional<VariableId> active;
        for (std::uint32_t i = 0; i < s.bound; ++i) {
          const auto c = condition(s.value);
          active = active ? emit(Op::Mul, *active, c) : c;
          const Env before = env_;
          block(s.body);
          assign(s.step.front());
          const Env after = std::move(env_);
          merge(*active, after, before);
        }
        break;
      }
    }
  }

  surface::ProgramInfo info_;
  Program out_;
  Env env_;
  std::set<std::string> reserved_;
  std::map<std::int64_t, VariableId> literals_;
  std::map<VariableId, VariableId> complements_;
  std::size_t tempCounter_ = 0;
  std::size_t constCounter_ = 0;
};

}  // namespace

Program lower(const surface::SurfaceProgram& sp) {
  Lowerer l(sp);
  auto p = l.run(sp);
  validate(p);
  return p;
}

}  // namespace selectc
