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

#include <algorithm>
#include <set>
#include <unordered_map>

#include "selectc/error.hpp"
#include "selectc/surface.hpp"

namespace selectc::surface {

Expr Expr::make_literal(std::int64_t v, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Literal;
  e.literal = v;
  e.loc = loc;
  return e;
}

Expr Expr::make_name(std::string n, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Name;
  e.name = std::move(n);
  e.loc = loc;
  return e;
}

Expr Expr::make_index(std::string n, Expr idx, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Index;
  e.name = std::move(n);
  e.children.push_back(std::move(idx));
  e.loc = loc;
  return e;
}

Expr Expr::make_binary(Op op, Expr lhs, Expr rhs, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  e.loc = loc;
  return e;
}

Expr Expr::make_unary(UnaryOp op, Expr operand, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Unary;
  e.unary = op;
  e.children.push_back(std::move(operand));
  e.loc = loc;
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Literal: return a.literal == b.literal;
    case Expr::Kind::Name: return a.name == b.name;
    case Expr::Kind::Index: return a.name == b.name && a.children == b.children;
    case Expr::Kind::Binary: return a.op == b.op && a.children == b.children;
    case Expr::Kind::Unary: return a.unary == b.unary && a.children == b.children;
  }
  return false;
}

bool operator==(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.target == b.target && a.index == b.index && a.value == b.value &&
         a.body == b.body && a.elseBody == b.elseBody && a.init == b.init && a.step == b.step &&
         a.bound == b.bound;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      if (is_comparison(e.op)) return 1;
      return (e.op == Op::Add || e.op == Op::Sub) ? 2 : 3;
    case Expr::Kind::Unary: return 4;
    case Expr::Kind::Literal: return e.literal < 0 ? 4 : 5;
    default: return 5;
  }
}

std::string_view surface_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Eq: return "==";
    case Op::Neq: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
  }
  return "?";
}

std::string print_expr(const Expr& e);

std::string wrap(const Expr& e, int minPrec) {
  auto s = print_expr(e);
  return precedence(e) < minPrec ? "(" + s + ")" : s;
}

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal: return std::to_string(e.literal);
    case Expr::Kind::Name: return e.name;
    case Expr::Kind::Index: return e.name + "[" + print_expr(e.children[0]) + "]";
    case Expr::Kind::Unary:
      return std::string(e.unary == UnaryOp::Neg ? "-" : "!") + wrap(e.children[0], 5);
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      // Comparisons do not chain; arithmetic is left-associative.
      const int left = p == 1 ? 2 : p;
      return wrap(e.children[0], left) + " " + std::string(surface_symbol(e.op)) + " " +
             wrap(e.children[1], p + 1);
    }
  }
  return {};
}

std::string print_assign(const Stmt& s) {
  std::string out = s.target;
  if (s.index) out += "[" + print_expr(*s.index) + "]";
  return out + " := " + print_expr(s.value);
}

void print_block(const std::vector<Stmt>& body, int indent, std::string& out);

void print_stmt(const Stmt& s, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (s.kind) {
    case Stmt::Kind::Assign: out += pad + print_assign(s) + "\n"; break;
    case Stmt::Kind::Return: out += pad + "return " + print_expr(s.value) + "\n"; break;
    case Stmt::Kind::If:
      out += pad + "if (" + print_expr(s.value) + ") {\n";
      print_block(s.body, indent + 1, out);
      if (!s.elseBody.empty()) {
        out += pad + "} else {\n";
        print_block(s.elseBody, indent + 1, out);
      }
      out += pad + "}\n";
      break;
    case Stmt::Kind::For:
      out += pad + "for (" + print_assign(s.init.front()) + "; " + print_expr(s.value) + "; " +
             print_assign(s.step.front()) + ") bound " + std::to_string(s.bound) + " {\n";
      print_block(s.body, indent + 1, out);
      out += pad + "}\n";
      break;
  }
}

void print_block(const std::vector<Stmt>& body, int indent, std::string& out) {
  for (const auto& s : body) print_stmt(s, indent, out);
}

}  // namespace

std::string print_surface(const SurfaceProgram& p) {
  std::string out;
  for (const auto& d : p.decls) {
    switch (d.kind) {
      case Declaration::Kind::Input:
        out += "input " + d.name + (d.size ? "[" + std::to_string(d.size) + "]" : "") + "\n";
        break;
      case Declaration::Kind::Const: out += "const " + d.name + " = " + std::to_string(d.value) + "\n"; break;
      case Declaration::Kind::Array: out += "array " + d.name + "[" + std::to_string(d.size) + "]\n"; break;
    }
  }
  print_block(p.body, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Static analysis

std::string element_name(std::string_view array, std::uint32_t i) {
  return std::string(array) + "_" + std::to_string(i);
}

std::optional<std::uint32_t> ProgramInfo::array_size(std::string_view name) const {
  for (const auto& [n, size] : arrays)
    if (n == name) return size;
  return std::nullopt;
}

bool ProgramInfo::is_constant(std::string_view name) const {
  return std::any_of(constants.begin(), constants.end(), [&](const auto& c) { return c.first == name; });
}

namespace {

class Analyzer {
 public:
  explicit Analyzer(ProgramInfo& info) : info_(info) {}

  void declare(const Declaration& d) {
    if (!declared_.insert(d.name).second) fail("'" + d.name + "' declared twice");
    switch (d.kind) {
      case Declaration::Kind::Const: info_.constants.emplace_back(d.name, d.value); break;
      case Declaration::Kind::Input:
        if (d.size) {
          info_.arrays.emplace_back(d.name, d.size);
          for (std::uint32_t i = 0; i < d.size; ++i) info_.inputs.push_back(element_name(d.name, i));
        } else {
          info_.inputs.push_back(d.name);
        }
        assigned_.insert(d.name);
        break;
      case Declaration::Kind::Array:
        info_.arrays.emplace_back(d.name, d.size);
        assigned_.insert(d.name);
        break;
    }
  }

  void block(const std::vector<Stmt>& body) {
    for (const auto& s : body) stmt(s);
  }

  std::string lastAssigned;
  bool lastWasElement = false;

 private:
  [[noreturn]] static void fail(const std::string& msg) { throw Error("semantic", msg); }

  void read(const std::string& name) {
    if (info_.is_constant(name)) return;
    if (info_.array_size(name)) fail("array '" + name + "' used without an index");
    if (assigned_.insert(name).second) info_.inputs.push_back(name);
  }

  void expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal: break;
      case Expr::Kind::Name: read(e.name); break;
      case Expr::Kind::Index:
        if (!info_.array_size(e.name)) fail("'" + e.name + "' is not a declared array");
        expr(e.children[0]);
        break;
      default:
        for (const auto& c : e.children) expr(c);
    }
  }

  void assign(const Stmt& s) {
    expr(s.value);
    if (info_.is_constant(s.target)) fail("cannot assign to constant '" + s.target + "'");
    if (s.index) {
      if (!info_.array_size(s.target)) fail("'" + s.target + "' is not a declared array");
      expr(*s.index);
    } else {
      if (info_.array_size(s.target)) fail("array '" + s.target + "' assigned without an index");
      assigned_.insert(s.target);
    }
  }

  void note_last(const Stmt& s) {
    lastAssigned = s.target;
    lastWasElement = s.index.has_value();
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        assign(s);
        note_last(s);
        break;
      case Stmt::Kind::Return: expr(s.value); break;
      case Stmt::Kind::If:
        expr(s.value);
        block(s.body);
        block(s.elseBody);
        break;
      case Stmt::Kind::For:
        assign(s.init.front());
        expr(s.value);
        // Textual order decides the result variable: header first, then body.
        note_last(s.step.front());
        block(s.body);
        assign(s.step.front());
        break;
    }
  }

  ProgramInfo& info_;
  std::set<std::string> declared_;
  std::set<std::string> assigned_;
};

}  // namespace

ProgramInfo analyze(const SurfaceProgram& p) {
  ProgramInfo info;
  Analyzer a(info);
  for (const auto& d : p.decls) a.declare(d);
  for (std::size_t i = 0; i < p.body.size(); ++i) {
    if (p.body[i].kind == Stmt::Kind::Return && i + 1 != p.body.size())
      throw Error("semantic", "return must be the last statement");
  }
  const auto nested_return = [](const std::vector<Stmt>& body, auto& self) -> bool {
    for (const auto& s : body) {
      if (s.kind == Stmt::Kind::Return) return true;
      if (self(s.body, self) || self(s.elseBody, self)) return true;
    }
    return false;
  };
  for (const auto& s : p.body)
    if (nested_return(s.body, nested_return) || nested_return(s.elseBody, nested_return))
      throw Error("semantic", "return is only allowed at top level");

  a.block(p.body);
  if (!p.body.empty() && p.body.back().kind == Stmt::Kind::Return) {
    info.hasReturn = true;
  } else {
    if (a.lastAssigned.empty()) throw Error("semantic", "program has no result (no assignment or return)");
    if (a.lastWasElement)
      throw Error("semantic", "program ends with an array element assignment; add a return statement");
    info.output = a.lastAssigned;
  }
  return info;
}

// ---------------------------------------------------------------------------
// Reference interpreter

namespace {

struct ReturnSignal {
  Value value;
};

class TreeInterpreter {
 public:
  TreeInterpreter(const ProgramInfo& info, const Bindings& inputs) : info_(info) {
    for (const auto& name : info.inputs) {
      const auto it = inputs.find(VariableId{name});
      if (it == inputs.end()) throw Error("unbound-variable", "input '" + name + "' is not bound");
      env_[name] = it->second;
    }
    for (const auto& [name, v] : info.constants) env_[name] = Value::from_signed(v);
  }

  Value run(const std::vector<Stmt>& body) {
    try {
      block(body);
    } catch (const ReturnSignal& r) {
      return r.value;
    }
    return lookup(info_.output);
  }

 private:
  Value lookup(const std::string& name) const {
    const auto it = env_.find(name);
    return it == env_.end() ? Value{} : it->second;
  }

  std::optional<std::string> element(const std::string& array, Value idx) const {
    const auto size = *info_.array_size(array);
    const auto i = idx.to_signed();
    if (i < 0 || i >= static_cast<std::int64_t>(size)) return std::nullopt;
    return element_name(array, static_cast<std::uint32_t>(i));
  }

  Value eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Literal: return Value::from_signed(e.literal);
      case Expr::Kind::Name: return lookup(e.name);
      case Expr::Kind::Index: {
        const auto el = element(e.name, eval(e.children[0]));
        return el ? lookup(*el) : Value{};
      }
      case Expr::Kind::Binary: return apply(e.op, eval(e.children[0]), eval(e.children[1]));
      case Expr::Kind::Unary: {
        const auto v = eval(e.children[0]);
        if (e.unary == UnaryOp::Neg) return field_sub(Value{}, v);
        return Value::from_rep(v.rep() == 0 ? 1 : 0);
      }
    }
    return Value{};
  }

  void assign(const Stmt& s) {
    const auto v = eval(s.value);
    if (s.index) {
      if (const auto el = element(s.target, eval(*s.index))) env_[*el] = v;
    } else {
      env_[s.target] = v;
    }
  }

  void block(const std::vector<Stmt>& body) {
    for (const auto& s : body) stmt(s);
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Assign: assign(s); break;
      case Stmt::Kind::Return: throw ReturnSignal{eval(s.value)};
      case Stmt::Kind::If:
        if (eval(s.value).rep() != 0)
          block(s.body);
        else
          block(s.elseBody);
        break;
      case Stmt::Kind::For:
        assign(s.init.front());
        for (std::uint32_t i = 0; i < s.bound && eval(s.value).rep() != 0; ++i) {
          block(s.body);
          assign(s.step.front());
        }
        break;
    }
  }

  const ProgramInfo& info_;
  std::unordered_map<std::string, Value> env_;
};

}  // namespace

Value eval_surface(const SurfaceProgram& p, const Bindings& inputs) {
  const auto info = analyze(p);
  return TreeInterpreter(info, inputs).run(p.body);
}

}  // namespace selectc::surface
