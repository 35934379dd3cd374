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

#include "selectc/uniformize.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "selectc/error.hpp"
#include "selectc/interp.hpp"
#include "selectc/rng.hpp"

namespace selectc {
namespace {

[[noreturn]] void bad_rule(const std::string& msg) { throw Error("invalid-rule", msg); }

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

RuleOperand parse_operand(const std::string& w) {
  RuleOperand o;
  if (w.empty()) bad_rule("empty operand");
  if (w[0] == '?') {
    o.kind = RuleOperand::Kind::Bound;
    o.name = w.substr(1);
    if (o.name.empty()) bad_rule("empty bound variable");
  } else if (w[0] == '#') {
    o.kind = RuleOperand::Kind::Constant;
    const auto* b = w.data() + 1;
    const auto* e = w.data() + w.size();
    if (std::from_chars(b, e, o.constant).ptr != e) bad_rule("bad constant '" + w + "'");
  } else {
    o.kind = RuleOperand::Kind::Local;
    o.name = w;
  }
  return o;
}

std::vector<RuleStatement> parse_side(std::string_view side) {
  std::vector<RuleStatement> out;
  std::size_t start = 0;
  while (start <= side.size()) {
    auto end = side.find(';', start);
    if (end == std::string_view::npos) end = side.size();
    const auto words = split_words(side.substr(start, end - start));
    start = end + 1;
    if (words.empty()) {
      if (end == side.size()) break;
      continue;
    }
    if (words.size() != 5 || words[1] != ":=") bad_rule("expected 'target := OP a b'");
    const auto op = parse_op(words[2]);
    if (!op) bad_rule("unknown operation '" + words[2] + "'");
    RuleStatement s{parse_operand(words[0]), *op, parse_operand(words[3]), parse_operand(words[4])};
    if (s.target.kind == RuleOperand::Kind::Constant) bad_rule("constant used as a target");
    out.push_back(std::move(s));
    if (end == side.size()) break;
  }
  return out;
}

std::string format_operand(const RuleOperand& o) {
  switch (o.kind) {
    case RuleOperand::Kind::Bound: return "?" + o.name;
    case RuleOperand::Kind::Constant: return "#" + std::to_string(o.constant);
    case RuleOperand::Kind::Local: return o.name;
  }
  return {};
}

void check_rule_shape(const RewriteRule& r) {
  if (r.pattern.empty() || r.replacement.empty()) bad_rule(r.name + ": empty side");
  const auto& root = r.pattern.back().target;
  if (root.kind != RuleOperand::Kind::Bound) bad_rule(r.name + ": root target must be a ?variable");
  if (r.replacement.back().target != root) bad_rule(r.name + ": replacement must write the root target");

  std::set<std::string> locals;
  std::set<std::string> bound;
  std::set<std::string> usedLocals;
  for (std::size_t i = 0; i < r.pattern.size(); ++i) {
    const auto& s = r.pattern[i];
    for (const auto* o : {&s.in1, &s.in2}) {
      if (o->kind == RuleOperand::Kind::Local) {
        if (!locals.contains(o->name)) bad_rule(r.name + ": local '" + o->name + "' used before definition");
        if (!usedLocals.insert(o->name).second) bad_rule(r.name + ": local '" + o->name + "' used twice");
      }
      if (o->kind == RuleOperand::Kind::Bound) bound.insert(o->name);
    }
    if (i + 1 < r.pattern.size()) {
      if (s.target.kind != RuleOperand::Kind::Local) bad_rule(r.name + ": inner targets must be locals");
      if (!locals.insert(s.target.name).second) bad_rule(r.name + ": local defined twice");
    }
  }
  if (usedLocals.size() != locals.size()) bad_rule(r.name + ": unused pattern local");
  if (bound.contains(root.name)) bad_rule(r.name + ": root target also used as an operand");

  std::set<std::string> replLocals;
  for (std::size_t i = 0; i < r.replacement.size(); ++i) {
    const auto& s = r.replacement[i];
    for (const auto* o : {&s.in1, &s.in2}) {
      if (o->kind == RuleOperand::Kind::Bound && !bound.contains(o->name))
        bad_rule(r.name + ": replacement uses unbound ?" + o->name);
      if (o->kind == RuleOperand::Kind::Local && !replLocals.contains(o->name))
        bad_rule(r.name + ": replacement local '" + o->name + "' used before definition");
    }
    if (i + 1 < r.replacement.size()) {
      if (s.target.kind != RuleOperand::Kind::Local) bad_rule(r.name + ": inner targets must be locals");
      replLocals.insert(s.target.name);
    }
  }
}

/// Builds a stand-alone program from one side of a rule for verification.
Program side_program(const std::vector<RuleStatement>& side, const std::vector<std::string>& inputs,
                     const std::set<std::int64_t>& constants) {
  Program p;
  for (const auto& in : inputs) p.inputs.push_back(VariableId{"b_" + in});
  for (auto c : constants) p.constants.push_back({VariableId{"k_" + std::to_string(c < 0 ? -c : c) + (c < 0 ? "n" : "")}, Value::from_signed(c)});
  const auto var = [](const RuleOperand& o) -> VariableId {
    switch (o.kind) {
      case RuleOperand::Kind::Bound: return VariableId{"b_" + o.name};
      case RuleOperand::Kind::Local: return VariableId{"l_" + o.name};
      case RuleOperand::Kind::Constant:
        return VariableId{"k_" + std::to_string(o.constant < 0 ? -o.constant : o.constant) + (o.constant < 0 ? "n" : "")};
    }
    return {};
  };
  for (std::size_t i = 0; i < side.size(); ++i) {
    const auto& s = side[i];
    const VariableId target = i + 1 == side.size() ? VariableId{"out"} : var(s.target);
    p.statements.emplace_back(Assign{target, {s.op, var(s.in1), var(s.in2)}});
  }
  return p;
}

struct Match {
  std::map<std::string, VariableId> bound;
  std::vector<std::size_t> removed;  // indices of matched local statements
};

class Matcher {
 public:
  explicit Matcher(const Program& p) : p_(p) {
    for (std::size_t i = 0; i < p.statements.size(); ++i) {
      if (std::holds_alternative<Assign>(p.statements[i])) def_[target_of(p.statements[i])] = i;
      if (const auto* a = std::get_if<Assign>(&p.statements[i])) {
        ++uses_[a->expr.in1];
        ++uses_[a->expr.in2];
      } else {
        for (const auto& o : std::get<Combine>(p.statements[i]).options) ++uses_[o.source];
      }
    }
    ++uses_[p.output()];
    for (const auto& c : p.constants) constants_[c.name] = c.value;
  }

  std::optional<Match> match(const RewriteRule& r, std::size_t root) const {
    Match m;
    std::map<std::string, std::size_t> localDefs;
    for (std::size_t i = 0; i + 1 < r.pattern.size(); ++i) localDefs[r.pattern[i].target.name] = i;
    if (!match_stmt(r, localDefs, r.pattern.size() - 1, root, m)) return std::nullopt;
    const auto* a = std::get_if<Assign>(&p_.statements[root]);
    m.bound[r.pattern.back().target.name] = a->target;
    return m;
  }

 private:
  bool match_stmt(const RewriteRule& r, const std::map<std::string, std::size_t>& localDefs,
                  std::size_t patIdx, std::size_t stmtIdx, Match& m) const {
    const auto* a = std::get_if<Assign>(&p_.statements[stmtIdx]);
    if (!a) return false;
    const auto& ps = r.pattern[patIdx];
    if (a->expr.op != ps.op) return false;
    return match_operand(r, localDefs, ps.in1, a->expr.in1, m) &&
           match_operand(r, localDefs, ps.in2, a->expr.in2, m);
  }

  bool match_operand(const RewriteRule& r, const std::map<std::string, std::size_t>& localDefs,
                     const RuleOperand& o, const VariableId& v, Match& m) const {
    switch (o.kind) {
      case RuleOperand::Kind::Bound: {
        const auto [it, inserted] = m.bound.emplace(o.name, v);
        return inserted || it->second == v;
      }
      case RuleOperand::Kind::Constant: {
        const auto it = constants_.find(v);
        return it != constants_.end() && it->second == Value::from_signed(o.constant);
      }
      case RuleOperand::Kind::Local: {
        const auto d = def_.find(v);
        if (d == def_.end()) return false;
        const auto u = uses_.find(v);
        if (u == uses_.end() || u->second != 1) return false;
        m.removed.push_back(d->second);
        return match_stmt(r, localDefs, localDefs.at(o.name), d->second, m);
      }
    }
    return false;
  }

  const Program& p_;
  std::unordered_map<VariableId, std::size_t> def_;
  std::unordered_map<VariableId, std::size_t> uses_;
  std::unordered_map<VariableId, Value> constants_;
};

class NameSource {
 public:
  explicit NameSource(const Program& p) {
    for (const auto& v : p.inputs) used_.insert(v.name);
    for (const auto& c : p.constants) used_.insert(c.name.name);
    for (const auto& s : p.statements) used_.insert(target_of(s).name);
  }
  VariableId fresh(const std::string& prefix) {
    while (true) {
      auto n = prefix + std::to_string(counter_++);
      if (used_.insert(n).second) return VariableId{n};
    }
  }

 private:
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

Program rewrite(const Program& p, const RewriteRule& r, std::size_t root, const Match& m) {
  Program out = p;
  NameSource names(p);
  std::map<std::string, VariableId> locals;
  const auto resolve = [&](const RuleOperand& o) -> VariableId {
    switch (o.kind) {
      case RuleOperand::Kind::Bound: return m.bound.at(o.name);
      case RuleOperand::Kind::Local: return locals.at(o.name);
      case RuleOperand::Kind::Constant: {
        const auto v = Value::from_signed(o.constant);
        for (const auto& c : out.constants)
          if (c.value == v) return c.name;
        auto name = names.fresh("c");
        out.constants.push_back({name, v});
        return name;
      }
    }
    return {};
  };
  std::vector<Statement> repl;
  for (std::size_t i = 0; i < r.replacement.size(); ++i) {
    const auto& s = r.replacement[i];
    VariableId target = i + 1 == r.replacement.size() ? m.bound.at(s.target.name) : names.fresh("t");
    if (i + 1 < r.replacement.size()) locals[s.target.name] = target;
    repl.emplace_back(Assign{target, {s.op, resolve(s.in1), resolve(s.in2)}});
  }
  const std::set<std::size_t> removed(m.removed.begin(), m.removed.end());
  out.statements.clear();
  for (std::size_t i = 0; i < p.statements.size(); ++i) {
    if (removed.contains(i)) continue;
    if (i == root) {
      for (auto& s : repl) out.statements.push_back(s);
    } else {
      out.statements.push_back(p.statements[i]);
    }
  }
  return out;
}

}  // namespace

RewriteRule parse_rule(std::string_view text) {
  RewriteRule r;
  const auto colon = text.find(':');
  const auto assign = text.find(":=");
  if (colon == std::string_view::npos || colon == assign) bad_rule("rule needs a 'name:' prefix");
  const auto nameWords = split_words(text.substr(0, colon));
  if (nameWords.size() != 1) bad_rule("bad rule name");
  r.name = nameWords[0];
  const auto body = text.substr(colon + 1);
  const auto arrow = body.find("=>");
  if (arrow == std::string_view::npos) bad_rule(r.name + ": missing '=>'");
  r.pattern = parse_side(body.substr(0, arrow));
  r.replacement = parse_side(body.substr(arrow + 2));
  check_rule_shape(r);
  return r;
}

std::string format_rule(const RewriteRule& r) {
  const auto side = [](const std::vector<RuleStatement>& ss) {
    std::string out;
    for (const auto& s : ss) {
      if (!out.empty()) out += " ; ";
      out += format_operand(s.target) + " := " + std::string(op_name(s.op)) + " " + format_operand(s.in1) +
             " " + format_operand(s.in2);
    }
    return out;
  };
  return r.name + ": " + side(r.pattern) + " => " + side(r.replacement);
}

bool verify_rule(const RewriteRule& r, std::size_t samples, std::uint64_t seed) {
  std::set<std::string> boundNames;
  std::set<std::int64_t> constants;
  for (const auto* side : {&r.pattern, &r.replacement})
    for (const auto& s : *side)
      for (const auto* o : {&s.in1, &s.in2}) {
        if (o->kind == RuleOperand::Kind::Bound) boundNames.insert(o->name);
        if (o->kind == RuleOperand::Kind::Constant) constants.insert(o->constant);
      }
  const std::vector<std::string> inputs(boundNames.begin(), boundNames.end());
  const auto lhs = side_program(r.pattern, inputs, constants);
  const auto rhs = side_program(r.replacement, inputs, constants);
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    Bindings b;
    for (const auto& in : inputs) {
      // Mix small signed values (where boundary cases live) with full-range ones.
      const Value v = rng.bernoulli(0.5) ? Value::from_signed(static_cast<std::int64_t>(rng.uniform(33)) - 16)
                                         : Value::from_rep(rng.uniform(kPrime));
      b[VariableId{"b_" + in}] = v;
    }
    if (eval_plain(lhs, b) != eval_plain(rhs, b)) return false;
  }
  return true;
}

void RewriteRuleSet::add(RewriteRule r) {
  check_rule_shape(r);
  if (!verify_rule(r)) bad_rule(r.name + ": pattern and replacement disagree on sampled inputs");
  rules_.push_back(std::move(r));
}

RewriteRuleSet RewriteRuleSet::builtin() {
  RewriteRuleSet set;
  set.add(parse_rule("le-minus-one: J := SUB ?I #1 ; ?c := LE ?x J => ?c := LT ?x ?I"));
  set.add(parse_rule("not-equals: E := EQ ?a ?b ; ?n := EQ E #0 => ?n := NEQ ?a ?b"));
  return set;
}

Program uniformize(const Program& p, const RewriteRuleSet& rules) {
  Program cur = p;
  // Every rewrite removes at least one statement or replaces one root, so a
  // generous cap only guards against cyclic user rules.
  const std::size_t cap = 16 * (p.statements.size() + 1) * (rules.rules().size() + 1);
  for (std::size_t iter = 0; iter < cap; ++iter) {
    bool changed = false;
    const Matcher matcher(cur);
    for (std::size_t i = 0; i < cur.statements.size() && !changed; ++i) {
      for (const auto& r : rules.rules()) {
        if (const auto m = matcher.match(r, i)) {
          cur = rewrite(cur, r, i, *m);
          changed = true;
          break;
        }
      }
    }
    if (!changed) return cur;
  }
  throw Error("invalid-rule", "rewriting did not reach a fixed point");
}

}  // namespace selectc
