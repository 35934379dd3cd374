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

#include "selectc/obfuscator.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "selectc/error.hpp"
#include "selectc/uniformize.hpp"

namespace selectc {
namespace {

[[noreturn]] void bad_config(const std::string& msg) { throw Error("invalid-config", msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    auto item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto n = std::stoull(v, &used);
    if (used == v.size()) return n;
  } catch (const std::logic_error&) {
  }
  bad_config("'" + key + "' expects a non-negative integer, got '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_config("'" + key + "' expects true or false, got '" + v + "'");
}

Value nonzero_value(Rng& rng) { return Value::from_rep(1 + rng.uniform(kPrime - 1)); }

/// Prefix p such that no name in `used` looks like p<digits>.
std::string pick_prefix(const std::set<std::string>& used, const std::string& base) {
  for (std::string p = base;; p += "_") {
    const bool clash = std::any_of(used.begin(), used.end(), [&](const std::string& n) {
      return n.size() > p.size() && n.starts_with(p) &&
             std::all_of(n.begin() + static_cast<std::ptrdiff_t>(p.size()), n.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    });
    if (!clash) return p;
  }
}

// --- misleading statement generation ---

double op_weight(Op op, const ObfuscationConfig& cfg) {
  if (cfg.strategy != Strategy::PatternAware || !cfg.patternTable) return 1.0;
  const auto& counts = cfg.patternTable->counts(Family::Operator);
  std::uint64_t smallest = 0;
  for (const auto& [k, n] : counts)
    if (n > 0 && (smallest == 0 || n < smallest)) smallest = n;
  const double u = smallest == 0 ? 1.0 : static_cast<double>(smallest);
  return static_cast<double>(cfg.patternTable->count(Family::Operator, std::string(op_pattern_name(op)))) + u;
}

// Draws `count` distinct items with probability proportional to `weights`
// (successive draws without replacement).
std::vector<std::size_t> weighted_sample(std::vector<double> weights, std::size_t count, Rng& rng) {
  std::vector<std::size_t> out;
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t n = 0; n < count; ++n) {
    double x = rng.unit() * total;
    std::size_t pick = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0) continue;
      pick = i;
      if (x < weights[i]) break;
      x -= weights[i];
    }
    out.push_back(pick);
    total -= weights[pick];
    weights[pick] = 0;
  }
  return out;
}

constexpr std::size_t kEnumerationLimit = std::size_t{1} << 18;

}  // namespace

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Uniform: return "uniform";
    case Strategy::PatternAware: return "pattern-aware";
    case Strategy::OperandOnly: return "operand-only";
    case Strategy::OperationOnly: return "operation-only";
    case Strategy::CombinedTemporaries: return "combined-temporaries";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  for (auto st : {Strategy::Uniform, Strategy::PatternAware, Strategy::OperandOnly, Strategy::OperationOnly,
                  Strategy::CombinedTemporaries})
    if (strategy_name(st) == s) return st;
  return std::nullopt;
}

void check_config(const ObfuscationConfig& cfg) {
  if (cfg.k < 2) bad_config("k must be at least 2");
  if (cfg.ops.empty()) bad_config("the operation pool is empty");
  if (cfg.strategy == Strategy::CombinedTemporaries && cfg.operand_options() < 2)
    bad_config("operand_k must be at least 2");
  std::set<std::string> names;
  for (const auto& f : cfg.fakeVars) {
    if (!is_identifier(f)) bad_config("bad fake variable name '" + f + "'");
    if (!names.insert(f).second) bad_config("fake variable '" + f + "' listed twice");
  }
}

ObfuscationConfig parse_config(std::string_view text, const std::filesystem::path& baseDir) {
  ObfuscationConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineNo, 1, "expected 'key = value'");
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError(lineNo, 1, "key '" + key + "' given twice");
    if (key == "k") {
      cfg.k = parse_count(key, value);
    } else if (key == "operand_k") {
      cfg.operandK = parse_count(key, value);
    } else if (key == "fake_vars") {
      cfg.fakeVars.clear();
      if (!value.empty() && std::all_of(value.begin(), value.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const auto n = parse_count(key, value);
        for (std::uint64_t i = 0; i < n; ++i) cfg.fakeVars.push_back("f" + std::to_string(i));
      } else {
        cfg.fakeVars = split_list(value);
      }
    } else if (key == "ops") {
      cfg.ops.clear();
      for (auto name : split_list(value)) {
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
        const auto op = parse_op(name);
        if (!op) throw ParseError(lineNo, eq + 2, "unknown operation '" + name + "'");
        if (std::find(cfg.ops.begin(), cfg.ops.end(), *op) == cfg.ops.end()) cfg.ops.push_back(*op);
      }
    } else if (key == "fake_combining") {
      cfg.fakeCombining = parse_count(key, value);
    } else if (key == "strategy") {
      const auto s = parse_strategy(value);
      if (!s) throw ParseError(lineNo, eq + 2, "unknown strategy '" + value + "'");
      cfg.strategy = *s;
    } else if (key == "pattern_table") {
      const auto path = baseDir.empty() ? std::filesystem::path(value) : baseDir / value;
      std::ifstream f(path);
      if (!f) throw Error("io", "cannot read pattern table '" + path.string() + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      cfg.patternTable = parse_table(buf.str());
    } else if (key == "seed") {
      cfg.seed = parse_count(key, value);
      cfg.seedGiven = true;
    } else if (key == "uniformize") {
      cfg.uniformize = parse_bool(key, value);
    } else if (key == "hide_names") {
      cfg.hideNames = parse_bool(key, value);
    } else {
      throw ParseError(lineNo, 1, "unknown config key '" + key + "'");
    }
  }
  check_config(cfg);
  return cfg;
}

std::vector<SimpleExpression> gen_misleading_statements(const Assign& s, const std::vector<VariableId>& pool,
                                                        const ObfuscationConfig& cfg, Rng& rng) {
  return gen_misleading(s, pool, {}, cfg, rng).misleading;
}

StatementPlan gen_misleading(const Assign& s, const std::vector<VariableId>& pool,
                             const std::map<VariableId, Value>& constants, const ObfuscationConfig& cfg, Rng& rng) {
  check_config(cfg);
  const std::size_t need = cfg.k - 1;
  StatementPlan plan;

  if (cfg.strategy == Strategy::CombinedTemporaries) {
    const auto slot = [&](const VariableId& real) {
      std::vector<VariableId> others;
      for (const auto& v : pool)
        if (v != real && std::find(others.begin(), others.end(), v) == others.end()) others.push_back(v);
      const auto want = cfg.operand_options() - 1;
      if (others.size() < want)
        throw Error("pool-exhausted", "only " + std::to_string(others.size() + 1) + " variables for an operand slot of " +
                                          std::to_string(want + 1));
      rng.shuffle(std::span(others));
      std::vector<VariableId> out{real};
      out.insert(out.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(want));
      return out;
    };
    plan.in1 = slot(s.expr.in1);
    plan.in2 = slot(s.expr.in2);
    std::vector<Op> others;
    for (auto op : cfg.ops)
      if (op != s.expr.op) others.push_back(op);
    if (others.size() < need)
      throw Error("pool-exhausted", "only " + std::to_string(others.size() + 1) + " operations for " +
                                        std::to_string(cfg.k) + " options");
    rng.shuffle(std::span(others));
    plan.ops.push_back(s.expr.op);
    plan.ops.insert(plan.ops.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(need));
    return plan;
  }

  std::vector<Op> ops = cfg.ops;
  std::vector<VariableId> left = pool;
  std::vector<VariableId> right = pool;
  if (cfg.strategy == Strategy::OperandOnly) ops = {s.expr.op};
  if (cfg.strategy == Strategy::OperationOnly) {
    left = {s.expr.in1};
    right = {s.expr.in2};
  }
  // With duplicate-free lists every (op, left, right) triple is distinct.
  const auto dedup = [](auto& v) {
    std::vector<std::decay_t<decltype(v[0])>> out;
    std::set<std::decay_t<decltype(v[0])>> seen;
    for (const auto& x : v)
      if (seen.insert(x).second) out.push_back(x);
    v = std::move(out);
  };
  dedup(ops);
  dedup(left);
  dedup(right);
  // Dividing by a literal zero is a giveaway; the divisor should not be zero.
  const auto acceptable = [&](const SimpleExpression& e) {
    if (e == s.expr) return false;
    if (e.op == Op::Div) {
      const auto c = constants.find(e.in2);
      if (c != constants.end() && c->second == Value()) return false;
    }
    return true;
  };
  const std::size_t space = ops.size() * left.size() * right.size();
  if (space <= kEnumerationLimit) {
    std::vector<SimpleExpression> all;
    std::vector<double> weights;
    for (auto op : ops)
      for (const auto& a : left)
        for (const auto& b : right) {
          SimpleExpression e{op, a, b};
          if (acceptable(e)) {
            all.push_back(e);
            weights.push_back(op_weight(op, cfg));
          }
        }
    if (all.size() < need)
      throw Error("pool-exhausted", "only " + std::to_string(all.size()) + " misleading statements available, " +
                                        std::to_string(need) + " needed");
    for (auto i : weighted_sample(std::move(weights), need, rng)) plan.misleading.push_back(all[i]);
    return plan;
  }
  std::vector<double> opWeights;
  for (auto op : ops) opWeights.push_back(op_weight(op, cfg));
  for (std::size_t attempts = 0; plan.misleading.size() < need; ++attempts) {
    if (attempts > 1000 * (need + 1)) throw Error("pool-exhausted", "could not draw distinct misleading statements");
    const auto op = ops[weighted_sample(opWeights, 1, rng)[0]];
    SimpleExpression e{op, left[rng.uniform(left.size())], right[rng.uniform(right.size())]};
    if (acceptable(e) && std::find(plan.misleading.begin(), plan.misleading.end(), e) == plan.misleading.end())
      plan.misleading.push_back(e);
  }
  return plan;
}

namespace {

/// Builds obfuscated statement blocks under placeholder names, then renames
/// everything canonically.
class Builder {
 public:
  VariableId fresh() { return VariableId{"%" + std::to_string(next_++)}; }

  void combine(std::vector<Statement>& out, const VariableId& target, const std::vector<VariableId>& sources,
               std::size_t real) {
    Combine c{target, {}};
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const SelectorId s{static_cast<std::uint32_t>(bits_.size())};
      bits_.push_back(i == real);
      c.options.push_back({s, sources[i]});
    }
    out.emplace_back(std::move(c));
  }

  std::vector<Statement> whole(const Assign& s, const std::vector<SimpleExpression>& misleading, Rng& rng) {
    std::vector<SimpleExpression> options{s.expr};
    options.insert(options.end(), misleading.begin(), misleading.end());
    std::vector<std::size_t> order(options.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span(order));
    std::vector<Statement> out;
    std::vector<VariableId> sources;
    std::size_t real = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto t = fresh();
      out.emplace_back(Assign{t, options[order[i]]});
      sources.push_back(t);
      if (order[i] == 0) real = i;
    }
    combine(out, s.target, sources, real);
    return out;
  }

  std::vector<Statement> slotted(const Assign& s, const StatementPlan& plan, Rng& rng) {
    std::vector<Statement> out;
    const auto slot = [&](std::vector<VariableId> vars) {
      if (vars.size() == 1) return vars[0];  // fixed operand, nothing to choose
      std::vector<std::size_t> order(vars.size());
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(std::span(order));
      std::vector<VariableId> sources;
      std::size_t real = 0;
      for (std::size_t i = 0; i < order.size(); ++i) {
        sources.push_back(vars[order[i]]);
        if (order[i] == 0) real = i;
      }
      auto t = fresh();
      combine(out, t, sources, real);
      return t;
    };
    const auto t1 = slot(plan.in1);
    const auto t2 = slot(plan.in2);
    if (plan.ops.size() == 1) {
      out.emplace_back(Assign{s.target, {plan.ops[0], t1, t2}});
      return out;
    }
    std::vector<std::size_t> order(plan.ops.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span(order));
    std::vector<VariableId> sources;
    std::size_t real = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto r = fresh();
      out.emplace_back(Assign{r, {plan.ops[order[i]], t1, t2}});
      sources.push_back(r);
      if (order[i] == 0) real = i;
    }
    combine(out, s.target, sources, real);
    return out;
  }

  std::vector<Statement> block(const Assign& s, const StatementPlan& plan, Rng& rng) {
    return plan.slotted() ? slotted(s, plan, rng) : whole(s, plan.misleading, rng);
  }

  /// Canonical names: targets t<i> and selectors s<i> in emission order;
  /// constants c<i> in random order when `hide`.
  Obfuscated finish(std::vector<VariableId> inputs, std::vector<Constant> constants,
                    const std::vector<Statement>& statements, bool hide, Rng& rng, std::uint64_t seed) const {
    std::unordered_map<VariableId, VariableId> rename;
    std::set<std::string> taken;
    for (const auto& in : inputs) taken.insert(in.name);
    if (hide) {
      rng.shuffle(std::span(constants));
      const auto prefix = pick_prefix(taken, "c");
      for (std::size_t i = 0; i < constants.size(); ++i) {
        VariableId n{prefix + std::to_string(i)};
        rename[constants[i].name] = n;
        constants[i].name = n;
      }
    }
    for (const auto& c : constants) taken.insert(c.name.name);
    const auto tprefix = pick_prefix(taken, "t");
    const auto name = [&](const VariableId& v) {
      const auto it = rename.find(v);
      return it == rename.end() ? v : it->second;
    };

    Obfuscated out;
    out.key.seed = seed;
    out.program.inputs = std::move(inputs);
    out.program.constants = std::move(constants);
    std::size_t nextTarget = 0;
    std::uint32_t nextSel = 0;
    for (const auto& st : statements) {
      VariableId target{tprefix + std::to_string(nextTarget++)};
      if (const auto* a = std::get_if<Assign>(&st)) {
        out.program.statements.emplace_back(Assign{target, {a->expr.op, name(a->expr.in1), name(a->expr.in2)}});
        rename[a->target] = target;
      } else {
        const auto& c = std::get<Combine>(st);
        Combine nc{target, {}};
        for (const auto& o : c.options) {
          const SelectorId s{nextSel++};
          nc.options.push_back({s, name(o.source)});
          out.key.bits[s] = bits_[o.selector.index];
        }
        out.program.statements.emplace_back(std::move(nc));
        rename[c.target] = target;
      }
    }
    validate(out.program);
    return out;
  }

 private:
  std::size_t next_ = 0;
  std::vector<bool> bits_;
};

void require_plain(const Program& p) {
  validate(p);
  if (p.combine_count() != 0) throw Error("invalid-program", "input program already contains combining statements");
}

Obfuscated obfuscate_impl(Program p, const std::map<std::size_t, StatementPlan>* plans, const ObfuscationConfig& cfg) {
  check_config(cfg);
  require_plain(p);
  if (cfg.uniformize && !plans) p = uniformize(p, RewriteRuleSet::builtin());

  Rng root(cfg.seed);
  Rng planRng = root.split();
  Rng permRng = root.split();
  Rng fakeRng = root.split();
  Rng valueRng = root.split();
  Rng nameRng = root.split();

  std::set<std::string> names;
  for (const auto& v : p.inputs) names.insert(v.name);
  for (const auto& c : p.constants) names.insert(c.name.name);
  for (const auto& s : p.statements) names.insert(target_of(s).name);

  std::vector<Constant> constants = p.constants;
  for (const auto& f : cfg.fakeVars) {
    if (names.contains(f)) throw Error("invalid-config", "fake variable '" + f + "' clashes with a program variable");
    constants.push_back({VariableId{f}, nonzero_value(valueRng)});
  }
  std::map<VariableId, Value> constantValues;
  for (const auto& c : constants) constantValues[c.name] = c.value;

  std::vector<VariableId> base = p.inputs;
  for (const auto& c : constants) base.push_back(c.name);
  const auto pool_before = [&](std::size_t i) {
    auto pool = base;
    for (std::size_t j = 0; j < i; ++j) pool.push_back(target_of(p.statements[j]));
    return pool;
  };

  Builder b;
  const std::size_t n = p.statements.size();
  std::vector<std::vector<Statement>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = std::get<Assign>(p.statements[i]);
    if (plans) {
      const auto it = plans->find(i);
      if (it == plans->end()) {
        blocks[i].push_back(a);
        continue;
      }
      blocks[i] = b.block(a, it->second, permRng);
    } else {
      blocks[i] = b.block(a, gen_misleading(a, pool_before(i), constantValues, cfg, planRng), permRng);
    }
  }

  // Whole misleading chains. They write only fresh variables, so the output
  // cannot depend on them.
  std::vector<std::vector<std::vector<Statement>>> fakesBefore(n);
  for (std::size_t f = 0; f < cfg.fakeCombining; ++f) {
    const auto pos = static_cast<std::size_t>(fakeRng.uniform(n));
    const auto pool = pool_before(pos);
    const Assign decoy{b.fresh(), {cfg.ops[fakeRng.uniform(cfg.ops.size())], pool[fakeRng.uniform(pool.size())],
                                   pool[fakeRng.uniform(pool.size())]}};
    fakesBefore[pos].push_back(b.block(decoy, gen_misleading(decoy, pool, constantValues, cfg, fakeRng), fakeRng));
  }

  std::vector<Statement> all;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& fb : fakesBefore[i]) all.insert(all.end(), fb.begin(), fb.end());
    all.insert(all.end(), blocks[i].begin(), blocks[i].end());
  }
  return b.finish(p.inputs, std::move(constants), all, cfg.hideNames, nameRng, cfg.seed);
}

}  // namespace

Obfuscated obfuscate_statement_level(const Program& p, const ObfuscationConfig& cfg) {
  return obfuscate_impl(p, nullptr, cfg);
}

Obfuscated obfuscate_with_plans(const Program& p, const std::map<std::size_t, StatementPlan>& plans,
                                const ObfuscationConfig& cfg) {
  for (const auto& [i, plan] : plans) {
    if (i >= p.statements.size()) throw Error("invalid-config", "plan for statement " + std::to_string(i) + " out of range");
    const auto* a = std::get_if<Assign>(&p.statements[i]);
    if (!a) throw Error("invalid-config", "plan for a combining statement");
    if (plan.slotted()) {
      if (plan.in1.size() < 2 && plan.in2.size() < 2 && plan.ops.size() < 2)
        throw Error("invalid-config", "plan for statement " + std::to_string(i) + " offers no alternatives");
      if (plan.in1.empty() || plan.in2.empty() || plan.in1[0] != a->expr.in1 || plan.in2[0] != a->expr.in2 ||
          plan.ops[0] != a->expr.op)
        throw Error("invalid-config", "plan for statement " + std::to_string(i) + " must list the real choice first");
    } else if (plan.misleading.empty()) {
      throw Error("invalid-config", "plan for statement " + std::to_string(i) + " offers no alternatives");
    }
  }
  return obfuscate_impl(p, &plans, cfg);
}

Obfuscated obfuscate_program_level(const std::vector<Program>& ps, std::size_t iStar, std::uint64_t seed) {
  if (ps.empty()) throw Error("invalid-argument", "no programs to combine");
  if (iStar >= ps.size())
    throw Error("invalid-argument", "confidential index " + std::to_string(iStar) + " out of range");
  for (const auto& p : ps) require_plain(p);

  Rng rng(seed);
  std::vector<std::size_t> order(ps.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));
  Rng nameRng = rng.split();

  std::vector<VariableId> inputs;
  for (const auto& p : ps)
    for (const auto& in : p.inputs)
      if (std::find(inputs.begin(), inputs.end(), in) == inputs.end()) inputs.push_back(in);

  Builder b;
  std::vector<Constant> constants;
  std::vector<Statement> all;
  std::vector<VariableId> outs;
  std::size_t real = 0;
  for (std::size_t q = 0; q < order.size(); ++q) {
    const auto& p = ps[order[q]];
    std::unordered_map<VariableId, VariableId> local;
    const auto name = [&](const VariableId& v) {
      const auto it = local.find(v);
      return it == local.end() ? v : it->second;
    };
    for (const auto& c : p.constants) {
      auto n = b.fresh();
      local[c.name] = n;
      constants.push_back({n, c.value});
    }
    for (const auto& s : p.statements) {
      const auto& a = std::get<Assign>(s);
      auto t = b.fresh();
      all.emplace_back(Assign{t, {a.expr.op, name(a.expr.in1), name(a.expr.in2)}});
      local[a.target] = t;
    }
    outs.push_back(name(p.output()));
    if (order[q] == iStar) real = q;
  }
  if (ps.size() > 1) b.combine(all, b.fresh(), outs, real);
  // Constants get positional names; there is nothing to hide between
  // programs the attacker already knows.
  return b.finish(std::move(inputs), std::move(constants), all, true, nameRng, seed);
}

Ciphertext eval_encrypted(const Program& p, SecretKey& key, const SelectorKey& sel,
                          const std::map<VariableId, Ciphertext>& encInputs) {
  std::unordered_map<VariableId, Ciphertext> env;
  for (const auto& in : p.inputs) {
    const auto it = encInputs.find(in);
    if (it == encInputs.end()) throw Error("unbound-variable", "no ciphertext for input '" + in.name + "'");
    env[in] = it->second;
  }
  for (const auto& c : p.constants) env[c.name] = key.enc(c.value);
  const auto get = [&](const VariableId& v) -> const Ciphertext& {
    const auto it = env.find(v);
    if (it == env.end()) throw Error("unbound-variable", "'" + v.name + "' is not defined");
    return it->second;
  };
  if (p.statements.empty()) throw Error("invalid-program", "program has no statements");
  for (const auto& s : p.statements) {
    if (const auto* a = std::get_if<Assign>(&s)) {
      env[a->target] = key.he_op(a->expr.op, get(a->expr.in1), get(a->expr.in2));
      continue;
    }
    const auto& c = std::get<Combine>(s);
    std::optional<Ciphertext> acc;
    for (const auto& o : c.options) {
      const auto bit = sel.bits.find(o.selector);
      if (bit == sel.bits.end()) throw Error("key-mismatch", "no selector bit for " + o.selector.str());
      const auto b = key.enc(Value::from_rep(bit->second ? 1 : 0));
      const auto term = key.he_op(Op::Mul, b, get(o.source));
      acc = acc ? key.he_op(Op::Add, *acc, term) : term;
    }
    env[c.target] = *acc;
  }
  return get(p.output());
}

Program fold(const Program& obf, const std::vector<std::size_t>& choice) {
  if (choice.size() != obf.combine_count())
    throw Error("key-mismatch", "expected " + std::to_string(obf.combine_count()) + " choices, got " +
                                    std::to_string(choice.size()));
  std::unordered_set<VariableId> sources;
  std::unordered_set<VariableId> chosen;
  std::unordered_set<VariableId> operands;
  std::size_t ci = 0;
  for (const auto& s : obf.statements) {
    if (const auto* a = std::get_if<Assign>(&s)) {
      operands.insert(a->expr.in1);
      operands.insert(a->expr.in2);
      continue;
    }
    const auto& c = std::get<Combine>(s);
    if (choice[ci] >= c.options.size())
      throw Error("key-mismatch", "choice " + std::to_string(choice[ci]) + " out of range for '" + c.target.name + "'");
    for (const auto& o : c.options) sources.insert(o.source);
    chosen.insert(c.options[choice[ci]].source);
    ++ci;
  }

  std::unordered_map<VariableId, VariableId> alias;
  const auto resolve = [&](VariableId v) {
    for (auto it = alias.find(v); it != alias.end(); it = alias.find(v)) v = it->second;
    return v;
  };
  Program out;
  out.inputs = obf.inputs;
  out.constants = obf.constants;
  ci = 0;
  for (const auto& s : obf.statements) {
    if (const auto* a = std::get_if<Assign>(&s)) {
      const bool discarded = sources.contains(a->target) && !chosen.contains(a->target) &&
                             !operands.contains(a->target) && a->target != obf.output();
      if (!discarded)
        out.statements.emplace_back(Assign{a->target, {a->expr.op, resolve(a->expr.in1), resolve(a->expr.in2)}});
      continue;
    }
    const auto& c = std::get<Combine>(s);
    alias[c.target] = resolve(c.options[choice[ci++]].source);
  }
  const auto output = resolve(obf.output());
  const bool computed = std::any_of(out.statements.begin(), out.statements.end(),
                                    [&](const Statement& s) { return target_of(s) == output; });
  if (!computed) throw Error("invalid-program", "candidate output '" + output.name + "' is not computed");
  if (target_of(out.statements.back()) != output) {
    // Program-level candidates: drop the programs that were not chosen.
    std::unordered_set<VariableId> live{output};
    std::vector<Statement> kept;
    for (auto it = out.statements.rbegin(); it != out.statements.rend(); ++it) {
      const auto& a = std::get<Assign>(*it);
      if (!live.contains(a.target)) continue;
      live.insert(a.expr.in1);
      live.insert(a.expr.in2);
      kept.push_back(*it);
    }
    out.statements.assign(kept.rbegin(), kept.rend());
  }
  return out;
}

Program normalize(const Program& p) {
  validate(p);
  std::unordered_set<VariableId> live{p.output()};
  std::vector<Statement> kept;
  for (auto it = p.statements.rbegin(); it != p.statements.rend(); ++it) {
    if (!live.contains(target_of(*it))) continue;
    if (const auto* a = std::get_if<Assign>(&*it)) {
      live.insert(a->expr.in1);
      live.insert(a->expr.in2);
    } else {
      for (const auto& o : std::get<Combine>(*it).options) live.insert(o.source);
    }
    kept.push_back(*it);
  }
  std::reverse(kept.begin(), kept.end());

  std::map<VariableId, Value> constValue;
  for (const auto& c : p.constants) constValue[c.name] = c.value;
  std::set<std::string> taken;
  for (const auto& in : p.inputs) taken.insert(in.name);
  const auto cprefix = pick_prefix(taken, "c");
  const auto tprefix = pick_prefix(taken, "t");

  Program out;
  out.inputs = p.inputs;
  std::unordered_map<VariableId, VariableId> rename;
  const auto use = [&](const VariableId& v) -> VariableId {
    if (const auto it = rename.find(v); it != rename.end()) return it->second;
    if (const auto c = constValue.find(v); c != constValue.end()) {
      VariableId n{cprefix + std::to_string(out.constants.size())};
      out.constants.push_back({n, c->second});
      rename[v] = n;
      return n;
    }
    return v;
  };
  std::size_t next = 0;
  for (const auto& s : kept) {
    if (const auto* a = std::get_if<Assign>(&s)) {
      const auto in1 = use(a->expr.in1);
      const auto in2 = use(a->expr.in2);
      VariableId t{tprefix + std::to_string(next++)};
      out.statements.emplace_back(Assign{t, {a->expr.op, in1, in2}});
      rename[a->target] = t;
    } else {
      const auto& c = std::get<Combine>(s);
      Combine nc{{}, {}};
      for (const auto& o : c.options) nc.options.push_back({o.selector, use(o.source)});
      nc.target = VariableId{tprefix + std::to_string(next++)};
      rename[c.target] = nc.target;
      out.statements.emplace_back(std::move(nc));
    }
  }
  return out;
}

std::vector<std::size_t> key_choice(const Program& obf, const SelectorKey& key) {
  check_selector_key(key, obf);
  std::vector<std::size_t> choice;
  for (const auto& s : obf.statements) {
    const auto* c = std::get_if<Combine>(&s);
    if (!c) continue;
    for (std::size_t i = 0; i < c->options.size(); ++i)
      if (key.bits.at(c->options[i].selector)) choice.push_back(i);
  }
  return choice;
}

Program deobfuscate(const Program& obf, const SelectorKey& key) { return normalize(fold(obf, key_choice(obf, key))); }

}  // namespace selectc
