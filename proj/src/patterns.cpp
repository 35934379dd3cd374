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

#include "selectc/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "selectc/error.hpp"

namespace selectc {
namespace {

bool is_operator_node(const ExprTree& t) { return !t.op.empty(); }

bool is_int_literal(const ExprTree& t) { return t.kind == kIntegerLiteral && t.value.has_value(); }

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* e = s.data() + s.size();
  if (s.empty() || std::from_chars(s.data(), e, v).ptr != e) return std::nullopt;
  return v;
}

void format_node(const ExprTree& t, std::size_t depth, std::string& out) {
  out.append(2 * depth, ' ');
  out += t.kind;
  if (!t.op.empty()) out += " op=" + t.op;
  if (t.value) out += " value=" + std::to_string(*t.value);
  out += '\n';
  for (const auto& c : t.children) format_node(c, depth + 1, out);
}

void mine_node(const ExprTree& t, PatternTable& table) {
  for (const auto& c : t.children) mine_node(c, table);
  if (!is_operator_node(t)) return;
  table.add(Family::Operator, t.op);
  if (t.children.size() == 1) {
    table.add(Family::Structural, t.op + " " + t.children[0].kind);
    return;
  }
  const auto& l = t.children[0];
  const auto& r = t.children[1];
  table.add(Family::Structural, l.kind + " " + t.op + " " + r.kind);
  // Exactly one literal child; 1 + 2 style nodes are skipped.
  if (is_int_literal(l) != is_int_literal(r)) {
    const auto& lit = is_int_literal(l) ? l : r;
    table.add(Family::IntConst, t.op + " " + std::to_string(*lit.value));
  }
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- surface bridge ---

using surface::Expr;
using surface::Stmt;

ExprTree tree_of(const Expr& e) {
  ExprTree t;
  switch (e.kind) {
    case Expr::Kind::Literal:
      t.kind = std::string(kIntegerLiteral);
      t.value = e.literal;
      break;
    case Expr::Kind::Name:
      t.kind = "NameE";
      break;
    case Expr::Kind::Index:
      t.kind = "ArrayAccessE";
      t.children.push_back(ExprTree{"NameE", "", std::nullopt, {}});
      t.children.push_back(tree_of(e.children[0]));
      break;
    case Expr::Kind::Binary:
      t.kind = "BinaryE";
      t.op = std::string(op_pattern_name(e.op));
      t.children.push_back(tree_of(e.children[0]));
      t.children.push_back(tree_of(e.children[1]));
      break;
    case Expr::Kind::Unary:
      t.kind = "UnaryE";
      t.op = e.unary == surface::UnaryOp::Neg ? "minus" : "not";
      t.children.push_back(tree_of(e.children[0]));
      break;
  }
  return t;
}

void trees_of(const std::vector<Stmt>& body, std::vector<ExprTree>& out) {
  for (const auto& s : body) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
      case Stmt::Kind::Return:
        out.push_back(ExprTree{"UnaryE", "assign", std::nullopt, {tree_of(s.value)}});
        break;
      case Stmt::Kind::If:
        out.push_back(tree_of(s.value));
        trees_of(s.body, out);
        trees_of(s.elseBody, out);
        break;
      case Stmt::Kind::For:
        trees_of(s.init, out);
        out.push_back(tree_of(s.value));
        trees_of(s.body, out);
        trees_of(s.step, out);
        break;
    }
  }
}

}  // namespace

std::vector<ExprTree> parse_trees(std::string_view text) {
  std::vector<ExprTree> roots;
  // Ancestors of the next node. Appending a child can only move its earlier
  // siblings, which are already off the stack.
  std::vector<ExprTree*> stack;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t')) line.pop_back();
    if (line.empty()) continue;
    std::size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ') ++indent;
    if (indent % 2 != 0) throw ParseError(lineNo, indent + 1, "indentation must be a multiple of two spaces");
    const auto depth = indent / 2;
    std::istringstream words(line.substr(indent));
    ExprTree node;
    words >> node.kind;
    std::string attr;
    while (words >> attr) {
      if (attr.starts_with("op=") && attr.size() > 3) {
        node.op = attr.substr(3);
      } else if (attr.starts_with("value=")) {
        node.value = to_int(std::string_view(attr).substr(6));
        if (!node.value) throw ParseError(lineNo, indent + 1, "bad value '" + attr + "'");
      } else {
        throw ParseError(lineNo, indent + 1, "unknown attribute '" + attr + "'");
      }
    }
    if (depth > stack.size()) throw ParseError(lineNo, indent + 1, "node is indented too deep");
    stack.resize(depth);
    if (depth == 0) {
      roots.push_back(std::move(node));
      stack.push_back(&roots.back());
    } else {
      auto& parent = *stack.back();
      parent.children.push_back(std::move(node));
      stack.push_back(&parent.children.back());
    }
  }
  for (const auto& r : roots) check_tree(r);
  return roots;
}

std::string format_trees(std::span<const ExprTree> trees) {
  std::string out;
  for (const auto& t : trees) format_node(t, 0, out);
  return out;
}

void check_tree(const ExprTree& t) {
  if (t.kind.empty()) throw Error("malformed-tree", "node without a kind");
  if (t.kind == "BinaryE" && (t.children.size() != 2 || t.op.empty()))
    throw Error("malformed-tree", "BinaryE needs an operator and two children");
  if (t.kind == "UnaryE" && (t.children.size() != 1 || t.op.empty()))
    throw Error("malformed-tree", "UnaryE needs an operator and one child");
  if (is_operator_node(t) && t.children.size() != 1 && t.children.size() != 2)
    throw Error("malformed-tree", "operator '" + t.op + "' has " + std::to_string(t.children.size()) + " children");
  if (t.kind == kIntegerLiteral && !t.value) throw Error("malformed-tree", "integer literal without a value");
  for (const auto& c : t.children) check_tree(c);
}

std::vector<ExprTree> surface_to_trees(const surface::SurfaceProgram& p) {
  std::vector<ExprTree> out;
  trees_of(p.body, out);
  return out;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Operator: return "operator";
    case Family::IntConst: return "intconst";
    case Family::Structural: return "structural";
  }
  return "?";
}

void PatternTable::add(Family f, const std::string& key, std::uint64_t count) {
  if (count > 0) counts_[index(f)][key] += count;
}

void PatternTable::merge(const PatternTable& other) {
  for (auto f : kFamilies)
    for (const auto& [k, n] : other.counts(f)) add(f, k, n);
}

std::uint64_t PatternTable::count(Family f, const std::string& key) const {
  const auto& m = counts_[index(f)];
  const auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

std::uint64_t PatternTable::total(Family f) const {
  std::uint64_t t = 0;
  for (const auto& [k, n] : counts_[index(f)]) t += n;
  return t;
}

double PatternTable::relative(Family f, const std::string& key) const {
  const auto t = total(f);
  return t == 0 ? 0.0 : static_cast<double>(count(f, key)) / static_cast<double>(t);
}

bool PatternTable::empty() const {
  return std::all_of(counts_.begin(), counts_.end(), [](const auto& m) { return m.empty(); });
}

PatternTable mine(std::span<const ExprTree> corpus) {
  PatternTable t;
  for (const auto& tree : corpus) {
    check_tree(tree);
    mine_node(tree, t);
  }
  return t;
}

std::string format_table(const PatternTable& t) {
  std::string out;
  for (auto f : kFamilies)
    for (const auto& [k, n] : t.counts(f)) out += std::string(family_name(f)) + " " + k + " " + std::to_string(n) + "\n";
  return out;
}

PatternTable parse_table(std::string_view text) {
  PatternTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> words;
    for (std::string w; ls >> w;) words.push_back(w);
    if (words.empty()) continue;
    std::optional<Family> fam;
    for (auto f : kFamilies)
      if (words[0] == family_name(f)) fam = f;
    if (!fam) throw ParseError(lineNo, 1, "unknown pattern family '" + words[0] + "'");
    const std::size_t keyWords = *fam == Family::Operator ? 1 : *fam == Family::IntConst ? 2 : 0;
    if (words.size() < 3 || (keyWords != 0 && words.size() != keyWords + 2))
      throw ParseError(lineNo, 1, "wrong number of fields for " + words[0]);
    const auto n = to_int(words.back());
    if (!n || *n < 0) throw ParseError(lineNo, 1, "bad count '" + words.back() + "'");
    if (*fam == Family::IntConst && !to_int(words[2])) throw ParseError(lineNo, 1, "bad constant '" + words[2] + "'");
    std::string key;
    for (std::size_t i = 1; i + 1 < words.size(); ++i) key += (i > 1 ? " " : "") + words[i];
    t.add(*fam, key, static_cast<std::uint64_t>(*n));
  }
  return t;
}

std::pair<double, double> mean_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

AggregateTable aggregate(std::span<const PatternTable> tables) {
  if (tables.empty()) throw Error("invalid-argument", "aggregate needs at least one table");
  AggregateTable out;
  out.corpora = tables.size();
  for (auto f : kFamilies) {
    std::map<std::string, AggregateRow> rows;
    for (const auto& t : tables)
      for (const auto& [k, n] : t.counts(f)) rows[k].key = k;
    std::vector<AggregateRow> ordered;
    for (auto& [k, row] : rows) {
      row.family = f;
      for (const auto& t : tables) {
        row.counts.push_back(t.count(f, k));
        row.percents.push_back(100.0 * t.relative(f, k));
      }
      std::tie(row.mean, row.std) = mean_std(row.percents);
      ordered.push_back(std::move(row));
    }
    std::stable_sort(ordered.begin(), ordered.end(), [](const AggregateRow& a, const AggregateRow& b) {
      return a.percents[0] > b.percents[0];
    });
    for (auto& r : ordered) out.rows.push_back(std::move(r));
  }
  return out;
}

std::string export_table(const AggregateTable& t) {
  std::string out = "pattern";
  for (std::size_t i = 0; i < t.corpora; ++i) out += " | corpus" + std::to_string(i + 1);
  out += " | mean | std\n";
  std::optional<Family> current;
  for (const auto& r : t.rows) {
    if (current != r.family) {
      current = r.family;
      out += "## " + std::string(family_name(r.family)) + "\n";
    }
    out += r.key;
    for (std::size_t i = 0; i < r.counts.size(); ++i)
      out += " | " + fmt("%.0f", std::round(r.percents[i])) + "(" + std::to_string(r.counts[i]) + ")";
    out += " | " + fmt("%.1f", std::round(r.mean * 10.0) / 10.0) + " | " + fmt("%.1f", std::round(r.std * 10.0) / 10.0) +
           "\n";
  }
  return out;
}

}  // namespace selectc
