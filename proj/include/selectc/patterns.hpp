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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selectc/surface.hpp"

namespace selectc {

/// Expression tree as dumped by an external front end. Operator nodes carry
/// `op`; BinaryE nodes have two children, UnaryE nodes one.
struct ExprTree {
  std::string kind;
  std::string op;
  std::optional<std::int64_t> value;
  std::vector<ExprTree> children;

  friend bool operator==(const ExprTree&, const ExprTree&) = default;
};

inline constexpr std::string_view kIntegerLiteral = "IntegerLiteralE";

/// Indented tree text, two spaces per level, one node per line:
///   BinaryE op=plus
///     NameE
///     IntegerLiteralE value=1
/// Several roots may follow each other; `#` starts a comment.
std::vector<ExprTree> parse_trees(std::string_view text);
std::string format_trees(std::span<const ExprTree> trees);

/// Throws Error("malformed-tree") on arity violations.
void check_tree(const ExprTree& t);

/// Every assignment and condition of a surface program as an expression tree
/// (assignments become `UnaryE op=assign` over the assigned value).
std::vector<ExprTree> surface_to_trees(const surface::SurfaceProgram& p);

enum class Family : std::uint8_t { Operator, IntConst, Structural };
inline constexpr std::array<Family, 3> kFamilies = {Family::Operator, Family::IntConst, Family::Structural};
std::string_view family_name(Family f);

class PatternTable {
 public:
  void add(Family f, const std::string& key, std::uint64_t count = 1);
  void merge(const PatternTable& other);

  const std::map<std::string, std::uint64_t>& counts(Family f) const { return counts_[index(f)]; }
  std::uint64_t count(Family f, const std::string& key) const;
  std::uint64_t total(Family f) const;
  /// count / total, 0 for an empty family.
  double relative(Family f, const std::string& key) const;
  bool empty() const;

  friend bool operator==(const PatternTable&, const PatternTable&) = default;

 private:
  static std::size_t index(Family f) { return static_cast<std::size_t>(f); }
  std::array<std::map<std::string, std::uint64_t>, 3> counts_;
};

PatternTable mine(std::span<const ExprTree> corpus);

/// Lines `operator <op> <n>`, `intconst <op> <value> <n>`,
/// `structural <key words...> <n>`.
std::string format_table(const PatternTable& t);
PatternTable parse_table(std::string_view text);

struct AggregateRow {
  Family family = Family::Operator;
  std::string key;
  std::vector<std::uint64_t> counts;
  std::vector<double> percents;  // unrounded, per corpus
  double mean = 0;
  double std = 0;  // population standard deviation
};

struct AggregateTable {
  std::size_t corpora = 0;
  std::vector<AggregateRow> rows;  // grouped by family, then by first-corpus share descending
};

/// Mean and population standard deviation of `values`.
std::pair<double, double> mean_std(std::span<const double> values);

/// Throws Error("invalid-argument") for an empty list.
AggregateTable aggregate(std::span<const PatternTable> tables);

/// `pattern | corpus1 | ... | mean | std` followed by `## <family>` sections
/// with rows like `plus 1 | 9(446) | 7(120) | 11.2 | 3.5`.
std::string export_table(const AggregateTable& t);

}  // namespace selectc
