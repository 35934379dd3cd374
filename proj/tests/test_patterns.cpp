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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "selectc/error.hpp"
#include "selectc/patterns.hpp"
#include "selectc/rng.hpp"
#include "selectc/surface.hpp"
#include "support/gen.hpp"

using namespace selectc;
using selectc::testing::SyntheticCorpus;

namespace {

ExprTree leaf(std::string kind, std::optional<std::int64_t> v = {}) { return ExprTree{std::move(kind), "", v, {}}; }
ExprTree unary(std::string op, ExprTree c) { return ExprTree{"UnaryE", std::move(op), {}, {std::move(c)}}; }
ExprTree binary(std::string op, ExprTree l, ExprTree r) {
  return ExprTree{"BinaryE", std::move(op), {}, {std::move(l), std::move(r)}};
}

std::size_t count_operator_nodes(const ExprTree& t) {
  std::size_t n = (t.kind == "BinaryE" || t.kind == "UnaryE") ? 1 : 0;
  for (const auto& c : t.children) n += count_operator_nodes(c);
  return n;
}

// Table with one structural row at the given count and a filler row making
// up the rest of the family total.
PatternTable row_table(const std::string& key, std::uint64_t count, std::uint64_t total) {
  PatternTable t;
  t.add(Family::Structural, key, count);
  t.add(Family::Structural, "other NameE", total - count);
  return t;
}

}  // namespace

TEST_CASE("operator counts") {
  std::vector<ExprTree> corpus = {unary("assign", leaf("NameE")), unary("assign", leaf("NameE")),
                                  unary("assign", leaf("NameE")), binary("plus", leaf("NameE"), leaf("NameE"))};
  const auto t = mine(corpus);
  CHECK(t.count(Family::Operator, "assign") == 3);
  CHECK(t.count(Family::Operator, "plus") == 1);
  CHECK(t.relative(Family::Operator, "assign") == doctest::Approx(0.75));
  CHECK(t.relative(Family::Operator, "plus") == doctest::Approx(0.25));
}

TEST_CASE("integer constant and structural keys") {
  const std::vector<ExprTree> corpus = {binary("plus", leaf("NameE"), leaf("IntegerLiteralE", 1))};
  const auto t = mine(corpus);
  CHECK(t.count(Family::IntConst, "plus 1") == 1);
  CHECK(t.count(Family::Structural, "NameE plus IntegerLiteralE") == 1);
  CHECK(t.total(Family::IntConst) == 1);
  // Two literal children: no integer-constant row.
  const std::vector<ExprTree> both = {binary("plus", leaf("IntegerLiteralE", 1), leaf("IntegerLiteralE", 2))};
  CHECK(mine(both).total(Family::IntConst) == 0);
  CHECK(mine(both).count(Family::Structural, "IntegerLiteralE plus IntegerLiteralE") == 1);
}

TEST_CASE("synthetic corpora match the generator's tally") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticCorpus c(seed);
    CHECK(c.nodes >= 500);
    const auto t = mine(c.trees);
    CHECK(t == c.expected);
    std::size_t ops = 0;
    for (const auto& tree : c.trees) ops += count_operator_nodes(tree);
    // Conservation: every operator node is counted once per family it fits.
    CHECK(t.total(Family::Operator) == ops);
    CHECK(t.total(Family::Structural) == ops);
    CHECK(t.total(Family::IntConst) <= ops);
  }
}

TEST_CASE("mining is order independent and merge is pointwise addition") {
  SyntheticCorpus c(7);
  auto trees = c.trees;
  Rng rng(8);
  rng.shuffle(std::span(trees));
  CHECK(mine(trees) == mine(c.trees));
  const std::size_t half = trees.size() / 2;
  auto a = mine(std::span(trees).first(half));
  a.merge(mine(std::span(trees).subspan(half)));
  CHECK(a == mine(trees));
}

TEST_CASE("relative frequencies sum to one per family") {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    const auto t = mine(SyntheticCorpus(seed).trees);
    for (auto f : kFamilies) {
      double sum = 0;
      for (const auto& [k, n] : t.counts(f)) sum += t.relative(f, k);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(PatternTable{}.relative(Family::Operator, "plus") == 0);
}

TEST_CASE("mean and population std") {
  const std::vector<double> v = {9, 7, 13, 10, 17};
  const auto [m, s] = mean_std(v);
  CHECK(m == doctest::Approx(11.2));
  CHECK(s == doctest::Approx(std::sqrt(60.8 / 5)));
  CHECK(std::abs(m - 11.1) <= 0.2);
  CHECK(std::abs(s - 3.4) <= 0.2);
}

TEST_CASE("aggregation of the increment row") {
  const std::uint64_t counts[] = {446, 316, 369, 37, 285};
  const std::uint64_t totals[] = {4956, 4514, 2838, 370, 1676};
  std::vector<PatternTable> tables;
  for (int i = 0; i < 5; ++i) tables.push_back(row_table("posIncrement NameE", counts[i], totals[i]));
  const auto agg = aggregate(tables);
  const auto row = std::find_if(agg.rows.begin(), agg.rows.end(), [](const AggregateRow& r) {
    return r.key == "posIncrement NameE";
  });
  REQUIRE(row != agg.rows.end());
  // Oracle: unrounded shares, population variance by hand.
  double mean = 0;
  for (int i = 0; i < 5; ++i) mean += 100.0 * counts[i] / totals[i] / 5;
  double var = 0;
  for (int i = 0; i < 5; ++i) var += std::pow(100.0 * counts[i] / totals[i] - mean, 2) / 5;
  CHECK(row->mean == doctest::Approx(mean));
  CHECK(row->std == doctest::Approx(std::sqrt(var)));
  CHECK(std::abs(row->mean - 11.1) <= 0.2);
  CHECK(std::abs(row->std - 3.4) <= 0.2);
  const auto text = export_table(agg);
  CHECK(text.find("posIncrement NameE | 9(446) | 7(316) | 13(369) | 10(37) | 17(285) | 11.2 | 3.5\n") !=
        std::string::npos);
}

TEST_CASE("degenerate aggregations") {
  const auto t = mine(SyntheticCorpus(3).trees);
  const std::vector<PatternTable> one = {t};
  for (const auto& r : aggregate(one).rows) {
    CHECK(r.std == 0);
    CHECK(r.mean == doctest::Approx(r.percents[0]));
  }
  const std::vector<PatternTable> two = {t, t};
  for (const auto& r : aggregate(two).rows) CHECK(r.std == doctest::Approx(0).epsilon(1e-12));
  CHECK_THROWS_AS(aggregate(std::span<const PatternTable>{}), Error);
}

TEST_CASE("rows follow the first corpus") {
  PatternTable a, b;
  a.add(Family::Operator, "plus", 5);
  a.add(Family::Operator, "minus", 3);
  a.add(Family::Operator, "times", 2);
  b.add(Family::Operator, "times", 9);
  b.add(Family::Operator, "divide", 1);
  const std::vector<PatternTable> ts = {a, b};
  const auto agg = aggregate(ts);
  std::vector<std::string> keys;
  for (const auto& r : agg.rows) keys.push_back(r.key);
  CHECK(keys == std::vector<std::string>{"plus", "minus", "times", "divide"});
  const auto& divide = agg.rows.back();
  CHECK(divide.counts == std::vector<std::uint64_t>{0, 1});
  CHECK(divide.mean == doctest::Approx(5.0));
}

TEST_CASE("export golden") {
  PatternTable a, b;
  a.add(Family::Operator, "plus", 3);
  a.add(Family::Operator, "assign", 1);
  a.add(Family::IntConst, "plus 1", 2);
  a.add(Family::Structural, "NameE plus IntegerLiteralE", 2);
  b.add(Family::Operator, "plus", 1);
  b.add(Family::Operator, "assign", 1);
  const std::vector<PatternTable> ts = {a, b};
  CHECK(export_table(aggregate(ts)) ==
        "pattern | corpus1 | corpus2 | mean | std\n"
        "## operator\n"
        "plus | 75(3) | 50(1) | 62.5 | 12.5\n"
        "assign | 25(1) | 50(1) | 37.5 | 12.5\n"
        "## intconst\n"
        "plus 1 | 100(2) | 0(0) | 50.0 | 50.0\n"
        "## structural\n"
        "NameE plus IntegerLiteralE | 100(2) | 0(0) | 50.0 | 50.0\n");
  const std::vector<PatternTable> empty = {PatternTable{}};
  CHECK(export_table(aggregate(empty)) == "pattern | corpus1 | mean | std\n");
  // Bundled-style synthetic corpora export the same bytes every time.
  const std::vector<PatternTable> syn = {mine(SyntheticCorpus(1).trees), mine(SyntheticCorpus(2).trees)};
  CHECK(export_table(aggregate(syn)) == export_table(aggregate(syn)));
}

TEST_CASE("table text round trip") {
  const auto t = mine(SyntheticCorpus(5).trees);
  CHECK(parse_table(format_table(t)) == t);
  CHECK(format_table(parse_table(format_table(t))) == format_table(t));
  CHECK_THROWS_AS(parse_table("operator plus x\n"), ParseError);
  CHECK_THROWS_AS(parse_table("intconst plus one 3\n"), ParseError);
  CHECK_THROWS_AS(parse_table("weird plus 3\n"), ParseError);
}

TEST_CASE("tree text round trip and validation") {
  const auto c = SyntheticCorpus(6, 60);
  const auto text = format_trees(c.trees);
  CHECK(parse_trees(text) == c.trees);
  const auto t = parse_trees("# one tree\nBinaryE op=plus\n  NameE\n  IntegerLiteralE value=1\n");
  REQUIRE(t.size() == 1);
  CHECK(t[0] == binary("plus", leaf("NameE"), leaf("IntegerLiteralE", 1)));
  CHECK_THROWS_AS(parse_trees("BinaryE op=plus\n  NameE\n"), Error);
  CHECK_THROWS_AS(parse_trees("UnaryE op=not\n"), Error);
  CHECK_THROWS_AS(parse_trees("NameE\n   NameE\n"), ParseError);
  CHECK_THROWS_AS(check_tree(ExprTree{"BinaryE", "", {}, {leaf("NameE"), leaf("NameE")}}), Error);
}

TEST_CASE("surface programs bridge to trees") {
  const auto sp = surface::parse_surface("input x\nr := x + 1\nif (r < 3) then r := -r else r := 0\n");
  const auto trees = surface_to_trees(sp);
  const auto t = mine(trees);
  CHECK(t.count(Family::IntConst, "plus 1") == 1);
  CHECK(t.count(Family::Structural, "assign BinaryE") == 1);
  CHECK(t.count(Family::Structural, "NameE less IntegerLiteralE") == 1);
  CHECK(t.count(Family::Structural, "minus NameE") == 1);
  CHECK(t.count(Family::Operator, "assign") == 3);
}
