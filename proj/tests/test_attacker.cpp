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
#include <set>

#include "selectc/attacker.hpp"
#include "selectc/demo.hpp"
#include "selectc/error.hpp"
#include "selectc/obfuscator.hpp"
#include "selectc/program_io.hpp"
#include "support/gen.hpp"

using namespace selectc;
using selectc::testing::random_inputs;
using selectc::testing::random_program;

namespace {

Value sv(std::int64_t v) { return Value::from_signed(v); }
VariableId V(const char* n) { return VariableId{n}; }

constexpr const char* kSquareClass =
    "prime 2305843009213693951\ninput a\nt0 := MUL a a\nt1 := ADD a a\nr := COMBINE (s0,t0) (s1,t1)\n";

Program square() { return parse_program("prime 2305843009213693951\ninput a\nr := MUL a a\n"); }
Program doubling() { return parse_program("prime 2305843009213693951\ninput a\nr := ADD a a\n"); }

// Uniform over the whole field. Pairs and probes must share a distribution:
// a candidate that differs from the real program only on a thin set of
// inputs (say x == 1 under NEQ) is invisible to pairs that never hit it.
Bindings uniform_inputs(Rng& rng, const std::vector<VariableId>& inputs) {
  Bindings b;
  for (const auto& v : inputs) b[v] = Value::from_rep(rng.uniform(kPrime));
  return b;
}

std::string canon(const Program& p) { return format_canonical(normalize(p)); }

// One Combine over `n` options; option `odd` is DIV, the rest ADD.
Program wide_class(std::size_t n, std::size_t odd) {
  std::string text = "prime 2305843009213693951\ninput a\ninput b\n";
  std::string comb = "r := COMBINE";
  for (std::size_t i = 0; i < n; ++i) {
    text += "o" + std::to_string(i) + (i == odd ? " := DIV a b\n" : " := ADD a b\n");
    comb += " (s" + std::to_string(i) + ",o" + std::to_string(i) + ")";
  }
  return parse_program(text + comb + "\n");
}

}  // namespace

TEST_CASE("class of the squaring example") {
  const auto cd = extract_class(parse_program(kSquareClass));
  CHECK(cd.classSize == 2);
  CHECK(cd.optionCounts == std::vector<std::size_t>{2});
  std::set<std::string> members = {canon(cd.candidate(0)), canon(cd.candidate(1))};
  CHECK(members == std::set<std::string>{canon(square()), canon(doubling())});
}

TEST_CASE("demo class sizes") {
  CHECK(extract_class(make_demo("l1", kDefaultSeed).obf.program).classSize == 15625);
  CHECK(extract_class(make_demo("l0", kDefaultSeed).obf.program).classSize == 12500);
  CHECK(extract_class(make_demo("l1", 3).obf.program).classSize == 15625);
  CHECK_THROWS_AS(make_demo("l2", 1), Error);
}

TEST_CASE("mixed radix indexing") {
  Rng rng(1);
  const auto p = random_program(rng, 4);
  ObfuscationConfig cfg;
  cfg.k = 3;
  const auto cd = extract_class(obfuscate_statement_level(p, cfg).program);
  REQUIRE(cd.classSize == 81);
  CHECK(cd.choice(0) == std::vector<std::size_t>{0, 0, 0, 0});
  CHECK(cd.choice(1) == std::vector<std::size_t>{0, 0, 0, 1});
  CHECK(cd.choice(27) == std::vector<std::size_t>{1, 0, 0, 0});
  std::set<std::string> distinct;
  for (std::uint64_t i = 0; i < 81; ++i) {
    CHECK(cd.index_of(cd.choice(i)) == i);
    distinct.insert(format_canonical(cd.candidate(i)));
  }
  CHECK(distinct.size() == 81);
}

TEST_CASE("known plaintext filtering") {
  const auto cd = extract_class(parse_program(kSquareClass));
  const auto s1 = kpa_filter(cd, {{{{V("a"), sv(3)}}, sv(9)}});
  REQUIRE(s1.size() == 1);
  CHECK(canon(cd.candidate(s1[0])) == canon(square()));
  CHECK(eliminated_options(cd, s1) == std::vector<std::size_t>{1});
  const auto s2 = kpa_filter(cd, {{{{V("a"), sv(2)}}, sv(4)}});
  CHECK(s2.size() == 2);
  CHECK(eliminated_options(cd, s2) == std::vector<std::size_t>{0});
  CHECK(kpa_filter(cd, {}).size() == 2);
}

TEST_CASE("survivors of a known plaintext attack behave like the original") {
  Rng rng(2);
  for (int round = 0; round < 10; ++round) {
    const auto p = random_program(rng, 3);
    ObfuscationConfig cfg;
    cfg.k = 3;
    cfg.seed = rng.next();
    const auto o = obfuscate_statement_level(p, cfg);
    const auto cd = extract_class(o.program);
    std::vector<IoPair> pairs;
    for (int i = 0; i < 20; ++i) {
      auto in = uniform_inputs(rng, p.inputs);
      pairs.push_back({in, eval_plain(p, in)});
    }
    const auto survivors = kpa_filter(cd, pairs);
    const auto truth = cd.index_of(key_choice(o.program, o.key));
    CHECK(std::find(survivors.begin(), survivors.end(), truth) != survivors.end());
    for (auto idx : survivors) {
      const auto cand = cd.candidate(idx);
      for (int t = 0; t < 1000; ++t) {
        const auto in = uniform_inputs(rng, p.inputs);
        REQUIRE(eval_plain(cand, in) == eval_plain(p, in));
      }
    }
  }
}

TEST_CASE("filtering never drops the real program") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_program(rng, 1 + rng.uniform(4));
    ObfuscationConfig cfg;
    cfg.k = 2 + rng.uniform(2);
    cfg.seed = rng.next();
    cfg.fakeCombining = rng.uniform(2);
    const auto o = obfuscate_statement_level(p, cfg);
    const auto cd = extract_class(o.program);
    std::vector<IoPair> pairs;
    for (int j = 0; j < 5; ++j) {
      auto in = random_inputs(rng, p.inputs);
      pairs.push_back({in, eval_plain(p, in)});
    }
    const auto s = kpa_filter(cd, pairs);
    CHECK(std::binary_search(s.begin(), s.end(), cd.index_of(key_choice(o.program, o.key))));
  }
}

TEST_CASE("enumeration cap") {
  Rng rng(4);
  ObfuscationConfig cfg;
  cfg.k = 5;
  const auto cd = extract_class(obfuscate_statement_level(random_program(rng, 9), cfg).program);
  CHECK(cd.classSize == 1953125);
  try {
    check_cap(cd, kDefaultEnumerationCap);
    FAIL("expected cap-exceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == "cap-exceeded");
    CHECK(std::string(e.what()).find("1953125") != std::string::npos);
  }
  CHECK_THROWS_AS(kpa_filter(cd, {}), Error);
  CHECK_THROWS_AS(rank_candidates(cd, {}), Error);
  CHECK_NOTHROW(check_cap(cd, 2000000));
}

TEST_CASE("uniform model gives equal probabilities") {
  const auto cd = extract_class(parse_program(kSquareClass));
  PatternTable flat;
  for (auto op : kAllOps) flat.add(Family::Operator, std::string(op_pattern_name(op)), 5);
  for (const auto& table : {PatternTable{}, flat}) {
    const auto r = rank_candidates(cd, table);
    REQUIRE(r.size() == 2);
    for (const auto& c : r) {
      CHECK(c.probability == doctest::Approx(0.5));
      CHECK(c.rank == 2);
    }
  }
}

TEST_CASE("frequent operators rank first") {
  const auto cd = extract_class(parse_program(kSquareClass));
  PatternTable t;
  t.add(Family::Operator, "times", 100);
  t.add(Family::Operator, "plus", 3);
  const auto r = rank_candidates(cd, t);
  CHECK(r[0].text == canon(square()));
  CHECK(r[0].rank == 1);
  CHECK(r[0].probability > r[1].probability);
  CHECK(class_quality(r, {square()}) == 0.0);
  CHECK(class_quality(r, {doubling()}) == doctest::Approx(0.5));
  CHECK(class_quality(r, {doubling(), square()}) == 0.0);
  CHECK_THROWS_AS(class_quality(r, {parse_program("prime 2305843009213693951\ninput a\nr := SUB a a\n")}), Error);
}

TEST_CASE("ranking matches a brute-force product oracle") {
  Rng rng(5);
  for (int round = 0; round < 20; ++round) {
    const auto p = random_program(rng, 3);
    ObfuscationConfig cfg;
    cfg.k = 3;
    cfg.seed = rng.next();
    const auto o = obfuscate_statement_level(p, cfg);
    const auto cd = extract_class(o.program);
    PatternTable t;
    for (auto op : kAllOps)
      if (rng.bernoulli(0.7)) t.add(Family::Operator, std::string(op_pattern_name(op)), 1 + rng.uniform(50));

    // Oracle: plain products of smoothed frequencies over the Assigns that
    // survive a choice, computed from the obfuscated text directly.
    std::uint64_t u = 0, total = 0;
    for (const auto& [k, n] : t.counts(Family::Operator)) {
      total += n;
      if (n > 0 && (u == 0 || n < u)) u = n;
    }
    if (u == 0) u = 1;
    const auto freq = [&](Op op) {
      return (static_cast<double>(t.count(Family::Operator, std::string(op_pattern_name(op)))) + u) /
             (static_cast<double>(total) + 10.0 * u);
    };
    std::set<VariableId> optionSources;
    for (const auto& s : o.program.statements)
      if (const auto* c = std::get_if<Combine>(&s))
        for (const auto& opt : c->options) optionSources.insert(opt.source);
    const auto n = cd.classSize.convert_to<std::uint64_t>();
    std::vector<double> product(n, 1.0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto choice = cd.choice(i);
      std::set<VariableId> chosen;
      std::size_t ci = 0;
      for (const auto& s : o.program.statements)
        if (const auto* c = std::get_if<Combine>(&s)) chosen.insert(c->options[choice[ci++]].source);
      for (const auto& s : o.program.statements)
        if (const auto* a = std::get_if<Assign>(&s))
          if (!optionSources.contains(a->target) || chosen.contains(a->target)) product[i] *= freq(a->expr.op);
    }
    double z = 0;
    for (double x : product) z += x;

    const auto ranked = rank_candidates(cd, t);
    REQUIRE(ranked.size() == n);
    for (std::size_t j = 0; j < ranked.size(); ++j) {
      const auto i = ranked[j].index;
      CHECK(ranked[j].probability == doctest::Approx(product[i] / z).epsilon(1e-9));
      std::uint64_t atLeast = 0;
      for (double x : product) atLeast += x >= product[i] * (1 - 1e-9) ? 1 : 0;
      CHECK(ranked[j].rank == atLeast);
      if (j > 0) CHECK(ranked[j - 1].probability >= ranked[j].probability * (1 - 1e-9));
    }
    double sum = 0;
    for (const auto& c : ranked) sum += c.probability;
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("ranking ignores the scale of the table") {
  Rng rng(6);
  const auto p = random_program(rng, 4);
  const auto o = obfuscate_statement_level(p, {});
  const auto cd = extract_class(o.program);
  PatternTable t, t7;
  for (auto op : kAllOps) {
    const auto c = rng.uniform(20);
    if (c == 0) continue;
    t.add(Family::Operator, std::string(op_pattern_name(op)), c);
    t7.add(Family::Operator, std::string(op_pattern_name(op)), 7 * c);
  }
  const auto a = rank_candidates(cd, t);
  const auto b = rank_candidates(cd, t7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == b[i].index);
    CHECK(a[i].rank == b[i].rank);
    CHECK(a[i].probability == doctest::Approx(b[i].probability).epsilon(1e-12));
  }
  CHECK(class_quality(a, {p}) == class_quality(b, {p}));
}

TEST_CASE("quality of a constructed ranking") {
  PatternTable t;
  t.add(Family::Operator, "plus", 1000);
  t.add(Family::Operator, "divide", 1);
  const auto cd = extract_class(wide_class(100, 37));
  const auto r = rank_candidates(cd, t);
  const auto conf = parse_program("prime 2305843009213693951\ninput a\ninput b\nr := DIV a b\n");
  CHECK(min_rank(r, {conf}) == 100);
  CHECK(class_quality(r, {conf}) == doctest::Approx(0.99));
  CHECK(quality_from_rank(1) == 0.0);
  CHECK(quality_from_rank(2) == 0.5);
  // Restricting to survivors renormalizes over them.
  const auto sub = rank_candidates(cd, t, {37, 5});
  REQUIRE(sub.size() == 2);
  CHECK(sub[0].index == 5);
  CHECK(sub[0].probability + sub[1].probability == doctest::Approx(1.0));
}

TEST_CASE("quality stays in [0, 1)") {
  Rng rng(7);
  for (int i = 0; i < 40; ++i) {
    const auto p = random_program(rng, 1 + rng.uniform(3));
    ObfuscationConfig cfg;
    cfg.seed = rng.next();
    cfg.k = 2 + rng.uniform(3);
    const auto cd = extract_class(obfuscate_statement_level(p, cfg).program);
    PatternTable t;
    for (auto op : kAllOps) t.add(Family::Operator, std::string(op_pattern_name(op)), 1 + rng.uniform(9));
    const auto r = rank_candidates(cd, t);
    const auto q = class_quality(r, {p});
    CHECK(q >= 0.0);
    CHECK(q < 1.0);
    CHECK((q == 0.0) == (min_rank(r, {p}) == 1));
  }
}

TEST_CASE("io pair files") {
  const auto pairs = parse_pairs("# known pairs\nx=3,y=2 -> 9\nx=-1,y=0 -> -9999\n");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].inputs.at(V("x")) == sv(3));
  CHECK(pairs[1].output == sv(-9999));
  CHECK(format_pairs(pairs) == "x=3,y=2 -> 9\nx=-1,y=0 -> -9999\n");
  CHECK_THROWS_AS(parse_pairs("x=3 9\n"), ParseError);
  CHECK_THROWS_AS(parse_pairs("x=three -> 9\n"), ParseError);
}

TEST_CASE("guessing game closed forms") {
  const auto g = game_exact(0.5, 11);
  CHECK(g.exact == doctest::Approx(0.725));
  REQUIRE(g.approx);
  CHECK(std::abs(*g.approx - 0.7273) < 5e-5);
  CHECK(game_exact(0.3, 7, ObfStrategy::FrequentMisleading).exact == doctest::Approx(0.3));
  CHECK_FALSE(game_exact(0.3, 7, ObfStrategy::FrequentMisleading).approx);
  CHECK(game_exact(0.3, 7, ObfStrategy::UniformMisleading, AttStrategy::Uniform).exact == doctest::Approx(0.5));
  CHECK(game_exact(0.999999, 5).exact == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(game_exact(0.0, 5), Error);
  CHECK_THROWS_AS(game_exact(1.0, 5), Error);
  CHECK_THROWS_AS(game_exact(0.5, 1), Error);
  for (auto s : {ObfStrategy::UniformMisleading, ObfStrategy::FrequentMisleading})
    CHECK(parse_obf_strategy(obf_strategy_name(s)) == s);
  for (auto s : {AttStrategy::Baseline, AttStrategy::Uniform}) CHECK(parse_att_strategy(att_strategy_name(s)) == s);
}

TEST_CASE("guessing game simulation agrees with the closed form") {
  constexpr std::uint64_t kTrials = 200000;
  for (double pl : {0.1, 0.5, 0.9})
    for (std::uint64_t n : {2, 3, 11, 20})
      for (auto obf : {ObfStrategy::UniformMisleading, ObfStrategy::FrequentMisleading}) {
        const double q = game_exact(pl, n, obf).exact;
        const double sim = game_simulate(pl, n, kTrials, 1000 * n + static_cast<std::uint64_t>(pl * 10), obf);
        CHECK(std::abs(sim - q) <= 3 * std::sqrt(q * (1 - q) / kTrials));
      }
  CHECK(game_simulate(0.4, 6, 1000, 9) == game_simulate(0.4, 6, 1000, 9));
}

TEST_CASE("attack report layout") {
  const auto cd = extract_class(parse_program(kSquareClass));
  PatternTable t;
  t.add(Family::Operator, "times", 3);
  t.add(Family::Operator, "plus", 1);
  AttackReport r;
  r.classSize = cd.classSize;
  r.ranked = rank_candidates(cd, t);
  r.enumerated = r.ranked.size();
  r.survivors = 2;
  r.minRank = 1;
  r.quality = 0.0;
  r.millis = 12.5;
  const auto text = format_report(r);
  CHECK(text.rfind("class_size = 2\nenumerated = 2\nsurvivors = 2\nmin_rank = 1\nquality = 0.000000\ncandidate 1 | index=",
                   0) == 0);
  CHECK(text.find("time_ms") == std::string::npos);
  CHECK(format_report(r, 10, true).find("time_ms = 12.5\n") != std::string::npos);
  CHECK(format_report(r, 1).find("candidate 2") == std::string::npos);
}
