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

#include <boost/math/distributions/chi_squared.hpp>
#include <set>
#include <thread>

#include "selectc/crypto.hpp"
#include "selectc/error.hpp"
#include "selectc/program_io.hpp"

using namespace selectc;

namespace {
Value sv(std::int64_t v) { return Value::from_signed(v); }
}  // namespace

TEST_CASE("encryption round-trips and is randomized") {
  SecretKey k(1);
  const auto c = k.enc(sv(5));
  CHECK(k.dec(c) == sv(5));
  CHECK(k.enc(sv(5)) != k.enc(sv(5)));
  CHECK(k.size() == 3);
}

TEST_CASE("foreign handles are rejected") {
  SecretKey a(1), b(2);
  const auto c = a.enc(sv(5));
  CHECK_THROWS_WITH_AS(b.dec(c), doctest::Contains("not issued"), Error);
  try {
    b.he_op(Op::Add, c, c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == "foreign-ciphertext");
  }
}

TEST_CASE("handle streams are fixed by the seed") {
  SecretKey a(1), b(1), z(0);
  for (int i = 0; i < 100; ++i) CHECK(a.enc(sv(i)) == b.enc(sv(-i)));
  CHECK(z.dec(z.enc(sv(3))) == sv(3));
}

TEST_CASE("different seeds give disjoint handle streams") {
  SecretKey a(1), b(2);
  std::set<std::array<std::uint64_t, 2>> seen;
  for (int i = 0; i < 100000; ++i) seen.insert(a.enc(sv(0)).handle);
  std::size_t collisions = 0;
  for (int i = 0; i < 100000; ++i) collisions += seen.contains(b.enc(sv(0)).handle) ? 1 : 0;
  CHECK(collisions == 0);
}

TEST_CASE("homomorphic operations") {
  SecretKey k(3);
  CHECK(k.dec(k.he_op(Op::Mul, k.enc(sv(3)), k.enc(sv(3)))) == sv(9));
  CHECK(k.dec(k.he_op(Op::Neq, k.enc(sv(2)), k.enc(sv(0)))) == sv(1));
  CHECK(k.dec(k.he_op(Op::Div, k.enc(sv(7)), k.enc(sv(0)))) == sv(0));
  // Exhaustive 50x50 grid per operation.
  std::vector<Ciphertext> enc;
  for (std::int64_t v = -25; v < 25; ++v) enc.push_back(k.enc(sv(v)));
  for (auto op : kAllOps)
    for (std::int64_t i = 0; i < 50; ++i)
      for (std::int64_t j = 0; j < 50; ++j) {
        const auto r = k.he_op(op, enc[i], enc[j]);
        REQUIRE(k.dec(r) == apply(op, sv(i - 25), sv(j - 25)));
      }
}

TEST_CASE("handles look the same whatever the plaintext") {
  // Homogeneity of the first handle byte between two plaintext classes.
  SecretKey k(4);
  constexpr int kN = 40000;
  std::array<std::array<double, 256>, 2> counts{};
  Rng rng(5);
  for (int i = 0; i < kN; ++i) {
    counts[0][k.enc(sv(0)).handle[0] & 0xff] += 1;
    counts[1][k.enc(Value::from_rep(rng.uniform(kPrime))).handle[0] & 0xff] += 1;
  }
  double chi = 0;
  for (int b = 0; b < 256; ++b) {
    const double col = counts[0][b] + counts[1][b];
    for (int c = 0; c < 2; ++c) {
      const double expected = col / 2;
      if (expected > 0) chi += (counts[c][b] - expected) * (counts[c][b] - expected) / expected;
    }
  }
  const boost::math::chi_squared dist(255);
  CHECK(chi < boost::math::quantile(dist, 0.99));
}

TEST_CASE("concurrent readers with a single writer") {
  SecretKey k(6);
  std::vector<Ciphertext> early;
  for (int i = 0; i < 1000; ++i) early.push_back(k.enc(sv(i)));
  std::atomic<bool> ok{true};
  std::vector<std::jthread> readers;
  for (int t = 0; t < 4; ++t)
    readers.emplace_back([&] {
      for (int rep = 0; rep < 20; ++rep)
        for (int i = 0; i < 1000; ++i)
          if (k.dec(early[i]) != sv(i)) ok = false;
    });
  for (int i = 0; i < 5000; ++i) k.he_op(Op::Add, early[i % 1000], early[(i + 1) % 1000]);
  readers.clear();
  CHECK(ok);
  CHECK(k.size() == 6000);
}

TEST_CASE("selector key files") {
  SelectorKey key{42, {{SelectorId{0}, false}, {SelectorId{1}, true}, {SelectorId{2}, true}, {SelectorId{3}, false}}};
  const auto text = format_selector_key(key);
  CHECK(text == "seed 42\nsel s0 = 0\nsel s1 = 1\nsel s2 = 1\nsel s3 = 0\n");
  CHECK(parse_selector_key(text) == key);
  CHECK_THROWS_AS(parse_selector_key("sel s0 = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_selector_key("seed 1\nsel s0 = 2\n"), ParseError);
  CHECK_THROWS_AS(parse_selector_key("seed 1\nsel s0 = 1\nsel s0 = 0\n"), ParseError);

  const auto p = parse_program(
      "prime 2305843009213693951\ninput a\nt0 := MUL a a\nt1 := ADD a a\nt2 := COMBINE (s0,t0) (s1,t1)\n"
      "t3 := COMBINE (s2,t2) (s3,t0)\n");
  CHECK_NOTHROW(check_selector_key(key, p));
  auto twoHot = key;
  twoHot.bits[SelectorId{0}] = true;
  CHECK_THROWS_AS(check_selector_key(twoHot, p), Error);
  auto missing = key;
  missing.bits.erase(SelectorId{3});
  CHECK_THROWS_AS(check_selector_key(missing, p), Error);
}
