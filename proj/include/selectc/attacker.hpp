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

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selectc/interp.hpp"
#include "selectc/ir.hpp"
#include "selectc/patterns.hpp"

namespace selectc {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// The candidate programs an obfuscated program could stand for: one option
/// per combining statement, read off the public structure.
struct ClassDescriptor {
  Program obfuscated;
  std::vector<std::size_t> optionCounts;  // per Combine, in statement order
  BigInt classSize = 1;

  /// Mixed-radix decoding; the first Combine varies slowest.
  std::vector<std::size_t> choice(std::uint64_t index) const;
  std::uint64_t index_of(const std::vector<std::size_t>& choice) const;
  Program candidate(std::uint64_t index) const;
};

ClassDescriptor extract_class(const Program& obf);

/// Throws Error("cap-exceeded") naming the class size.
void check_cap(const ClassDescriptor& cd, std::uint64_t cap);

struct IoPair {
  Bindings inputs;
  Value output;
};

/// Lines `x=3,y=2 -> 9`; `#` comments.
std::vector<IoPair> parse_pairs(std::string_view text);
std::string format_pairs(const std::vector<IoPair>& pairs);

/// Indices of the candidates that agree with every pair.
std::vector<std::uint64_t> kpa_filter(const ClassDescriptor& cd, const std::vector<IoPair>& pairs,
                                      std::uint64_t cap = kDefaultEnumerationCap);

/// Per-Combine count of options that no surviving candidate uses.
std::vector<std::size_t> eliminated_options(const ClassDescriptor& cd, const std::vector<std::uint64_t>& survivors);

struct RankedCandidate {
  std::uint64_t index = 0;
  double logScore = 0;
  double probability = 0;
  /// Candidates scoring at least as high, this one and its ties included.
  std::uint64_t rank = 0;
  std::string text;  // format_canonical of the normalized candidate
};

/// Smoothed operator frequency (c + u) / (T + 10u) with u the smallest
/// positive count in the table (1 for an empty table). Scaling every count
/// by the same factor leaves it unchanged.
double operator_frequency(const PatternTable& table, Op op);

/// Scores candidates by the product of their statements' operator
/// frequencies; probabilities are normalized over `indices` (all candidates
/// when empty). Sorted by probability, ties by serialization.
std::vector<RankedCandidate> rank_candidates(const ClassDescriptor& cd, const PatternTable& table,
                                             const std::vector<std::uint64_t>& indices = {},
                                             std::uint64_t cap = kDefaultEnumerationCap);

/// 1 - 1/r for the best-ranked program of `confidential` (compared after
/// normalization). Throws Error("not-in-class") if none is ranked.
double class_quality(const std::vector<RankedCandidate>& ranked, const std::vector<Program>& confidential);
std::uint64_t min_rank(const std::vector<RankedCandidate>& ranked, const std::vector<Program>& confidential);
inline double quality_from_rank(std::uint64_t r) { return 1.0 - 1.0 / static_cast<double>(r); }

// --- statement guessing game ---

enum class ObfStrategy : std::uint8_t { UniformMisleading, FrequentMisleading };
enum class AttStrategy : std::uint8_t { Baseline, Uniform };

std::string_view obf_strategy_name(ObfStrategy s);
std::string_view att_strategy_name(AttStrategy s);
std::optional<ObfStrategy> parse_obf_strategy(std::string_view s);
std::optional<AttStrategy> parse_att_strategy(std::string_view s);

struct GameValue {
  double exact = 0;
  /// The commonly quoted approximation p_l + (1 - p_l)(1 - 1/n)/2, defined for the
  /// baseline pairing only.
  std::optional<double> approx;
};

/// Throws Error("invalid-argument") unless 0 < p_l < 1 and n >= 2.
GameValue game_exact(double pl, std::uint64_t n, ObfStrategy obf = ObfStrategy::UniformMisleading,
                     AttStrategy att = AttStrategy::Baseline);

double game_simulate(double pl, std::uint64_t n, std::uint64_t trials, std::uint64_t seed,
                     ObfStrategy obf = ObfStrategy::UniformMisleading, AttStrategy att = AttStrategy::Baseline);

// --- report ---

struct AttackReport {
  BigInt classSize;
  std::uint64_t enumerated = 0;
  std::optional<std::uint64_t> survivors;
  std::vector<RankedCandidate> ranked;
  std::optional<std::uint64_t> minRank;
  std::optional<double> quality;
  double millis = 0;
};

/// Timing is off by default so that reports are reproducible byte for byte.
std::string format_report(const AttackReport& r, std::size_t top = 10, bool timing = false);

}  // namespace selectc
