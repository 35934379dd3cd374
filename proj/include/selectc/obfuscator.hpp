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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selectc/crypto.hpp"
#include "selectc/ir.hpp"
#include "selectc/patterns.hpp"
#include "selectc/rng.hpp"

namespace selectc {

inline constexpr std::uint64_t kDefaultSeed = 20170;

enum class Strategy : std::uint8_t { Uniform, PatternAware, OperandOnly, OperationOnly, CombinedTemporaries };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);

struct ObfuscationConfig {
  /// Options per combining statement.
  std::size_t k = 2;
  /// Options per operand slot under combined-temporaries; 0 means k.
  std::size_t operandK = 0;
  /// Extra variables bound to pseudorandom nonzero constants.
  std::vector<std::string> fakeVars;
  std::vector<Op> ops{kAllOps.begin(), kAllOps.end()};
  /// Whole combining statements made only of misleading options.
  std::size_t fakeCombining = 0;
  Strategy strategy = Strategy::Uniform;
  std::optional<PatternTable> patternTable;
  std::uint64_t seed = kDefaultSeed;
  bool seedGiven = false;  // set when a config file names the seed
  /// Apply the built-in uniformization rules first.
  bool uniformize = false;
  /// Rename all constants, real and fake, to c<i> in random order.
  bool hideNames = true;

  std::size_t operand_options() const { return operandK == 0 ? k : operandK; }
};

/// Throws Error("invalid-config").
void check_config(const ObfuscationConfig& cfg);

/// `key = value` lines. Keys: k, operand_k, fake_vars (a count or a comma
/// list of names), ops (comma list of mnemonics), fake_combining, strategy,
/// pattern_table (path, relative to `baseDir`), seed, uniformize, hide_names.
ObfuscationConfig parse_config(std::string_view text, const std::filesystem::path& baseDir = {});

/// Misleading choices for one statement.
struct StatementPlan {
  /// Whole-statement strategies: the k-1 misleading expressions.
  std::vector<SimpleExpression> misleading;
  /// Combined-temporaries: candidates per slot, the real one first.
  std::vector<VariableId> in1;
  std::vector<VariableId> in2;
  std::vector<Op> ops;

  bool slotted() const { return !ops.empty(); }
};

/// Draws misleading alternatives for `s` from `pool` (variables defined
/// before `s`). Throws Error("pool-exhausted") when the strategy cannot
/// produce enough distinct options that differ from `s`.
StatementPlan gen_misleading(const Assign& s, const std::vector<VariableId>& pool,
                             const std::map<VariableId, Value>& constants, const ObfuscationConfig& cfg, Rng& rng);

/// The k-1 misleading statements for `s` under a whole-statement strategy.
std::vector<SimpleExpression> gen_misleading_statements(const Assign& s, const std::vector<VariableId>& pool,
                                                        const ObfuscationConfig& cfg, Rng& rng);

struct Obfuscated {
  Program program;
  SelectorKey key;
};

/// Replaces every Assign by misleading siblings plus a Combine over them.
/// `p` must be Combine-free.
Obfuscated obfuscate_statement_level(const Program& p, const ObfuscationConfig& cfg);

/// Explicit per-statement plans (used by the L0 demo). Statements without a
/// plan are copied unchanged.
Obfuscated obfuscate_with_plans(const Program& p, const std::map<std::size_t, StatementPlan>& plans,
                                const ObfuscationConfig& cfg);

/// Runs every program in a seeded order and selects the result of
/// `ps[iStar]` with a final Combine. The order depends only on `seed` and
/// `ps.size()`.
Obfuscated obfuscate_program_level(const std::vector<Program>& ps, std::size_t iStar, std::uint64_t seed);

/// Runs `p` on ciphertexts. Constants and selector bits are encrypted with
/// `key`; every statement executes.
Ciphertext eval_encrypted(const Program& p, SecretKey& key, const SelectorKey& sel,
                          const std::map<VariableId, Ciphertext>& encInputs);

/// Candidate selected by `choice` (one option index per Combine, in
/// statement order): Combines become aliases of the chosen source and
/// option statements that were not chosen disappear.
Program fold(const Program& obf, const std::vector<std::size_t>& choice);

/// Dead-code elimination from the output, then canonical names: constants
/// c<i> and targets t<i> in order of first use.
Program normalize(const Program& p);

/// Folds with the key's selectors and normalizes. Throws Error("key-mismatch").
Program deobfuscate(const Program& obf, const SelectorKey& key);

/// Option index chosen by the key in each Combine.
std::vector<std::size_t> key_choice(const Program& obf, const SelectorKey& key);

}  // namespace selectc
