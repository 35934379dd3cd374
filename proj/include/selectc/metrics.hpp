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
#include <optional>
#include <string>
#include <vector>

#include "selectc/attacker.hpp"
#include "selectc/crypto.hpp"
#include "selectc/ir.hpp"

namespace selectc {

struct ProgramCounts {
  std::size_t statements = 0;
  std::size_t operations = 0;  // Assign statements
  std::size_t combines = 0;
  std::size_t variables = 0;   // inputs, constants and targets
};

ProgramCounts count_program(const Program& p);

struct MetricsReport {
  ProgramCounts original;
  ProgramCounts obfuscated;
  std::size_t misleadMin = 0;
  double misleadMean = 0;
  std::size_t misleadMax = 0;
  double staticOverhead = 0;
  double combineRatio = 0;
  /// Encrypted over plaintext evaluation time on the mock backend.
  std::optional<double> dynamicOverhead;
  std::size_t samples = 0;
  /// Total variation distance between the operators of selected and of
  /// discarded options; needs the key. Informational only.
  std::optional<double> stealthDistance;
  std::optional<double> potencyReduction;
};

/// Static figures always; timing over `evalSamples` runs on identical
/// random inputs when evalSamples > 0. `key` may be null.
MetricsReport measure(const Program& p, const Program& obf, std::size_t evalSamples, std::uint64_t seed,
                      const SelectorKey* key = nullptr);

/// Mean over Combines of eliminated / (options - 1). Throws
/// Error("invalid-argument") on a length mismatch or too many eliminations.
double potency_reduction(const ClassDescriptor& cd, const std::vector<std::size_t>& eliminated);

/// `name = value` lines.
std::string format_metrics(const MetricsReport& m);

}  // namespace selectc
