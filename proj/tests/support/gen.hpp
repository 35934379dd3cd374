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

// Random program generators shared by the test binaries.

#include <cstdint>
#include <vector>

#include "selectc/interp.hpp"
#include "selectc/ir.hpp"
#include "selectc/patterns.hpp"
#include "selectc/rng.hpp"
#include "selectc/surface.hpp"

namespace selectc::testing {

struct SurfaceGenOptions {
  std::size_t maxStatements = 8;  // counted across all nesting levels
  std::uint32_t maxArray = 4;
  std::uint32_t maxBound = 4;
  std::size_t maxDepth = 2;       // block nesting
  std::size_t maxExprDepth = 2;
};

surface::SurfaceProgram random_surface(Rng& rng, const SurfaceGenOptions& opt = {});

/// Plain three-address program: `inputs` inputs x<i>, `constants` small
/// constants k<i>, `n` Assigns over previously defined variables.
Program random_program(Rng& rng, std::size_t n, std::size_t inputs = 2, std::size_t constants = 2,
                       const std::vector<Op>& ops = {kAllOps.begin(), kAllOps.end()});

/// Mostly small signed values, sometimes full-range field elements.
Value random_value(Rng& rng);

Bindings random_inputs(Rng& rng, const std::vector<VariableId>& inputs);
Bindings random_inputs(Rng& rng, const std::vector<std::string>& inputs);

/// Random expression-tree corpus of at least `targetNodes` nodes. `expected`
/// is tallied while generating, independently of the miner.
struct SyntheticCorpus {
  std::vector<ExprTree> trees;
  PatternTable expected;
  std::size_t nodes = 0;

  explicit SyntheticCorpus(std::uint64_t seed, std::size_t targetNodes = 500);

 private:
  ExprTree node(Rng& rng, int depth);
};

}  // namespace selectc::testing
