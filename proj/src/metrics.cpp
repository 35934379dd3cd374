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

#include "selectc/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "selectc/error.hpp"
#include "selectc/interp.hpp"
#include "selectc/obfuscator.hpp"
#include "selectc/rng.hpp"

namespace selectc {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::optional<double> stealth(const Program& obf, const SelectorKey& key) {
  std::map<VariableId, Op> opOf;
  for (const auto& s : obf.statements)
    if (const auto* a = std::get_if<Assign>(&s)) opOf[a->target] = a->expr.op;
  std::map<Op, double> real, decoy;
  double nReal = 0, nDecoy = 0;
  for (const auto& s : obf.statements) {
    const auto* c = std::get_if<Combine>(&s);
    if (!c) continue;
    for (const auto& o : c->options) {
      const auto op = opOf.find(o.source);
      if (op == opOf.end()) continue;  // operand slots select variables, not operations
      if (key.bits.at(o.selector)) {
        real[op->second] += 1;
        nReal += 1;
      } else {
        decoy[op->second] += 1;
        nDecoy += 1;
      }
    }
  }
  if (nReal == 0 || nDecoy == 0) return std::nullopt;
  double d = 0;
  for (auto op : kAllOps) d += std::abs(real[op] / nReal - decoy[op] / nDecoy);
  return d / 2;
}

}  // namespace

ProgramCounts count_program(const Program& p) {
  ProgramCounts c;
  c.statements = p.statements.size();
  c.combines = p.combine_count();
  c.operations = c.statements - c.combines;
  c.variables = p.inputs.size() + p.constants.size() + p.statements.size();
  return c;
}

MetricsReport measure(const Program& p, const Program& obf, std::size_t evalSamples, std::uint64_t seed,
                      const SelectorKey* key) {
  validate(p);
  validate(obf);
  if (p.statements.empty()) throw Error("invalid-program", "original program is empty");
  MetricsReport m;
  m.original = count_program(p);
  m.obfuscated = count_program(obf);
  m.staticOverhead = static_cast<double>(m.obfuscated.statements) / static_cast<double>(m.original.statements);
  m.combineRatio = static_cast<double>(m.obfuscated.combines) / static_cast<double>(m.obfuscated.statements);
  const auto cd = extract_class(obf);
  if (!cd.optionCounts.empty()) {
    m.misleadMin = *std::min_element(cd.optionCounts.begin(), cd.optionCounts.end());
    m.misleadMax = *std::max_element(cd.optionCounts.begin(), cd.optionCounts.end());
    double sum = 0;
    for (auto n : cd.optionCounts) sum += static_cast<double>(n);
    m.misleadMean = sum / static_cast<double>(cd.optionCounts.size());
  }
  if (key) {
    check_selector_key(*key, obf);
    m.stealthDistance = stealth(obf, *key);
  }
  if (evalSamples == 0) return m;

  // Any one-hot key costs the same to evaluate.
  SelectorKey sel;
  if (key) {
    sel = *key;
  } else {
    for (const auto& s : obf.statements)
      if (const auto* c = std::get_if<Combine>(&s))
        for (std::size_t i = 0; i < c->options.size(); ++i) sel.bits[c->options[i].selector] = i == 0;
  }
  Rng rng(seed);
  Bindings inputs;
  for (const auto& in : p.inputs) inputs[in] = Value::from_signed(static_cast<std::int64_t>(rng.uniform(201)) - 100);
  for (const auto& in : obf.inputs)
    if (!inputs.contains(in)) inputs[in] = Value::from_signed(static_cast<std::int64_t>(rng.uniform(201)) - 100);

  using Clock = std::chrono::steady_clock;
  volatile std::uint64_t sink = 0;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < evalSamples; ++i) sink = sink + eval_plain(p, inputs).rep();
  const auto t1 = Clock::now();
  for (std::size_t i = 0; i < evalSamples; ++i) {
    SecretKey k(seed + i);
    std::map<VariableId, Ciphertext> enc;
    for (const auto& in : obf.inputs) enc[in] = k.enc(inputs.at(in));
    sink = sink + k.dec(eval_encrypted(obf, k, sel, enc)).rep();
  }
  const auto t2 = Clock::now();
  const double plain = std::chrono::duration<double>(t1 - t0).count();
  const double encrypted = std::chrono::duration<double>(t2 - t1).count();
  m.samples = evalSamples;
  m.dynamicOverhead = encrypted / std::max(plain, 1e-9);
  return m;
}

double potency_reduction(const ClassDescriptor& cd, const std::vector<std::size_t>& eliminated) {
  if (eliminated.size() != cd.optionCounts.size())
    throw Error("invalid-argument", "expected " + std::to_string(cd.optionCounts.size()) + " elimination counts");
  if (cd.optionCounts.empty()) return 0.0;
  double sum = 0;
  for (std::size_t i = 0; i < eliminated.size(); ++i) {
    const auto options = cd.optionCounts[i];
    if (options < 2) throw Error("invalid-argument", "combining statement with fewer than two options");
    if (eliminated[i] > options - 1)
      throw Error("invalid-argument", "more options eliminated than there are misleading ones");
    sum += static_cast<double>(eliminated[i]) / static_cast<double>(options - 1);
  }
  return sum / static_cast<double>(eliminated.size());
}

std::string format_metrics(const MetricsReport& m) {
  std::string out;
  const auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  line("statements.original", std::to_string(m.original.statements));
  line("statements.obfuscated", std::to_string(m.obfuscated.statements));
  line("combining_statements", std::to_string(m.obfuscated.combines));
  line("mislead_factor.min", std::to_string(m.misleadMin));
  line("mislead_factor.mean", fmt("%.4f", m.misleadMean));
  line("mislead_factor.max", std::to_string(m.misleadMax));
  line("overhead.static", fmt("%.4f", m.staticOverhead));
  if (m.dynamicOverhead) {
    line("overhead.dynamic_mock_backend", fmt("%.2f", *m.dynamicOverhead));
    line("overhead.dynamic_samples", std::to_string(m.samples));
  }
  line("potency.operations.original", std::to_string(m.original.operations));
  line("potency.operations.obfuscated", std::to_string(m.obfuscated.operations));
  line("potency.variables.original", std::to_string(m.original.variables));
  line("potency.variables.obfuscated", std::to_string(m.obfuscated.variables));
  line("potency.combine_ratio", fmt("%.4f", m.combineRatio));
  if (m.potencyReduction) line("potency_reduction", fmt("%.4f", *m.potencyReduction));
  if (m.stealthDistance) line("stealth_proxy.operator_tvd", fmt("%.4f", *m.stealthDistance));
  return out;
}

}  // namespace selectc
