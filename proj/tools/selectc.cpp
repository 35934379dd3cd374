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

// Command-line front end. Exit codes: 0 success, 1 usage, 2 domain error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "selectc/attacker.hpp"
#include "selectc/crypto.hpp"
#include "selectc/demo.hpp"
#include "selectc/error.hpp"
#include "selectc/lower.hpp"
#include "selectc/metrics.hpp"
#include "selectc/obfuscator.hpp"
#include "selectc/patterns.hpp"
#include "selectc/program_io.hpp"
#include "selectc/surface.hpp"

namespace fs = std::filesystem;
using namespace selectc;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("io", "cannot write '" + path + "'");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

/// A lowered program file is taken as is; anything else is parsed as surface
/// code and lowered.
Program load_program(const std::string& path) {
  const auto text = read_file(path);
  if (looks_like_program(text)) return parse_program(text);
  return lower(surface::parse_surface(text));
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const std::optional<std::uint64_t>& config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("SELECTC_SEED")) {
    try {
      std::size_t used = 0;
      const std::string s(env);
      const auto v = std::stoull(s, &used);
      if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw Error("invalid-argument", "SELECTC_SEED is not a non-negative integer");
  }
  return kDefaultSeed;
}

Bindings parse_inputs(const std::string& text) {
  const auto pairs = parse_pairs(text + " -> 0");
  return pairs.empty() ? Bindings{} : pairs[0].inputs;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Obfuscation by combining statements under encrypted selectors"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;

  // lower
  auto* lowerCmd = app.add_subcommand("lower", "Lower a surface program to three-address code");
  std::string lowerSrc, lowerOut;
  lowerCmd->add_option("src", lowerSrc, "Surface program")->required();
  lowerCmd->add_option("-o,--output", lowerOut, "Output file (default stdout)");

  // obfuscate
  auto* obfCmd = app.add_subcommand("obfuscate", "Obfuscate a program at statement level");
  std::string obfSrc, obfConfig, obfOut, obfKey;
  obfCmd->add_option("src", obfSrc, "Surface or lowered program")->required();
  obfCmd->add_option("--config", obfConfig, "Obfuscation config");
  obfCmd->add_option("-o,--output", obfOut, "Obfuscated program (default stdout)");
  obfCmd->add_option("--key", obfKey, "Selector key file")->required();
  obfCmd->add_option("--seed", seed, "Random seed");

  // run
  auto* runCmd = app.add_subcommand("run", "Evaluate an obfuscated program on encrypted inputs");
  std::string runObf, runKey, runInputs;
  runCmd->add_option("obf", runObf, "Obfuscated program")->required();
  runCmd->add_option("--key", runKey, "Selector key file")->required();
  runCmd->add_option("--inputs", runInputs, "Inputs as name=value,...");

  // deobfuscate
  auto* deobfCmd = app.add_subcommand("deobfuscate", "Recover the program selected by a key");
  std::string deobfObf, deobfKey, deobfOut;
  deobfCmd->add_option("obf", deobfObf, "Obfuscated program")->required();
  deobfCmd->add_option("--key", deobfKey, "Selector key file")->required();
  deobfCmd->add_option("-o,--output", deobfOut, "Output file (default stdout)");

  // mine
  auto* mineCmd = app.add_subcommand("mine", "Mine pattern frequencies from expression trees");
  std::vector<std::string> mineFiles;
  std::string mineOut, mineExport;
  mineCmd->add_option("trees", mineFiles, "Tree files or surface programs")->required();
  mineCmd->add_option("-o,--output", mineOut, "Pattern table of all inputs (default stdout)");
  mineCmd->add_option("--export", mineExport, "Per-file aggregate table (mean/std across files)");

  // attack
  auto* attackCmd = app.add_subcommand("attack", "Enumerate, filter and rank the program class");
  std::string attackObf, attackPairs, attackTable, attackKey;
  std::uint64_t attackCap = kDefaultEnumerationCap;
  std::size_t attackTop = 10;
  bool attackTiming = false;
  attackCmd->add_option("obf", attackObf, "Obfuscated program")->required();
  attackCmd->add_option("--pairs", attackPairs, "Known input/output pairs");
  attackCmd->add_option("--table", attackTable, "Pattern table for ranking (default uniform)");
  attackCmd->add_option("--key", attackKey, "Selector key, to report the confidential program's rank");
  attackCmd->add_option("--cap", attackCap, "Enumeration cap");
  attackCmd->add_option("--top", attackTop, "Ranked candidates to print");
  attackCmd->add_flag("--timing", attackTiming, "Report elapsed time");

  // metrics
  auto* metricsCmd = app.add_subcommand("metrics", "Report obfuscation metrics");
  std::string metricsSrc, metricsObf, metricsKey, metricsPairs;
  std::size_t metricsSamples = 0;
  metricsCmd->add_option("src", metricsSrc, "Original program")->required();
  metricsCmd->add_option("obf", metricsObf, "Obfuscated program")->required();
  metricsCmd->add_option("--key", metricsKey, "Selector key (enables the stealth proxy)");
  metricsCmd->add_option("--pairs", metricsPairs, "Known pairs (enables potency reduction via KPA)");
  metricsCmd->add_option("--samples", metricsSamples, "Timing runs for the dynamic overhead (0 = skip)");
  metricsCmd->add_option("--seed", seed, "Random seed for timing inputs");

  // game
  auto* gameCmd = app.add_subcommand("game", "Statement guessing game");
  double gamePl = 0;
  std::uint64_t gameN = 0, gameTrials = 100000;
  std::string gameObf = "uniform", gameAtt = "baseline";
  gameCmd->add_option("--pl", gamePl, "Probability of the frequent statement")->required();
  gameCmd->add_option("--n", gameN, "Number of distinct statements")->required();
  gameCmd->add_option("--trials", gameTrials, "Monte-Carlo trials (0 = skip)");
  gameCmd->add_option("--obf", gameObf, "Obfuscator strategy: uniform | frequent");
  gameCmd->add_option("--att", gameAtt, "Attacker strategy: baseline | uniform");
  gameCmd->add_option("--seed", seed, "Random seed");

  // demo
  auto* demoCmd = app.add_subcommand("demo", "Write the division-guard demo at level l0 or l1");
  std::string demoLevel, demoDir = ".";
  demoCmd->add_option("level", demoLevel, "l0 or l1")->required();
  demoCmd->add_option("-o,--output", demoDir, "Output directory");
  demoCmd->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*lowerCmd) {
      emit(lowerOut, format_program(load_program(lowerSrc)));
    } else if (*obfCmd) {
      ObfuscationConfig cfg;
      if (!obfConfig.empty()) cfg = parse_config(read_file(obfConfig), fs::path(obfConfig).parent_path());
      cfg.seed = resolve_seed(seed, cfg.seedGiven ? std::optional(cfg.seed) : std::nullopt);
      const auto out = obfuscate_statement_level(load_program(obfSrc), cfg);
      emit(obfOut, format_program(out.program));
      write_file(obfKey, format_selector_key(out.key));
    } else if (*runCmd) {
      const auto p = parse_program(read_file(runObf));
      const auto sel = parse_selector_key(read_file(runKey));
      check_selector_key(sel, p);
      const auto inputs = parse_inputs(runInputs);
      SecretKey key(sel.seed);
      std::map<VariableId, Ciphertext> enc;
      for (const auto& in : p.inputs) {
        const auto it = inputs.find(in);
        if (it == inputs.end()) throw Error("unbound-variable", "no value for input '" + in.name + "'");
        enc[in] = key.enc(it->second);
      }
      std::cout << to_string(key.dec(eval_encrypted(p, key, sel, enc))) << "\n";
    } else if (*deobfCmd) {
      const auto p = parse_program(read_file(deobfObf));
      emit(deobfOut, format_program(deobfuscate(p, parse_selector_key(read_file(deobfKey)))));
    } else if (*mineCmd) {
      std::vector<PatternTable> tables;
      for (const auto& f : mineFiles) {
        const auto text = read_file(f);
        std::vector<ExprTree> trees;
        try {
          trees = parse_trees(text);
        } catch (const ParseError& treeError) {
          try {
            trees = surface_to_trees(surface::parse_surface(text));
          } catch (const ParseError&) {
            throw Error("parse", f + ": " + treeError.what());
          }
        }
        tables.push_back(mine(trees));
      }
      PatternTable all;
      for (const auto& t : tables) all.merge(t);
      emit(mineOut, format_table(all));
      if (!mineExport.empty()) emit(mineExport, export_table(aggregate(tables)));
    } else if (*attackCmd) {
      const auto start = std::chrono::steady_clock::now();
      const auto obf = parse_program(read_file(attackObf));
      const auto cd = extract_class(obf);
      AttackReport report;
      report.classSize = cd.classSize;
      if (cd.classSize > attackCap) {
        std::cout << "class_size = " << cd.classSize.str() << "\n";
        check_cap(cd, attackCap);
      }
      PatternTable table;
      if (!attackTable.empty()) table = parse_table(read_file(attackTable));
      std::vector<std::uint64_t> survivors;
      report.enumerated = cd.classSize.convert_to<std::uint64_t>();
      if (!attackPairs.empty()) {
        survivors = kpa_filter(cd, parse_pairs(read_file(attackPairs)), attackCap);
        report.survivors = survivors.size();
        if (!survivors.empty()) report.ranked = rank_candidates(cd, table, survivors, attackCap);
      } else {
        report.ranked = rank_candidates(cd, table, {}, attackCap);
      }
      if (!attackKey.empty()) {
        const auto sel = parse_selector_key(read_file(attackKey));
        try {
          report.minRank = min_rank(report.ranked, {deobfuscate(obf, sel)});
          report.quality = quality_from_rank(*report.minRank);
        } catch (const Error& e) {
          if (e.kind() != "not-in-class") throw;
        }
      }
      report.millis =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      std::cout << format_report(report, attackTop, attackTiming);
      if (report.survivors)
        std::cout << "potency_reduction = " << fmt("%.4f", potency_reduction(cd, eliminated_options(cd, survivors)))
                  << "\n";
    } else if (*metricsCmd) {
      const auto p = load_program(metricsSrc);
      const auto obf = parse_program(read_file(metricsObf));
      std::optional<SelectorKey> sel;
      if (!metricsKey.empty()) sel = parse_selector_key(read_file(metricsKey));
      auto m = measure(p, obf, metricsSamples, resolve_seed(seed, std::nullopt), sel ? &*sel : nullptr);
      if (!metricsPairs.empty()) {
        const auto cd = extract_class(obf);
        m.potencyReduction =
            potency_reduction(cd, eliminated_options(cd, kpa_filter(cd, parse_pairs(read_file(metricsPairs)))));
      }
      std::cout << format_metrics(m);
    } else if (*gameCmd) {
      const auto obf = parse_obf_strategy(gameObf);
      const auto att = parse_att_strategy(gameAtt);
      if (!obf) throw Error("invalid-argument", "unknown obfuscator strategy '" + gameObf + "'");
      if (!att) throw Error("invalid-argument", "unknown attacker strategy '" + gameAtt + "'");
      const auto g = game_exact(gamePl, gameN, *obf, *att);
      std::cout << "exact = " << fmt("%.4g", g.exact) << "\n";
      if (g.approx) std::cout << "approximation = " << fmt("%.4g", *g.approx) << "\n";
      if (gameTrials > 0) {
        const auto est = game_simulate(gamePl, gameN, gameTrials, resolve_seed(seed, std::nullopt), *obf, *att);
        std::cout << "simulated = " << fmt("%.6f", est) << "\n";
        std::cout << "trials = " << gameTrials << "\n";
        std::cout << "three_sigma = " << fmt("%.6f", 3 * std::sqrt(g.exact * (1 - g.exact) / gameTrials)) << "\n";
      }
    } else if (*demoCmd) {
      const auto d = make_demo(demoLevel, resolve_seed(seed, std::nullopt));
      fs::create_directories(demoDir);
      const auto base = (fs::path(demoDir) / d.level).string();
      write_file(base + ".src", d.source);
      write_file(base + ".tac", format_program(d.lowered));
      if (d.configText) write_file(base + ".cfg", *d.configText);
      write_file(base + ".obf", format_program(d.obf.program));
      write_file(base + ".key", format_selector_key(d.obf.key));
      std::cout << "level = " << d.level << "\n";
      std::cout << "class_size = " << extract_class(d.obf.program).classSize.str() << "\n";
      std::cout << "files = " << base << ".{src,tac," << (d.configText ? "cfg," : "") << "obf,key}\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
