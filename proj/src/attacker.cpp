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

#include "selectc/attacker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "selectc/batch_eval.hpp"
#include "selectc/error.hpp"
#include "selectc/obfuscator.hpp"
#include "selectc/program_io.hpp"
#include "selectc/rng.hpp"

namespace selectc {
namespace {

constexpr std::size_t kChunk = 2048;
// Log-scores closer than this are treated as ties.
constexpr double kTieTolerance = 1e-9;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::int64_t> to_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  return std::nullopt;
}

/// Runs `work(chunkIndex)` for every chunk on a few threads.
template <class F>
void parallel_chunks(std::size_t chunks, F work) {
  const auto threads = std::max<std::size_t>(1, std::min<std::size_t>({chunks, 8, std::thread::hardware_concurrency()}));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMu;
  const auto body = [&] {
    for (auto c = next++; c < chunks; c = next++) {
      try {
        work(c);
      } catch (...) {
        std::lock_guard lock(failureMu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::vector<std::size_t> ClassDescriptor::choice(std::uint64_t index) const {
  std::vector<std::size_t> c(optionCounts.size());
  for (std::size_t i = optionCounts.size(); i-- > 0;) {
    c[i] = static_cast<std::size_t>(index % optionCounts[i]);
    index /= optionCounts[i];
  }
  return c;
}

std::uint64_t ClassDescriptor::index_of(const std::vector<std::size_t>& c) const {
  if (c.size() != optionCounts.size()) throw Error("key-mismatch", "choice has the wrong length");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < c.size(); ++i) index = index * optionCounts[i] + c[i];
  return index;
}

Program ClassDescriptor::candidate(std::uint64_t index) const { return fold(obfuscated, choice(index)); }

ClassDescriptor extract_class(const Program& obf) {
  validate(obf);
  ClassDescriptor cd;
  cd.obfuscated = obf;
  for (const auto& s : obf.statements)
    if (const auto* c = std::get_if<Combine>(&s)) {
      cd.optionCounts.push_back(c->options.size());
      cd.classSize *= c->options.size();
    }
  return cd;
}

void check_cap(const ClassDescriptor& cd, std::uint64_t cap) {
  if (cd.classSize > cap)
    throw Error("cap-exceeded", "class size " + cd.classSize.str() + " exceeds the enumeration cap " + std::to_string(cap));
}

std::vector<IoPair> parse_pairs(std::string_view text) {
  std::vector<IoPair> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) throw ParseError(lineNo, 1, "expected 'name=value,... -> value'");
    IoPair p;
    const auto lhs = line.substr(0, arrow);
    std::size_t start = 0;
    while (start <= lhs.size()) {
      auto end = lhs.find(',', start);
      if (end == std::string::npos) end = lhs.size();
      const auto item = trim(std::string_view(lhs).substr(start, end - start));
      start = end + 1;
      if (item.empty()) continue;
      const auto eq = item.find('=');
      const auto v = eq == std::string::npos ? std::nullopt : to_int(trim(std::string_view(item).substr(eq + 1)));
      if (!v) throw ParseError(lineNo, 1, "bad binding '" + item + "'");
      p.inputs[VariableId{trim(std::string_view(item).substr(0, eq))}] = Value::from_signed(*v);
    }
    const auto v = to_int(trim(std::string_view(line).substr(arrow + 2)));
    if (!v) throw ParseError(lineNo, arrow + 3, "bad output value");
    p.output = Value::from_signed(*v);
    out.push_back(std::move(p));
  }
  return out;
}

std::string format_pairs(const std::vector<IoPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    std::string lhs;
    for (const auto& [k, v] : p.inputs) lhs += (lhs.empty() ? "" : ",") + k.name + "=" + to_string(v);
    out += lhs + " -> " + to_string(p.output) + "\n";
  }
  return out;
}

std::vector<std::uint64_t> kpa_filter(const ClassDescriptor& cd, const std::vector<IoPair>& pairs, std::uint64_t cap) {
  check_cap(cd, cap);
  const auto total = cd.classSize.convert_to<std::uint64_t>();
  const BatchEvaluator eval(cd.obfuscated);

  // Selector columns are rebuilt per chunk: lane j selects option c_i(j).
  std::vector<std::vector<SelectorId>> selectors;
  for (const auto& s : cd.obfuscated.statements)
    if (const auto* c = std::get_if<Combine>(&s)) {
      selectors.emplace_back();
      for (const auto& o : c->options) selectors.back().push_back(o.selector);
    }
  std::vector<std::map<VariableId, BatchEvaluator::Column>> inputs;
  for (const auto& pair : pairs) {
    std::map<VariableId, BatchEvaluator::Column> cols;
    for (const auto& in : cd.obfuscated.inputs) {
      const auto it = pair.inputs.find(in);
      if (it == pair.inputs.end()) throw Error("unbound-variable", "pair has no value for input '" + in.name + "'");
      cols[in] = {it->second.rep()};
    }
    inputs.push_back(std::move(cols));
  }

  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<std::vector<std::uint64_t>> found(chunks);
  parallel_chunks(chunks, [&](std::size_t chunk) {
    const auto first = static_cast<std::uint64_t>(chunk) * kChunk;
    const auto lanes = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, total - first));
    std::map<SelectorId, BatchEvaluator::Column> sel;
    for (const auto& group : selectors)
      for (const auto& s : group) sel[s].assign(lanes, 0);
    for (std::size_t j = 0; j < lanes; ++j) {
      const auto c = cd.choice(first + j);
      for (std::size_t i = 0; i < c.size(); ++i) sel[selectors[i][c[i]]][j] = 1;
    }
    std::vector<bool> alive(lanes, true);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto out = eval.run(lanes, inputs[p], sel);
      for (std::size_t j = 0; j < lanes; ++j)
        if (out[j] != pairs[p].output.rep()) alive[j] = false;
    }
    for (std::size_t j = 0; j < lanes; ++j)
      if (alive[j]) found[chunk].push_back(first + j);
  });
  std::vector<std::uint64_t> survivors;
  for (const auto& f : found) survivors.insert(survivors.end(), f.begin(), f.end());
  return survivors;
}

std::vector<std::size_t> eliminated_options(const ClassDescriptor& cd, const std::vector<std::uint64_t>& survivors) {
  std::vector<std::set<std::size_t>> used(cd.optionCounts.size());
  for (auto idx : survivors) {
    const auto c = cd.choice(idx);
    for (std::size_t i = 0; i < c.size(); ++i) used[i].insert(c[i]);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < used.size(); ++i) out.push_back(cd.optionCounts[i] - used[i].size());
  return out;
}

double operator_frequency(const PatternTable& table, Op op) {
  const auto& counts = table.counts(Family::Operator);
  std::uint64_t smallest = 0;
  for (const auto& [k, n] : counts)
    if (n > 0 && (smallest == 0 || n < smallest)) smallest = n;
  const double u = smallest == 0 ? 1.0 : static_cast<double>(smallest);
  const double c = static_cast<double>(table.count(Family::Operator, std::string(op_pattern_name(op))));
  const double total = static_cast<double>(table.total(Family::Operator));
  return (c + u) / (total + u * static_cast<double>(kAllOps.size()));
}

std::vector<RankedCandidate> rank_candidates(const ClassDescriptor& cd, const PatternTable& table,
                                             const std::vector<std::uint64_t>& indices, std::uint64_t cap) {
  std::vector<std::uint64_t> all = indices;
  if (all.empty()) {
    check_cap(cd, cap);
    const auto total = cd.classSize.convert_to<std::uint64_t>();
    all.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
  } else if (all.size() > cap) {
    throw Error("cap-exceeded", std::to_string(all.size()) + " candidates exceed the enumeration cap " + std::to_string(cap));
  }
  std::array<double, kAllOps.size()> logf{};
  for (auto op : kAllOps) logf[static_cast<std::size_t>(op)] = std::log(operator_frequency(table, op));

  std::vector<RankedCandidate> out(all.size());
  const std::size_t chunks = (all.size() + kChunk - 1) / kChunk;
  parallel_chunks(chunks, [&](std::size_t chunk) {
    const auto end = std::min(all.size(), (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const auto p = cd.candidate(all[i]);
      double score = 0;
      for (const auto& s : p.statements)
        if (const auto* a = std::get_if<Assign>(&s)) score += logf[static_cast<std::size_t>(a->expr.op)];
      out[i].index = all[i];
      out[i].logScore = score;
      out[i].text = format_canonical(normalize(p));
    }
  });
  if (out.empty()) return out;

  std::stable_sort(out.begin(), out.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) { return a.logScore > b.logScore; });
  const double top = out.front().logScore;
  double z = 0;
  for (const auto& c : out) z += std::exp(c.logScore - top);
  for (std::size_t g = 0; g < out.size();) {
    std::size_t e = g + 1;
    while (e < out.size() && out[g].logScore - out[e].logScore <= kTieTolerance) ++e;
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(g), out.begin() + static_cast<std::ptrdiff_t>(e),
              [](const RankedCandidate& a, const RankedCandidate& b) {
                return a.text != b.text ? a.text < b.text : a.index < b.index;
              });
    // Tied candidates share the head's score so that they also share a probability.
    for (std::size_t i = g; i < e; ++i) {
      out[i].logScore = out[g].logScore;
      out[i].rank = e;
    }
    g = e;
  }
  for (auto& c : out) c.probability = std::exp(c.logScore - top) / z;
  return out;
}

std::uint64_t min_rank(const std::vector<RankedCandidate>& ranked, const std::vector<Program>& confidential) {
  std::set<std::string> wanted;
  for (const auto& p : confidential) wanted.insert(format_canonical(normalize(p)));
  for (const auto& c : ranked)
    if (wanted.contains(c.text)) return c.rank;  // ranked is sorted, the first hit is the best
  throw Error("not-in-class", "no confidential program is among the ranked candidates");
}

double class_quality(const std::vector<RankedCandidate>& ranked, const std::vector<Program>& confidential) {
  return quality_from_rank(min_rank(ranked, confidential));
}

std::string_view obf_strategy_name(ObfStrategy s) {
  return s == ObfStrategy::UniformMisleading ? "uniform" : "frequent";
}

std::string_view att_strategy_name(AttStrategy s) { return s == AttStrategy::Baseline ? "baseline" : "uniform"; }

std::optional<ObfStrategy> parse_obf_strategy(std::string_view s) {
  if (s == "uniform") return ObfStrategy::UniformMisleading;
  if (s == "frequent") return ObfStrategy::FrequentMisleading;
  return std::nullopt;
}

std::optional<AttStrategy> parse_att_strategy(std::string_view s) {
  if (s == "baseline") return AttStrategy::Baseline;
  if (s == "uniform") return AttStrategy::Uniform;
  return std::nullopt;
}

namespace {

void check_game(double pl, std::uint64_t n) {
  if (!(pl > 0.0 && pl < 1.0)) throw Error("invalid-argument", "p_l must lie strictly between 0 and 1");
  if (n < 2) throw Error("invalid-argument", "the game needs at least two statements");
}

}  // namespace

GameValue game_exact(double pl, std::uint64_t n, ObfStrategy obf, AttStrategy att) {
  check_game(pl, n);
  GameValue g;
  const double others = static_cast<double>(n - 1);
  if (att == AttStrategy::Uniform) {
    g.exact = 0.5;
  } else if (obf == ObfStrategy::FrequentMisleading) {
    // F shows up in every pair and the attacker always names it.
    g.exact = pl;
  } else {
    // s_C = F: always right. Otherwise M avoids F with probability
    // 1 - 1/(n-1) and the attacker flips a coin.
    g.exact = pl + (1.0 - pl) * (1.0 - 1.0 / others) * 0.5;
    g.approx = pl + (1.0 - pl) * (1.0 - 1.0 / static_cast<double>(n)) * 0.5;
  }
  return g;
}

double game_simulate(double pl, std::uint64_t n, std::uint64_t trials, std::uint64_t seed, ObfStrategy obf,
                     AttStrategy att) {
  check_game(pl, n);
  if (trials == 0) throw Error("invalid-argument", "trials must be positive");
  Rng rng(seed);
  std::uint64_t correct = 0;
  // Statement 0 is F; statements 1..n-1 share the remaining mass.
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t truth = rng.bernoulli(pl) ? 0 : 1 + rng.uniform(n - 1);
    std::uint64_t decoy;
    if (obf == ObfStrategy::FrequentMisleading && truth != 0) {
      decoy = 0;
    } else {
      decoy = rng.uniform(n - 1);
      if (decoy >= truth) ++decoy;
    }
    std::uint64_t guess;
    if (att == AttStrategy::Baseline && (truth == 0 || decoy == 0)) {
      guess = 0;
    } else {
      guess = rng.bernoulli(0.5) ? truth : decoy;
    }
    correct += guess == truth ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(trials);
}

std::string format_report(const AttackReport& r, std::size_t top, bool timing) {
  std::string out;
  out += "class_size = " + r.classSize.str() + "\n";
  out += "enumerated = " + std::to_string(r.enumerated) + "\n";
  out += "survivors = " + (r.survivors ? std::to_string(*r.survivors) : std::string("n/a")) + "\n";
  out += "min_rank = " + (r.minRank ? std::to_string(*r.minRank) : std::string("n/a")) + "\n";
  out += "quality = " + (r.quality ? fmt("%.6f", *r.quality) : std::string("n/a")) + "\n";
  if (timing) out += "time_ms = " + fmt("%.1f", r.millis) + "\n";
  for (std::size_t i = 0; i < std::min(top, r.ranked.size()); ++i) {
    const auto& c = r.ranked[i];
    out += "candidate " + std::to_string(i + 1) + " | index=" + std::to_string(c.index) + " | p=" + fmt("%.6g", c.probability) + " | rank=" +
           std::to_string(c.rank) + " | " + c.text + "\n";
  }
  return out;
}

}  // namespace selectc
