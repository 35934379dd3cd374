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

#include "selectc/crypto.hpp"

#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>

#include "selectc/error.hpp"

namespace selectc {

std::string Ciphertext::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(handle[0]),
                static_cast<unsigned long long>(handle[1]));
  return buf;
}

// The seed is mixed so that small consecutive seeds start far apart.
SecretKey::SecretKey(std::uint64_t seed) : seed_(seed), rng_(seed * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL) {}

Ciphertext SecretKey::issue(Value v) {
  Ciphertext c;
  do {
    c.handle = {rng_.next(), rng_.next()};
  } while (store_.contains(c.handle));
  store_.emplace(c.handle, v);
  return c;
}

Value SecretKey::lookup(const Ciphertext& c) const {
  const auto it = store_.find(c.handle);
  if (it == store_.end()) throw Error("foreign-ciphertext", "handle " + c.hex() + " was not issued by this key");
  return it->second;
}

Ciphertext SecretKey::enc(Value v) {
  std::unique_lock lock(mu_);
  return issue(v);
}

Value SecretKey::dec(const Ciphertext& c) const {
  std::shared_lock lock(mu_);
  return lookup(c);
}

Ciphertext SecretKey::he_op(Op op, const Ciphertext& a, const Ciphertext& b) {
  std::unique_lock lock(mu_);
  return issue(apply(op, lookup(a), lookup(b)));
}

std::size_t SecretKey::size() const {
  std::shared_lock lock(mu_);
  return store_.size();
}

std::string format_selector_key(const SelectorKey& k) {
  std::ostringstream out;
  out << "seed " << k.seed << "\n";
  for (const auto& [s, b] : k.bits) out << "sel " << s.str() << " = " << (b ? 1 : 0) << "\n";
  return out.str();
}

SelectorKey parse_selector_key(std::string_view text) {
  SelectorKey k;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  bool sawSeed = false;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "seed") {
      if (sawSeed || !(ls >> k.seed)) throw ParseError(lineNo, 1, "bad seed line");
      sawSeed = true;
    } else if (word == "sel") {
      std::string name, eq;
      int bit = -1;
      if (!(ls >> name >> eq >> bit) || eq != "=" || (bit != 0 && bit != 1) || name.size() < 2 || name[0] != 's')
        throw ParseError(lineNo, 1, "expected 'sel s<j> = 0|1'");
      std::uint32_t idx = 0;
      try {
        std::size_t used = 0;
        idx = static_cast<std::uint32_t>(std::stoul(name.substr(1), &used));
        if (used + 1 != name.size()) throw ParseError(lineNo, 5, "bad selector name '" + name + "'");
      } catch (const std::logic_error&) {
        throw ParseError(lineNo, 5, "bad selector name '" + name + "'");
      }
      if (!k.bits.emplace(SelectorId{idx}, bit == 1).second)
        throw ParseError(lineNo, 5, "selector " + name + " listed twice");
    } else {
      throw ParseError(lineNo, 1, "unknown key file entry '" + word + "'");
    }
    if (ls >> word) throw ParseError(lineNo, 1, "trailing text '" + word + "'");
  }
  if (!sawSeed) throw ParseError(lineNo, 1, "key file has no seed line");
  return k;
}

void check_selector_key(const SelectorKey& k, const Program& p) {
  std::set<SelectorId> seen;
  for (const auto& s : p.statements) {
    const auto* c = std::get_if<Combine>(&s);
    if (!c) continue;
    int ones = 0;
    for (const auto& o : c->options) {
      const auto it = k.bits.find(o.selector);
      if (it == k.bits.end()) throw Error("key-mismatch", "key has no bit for " + o.selector.str());
      ones += it->second ? 1 : 0;
      seen.insert(o.selector);
    }
    if (ones != 1)
      throw Error("key-mismatch", "combining statement '" + c->target.name + "' has " + std::to_string(ones) +
                                      " selected options");
  }
  if (seen.size() != k.bits.size()) throw Error("key-mismatch", "key has bits for selectors not in the program");
}

}  // namespace selectc
