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

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "selectc/field.hpp"
#include "selectc/ir.hpp"
#include "selectc/rng.hpp"

namespace selectc {

/// Opaque ciphertext. The 128-bit handle is random and carries no
/// information about the plaintext.
struct Ciphertext {
  std::array<std::uint64_t, 2> handle{};

  std::string hex() const;
  friend auto operator<=>(const Ciphertext&, const Ciphertext&) = default;
};

/// Mock encryption key: plaintexts live in a store that only the key can
/// read. Homomorphic operations look the operands up, compute in the clear,
/// and store the result under a fresh handle. Stands in for a real scheme.
///
/// Readers may run concurrently; writers (enc, he_op) are serialized.
class SecretKey {
 public:
  explicit SecretKey(std::uint64_t seed);

  SecretKey(const SecretKey&) = delete;
  SecretKey& operator=(const SecretKey&) = delete;

  std::uint64_t seed() const { return seed_; }

  Ciphertext enc(Value v);
  /// Throws Error("foreign-ciphertext") for handles this key did not issue.
  Value dec(const Ciphertext& c) const;
  Ciphertext he_op(Op op, const Ciphertext& a, const Ciphertext& b);

  std::size_t size() const;

 private:
  struct HandleHash {
    std::size_t operator()(const std::array<std::uint64_t, 2>& h) const noexcept { return h[0] ^ (h[1] * 31); }
  };

  Ciphertext issue(Value v);  // caller holds the write lock
  Value lookup(const Ciphertext& c) const;  // caller holds a lock

  std::uint64_t seed_;
  mutable std::shared_mutex mu_;
  Rng rng_;
  std::unordered_map<std::array<std::uint64_t, 2>, Value, HandleHash> store_;
};

/// Fresh key with an empty store and a handle stream fixed by `seed`.
inline SecretKey keygen(std::uint64_t seed) { return SecretKey(seed); }

/// Selector bits of an obfuscated program: one 1-bit per Combine.
struct SelectorKey {
  std::uint64_t seed = 0;
  std::map<SelectorId, bool> bits;

  friend bool operator==(const SelectorKey&, const SelectorKey&) = default;
};

/// Key file: `seed <n>` then `sel s<j> = 0|1` lines.
std::string format_selector_key(const SelectorKey& k);
SelectorKey parse_selector_key(std::string_view text);

/// Throws Error("key-mismatch") unless the key covers exactly the selectors
/// of `p` with one 1-bit per Combine.
void check_selector_key(const SelectorKey& k, const Program& p);

}  // namespace selectc
