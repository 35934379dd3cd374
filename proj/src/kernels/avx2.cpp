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

// Built with -mavx2. Nothing here may run before dispatch has checked the CPU.
#include <immintrin.h>

#include "selectc/kernels.hpp"

namespace selectc::kernels::avx2 {
namespace {

inline __m256i load(const Lane* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(Lane* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

inline __m256i kP() { return _mm256_set1_epi64x(static_cast<long long>(kPrime)); }
inline __m256i kPm1() { return _mm256_set1_epi64x(static_cast<long long>(kPrime - 1)); }
inline __m256i kHalf() { return _mm256_set1_epi64x(static_cast<long long>(kHalfPrime)); }
inline __m256i kOne() { return _mm256_set1_epi64x(1); }
inline __m256i kLow29() { return _mm256_set1_epi64x((1LL << 29) - 1); }

// Inputs stay below 2^63, so signed 64-bit compares are safe.
inline __m256i reduce_once(__m256i s) {
  const auto ge = _mm256_cmpgt_epi64(s, kPm1());
  return _mm256_sub_epi64(s, _mm256_and_si256(ge, kP()));
}

inline __m256i add(__m256i a, __m256i b) { return reduce_once(_mm256_add_epi64(a, b)); }

inline __m256i sub(__m256i a, __m256i b) { return reduce_once(_mm256_sub_epi64(_mm256_add_epi64(a, kP()), b)); }

// a, b < 2^61 split into 32-bit limbs; 2^64 = 8 and 2^61 = 1 mod p.
inline __m256i mul(__m256i a, __m256i b) {
  const auto a1 = _mm256_srli_epi64(a, 32);
  const auto b1 = _mm256_srli_epi64(b, 32);
  const auto ll = _mm256_mul_epu32(a, b);
  const auto hh = _mm256_mul_epu32(a1, b1);
  const auto mid = _mm256_add_epi64(_mm256_mul_epu32(a1, b), _mm256_mul_epu32(a, b1));

  auto s = _mm256_slli_epi64(hh, 3);
  s = _mm256_add_epi64(s, _mm256_srli_epi64(mid, 29));
  s = _mm256_add_epi64(s, _mm256_slli_epi64(_mm256_and_si256(mid, kLow29()), 32));
  s = _mm256_add_epi64(s, _mm256_and_si256(ll, kP()));
  s = _mm256_add_epi64(s, _mm256_srli_epi64(ll, 61));
  s = _mm256_add_epi64(_mm256_and_si256(s, kP()), _mm256_srli_epi64(s, 61));
  return reduce_once(s);
}

// Signed reading: representatives above (p-1)/2 are shifted down by p.
inline __m256i centered(__m256i a) {
  const auto neg = _mm256_cmpgt_epi64(a, kHalf());
  return _mm256_sub_epi64(a, _mm256_and_si256(neg, kP()));
}

inline __m256i bit(__m256i mask) { return _mm256_and_si256(mask, kOne()); }
inline __m256i not_bit(__m256i mask) { return _mm256_andnot_si256(mask, kOne()); }

template <class F>
void each(const Lane* a, const Lane* b, Lane* out, std::size_t n, F f) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(out + i, f(load(a + i), load(b + i)));
  if (i < n) {
    alignas(32) Lane ta[4] = {}, tb[4] = {}, to[4];
    for (std::size_t j = i; j < n; ++j) {
      ta[j - i] = a[j];
      tb[j - i] = b[j];
    }
    store(to, f(load(ta), load(tb)));
    for (std::size_t j = i; j < n; ++j) out[j] = to[j - i];
  }
}

}  // namespace

void apply(Op op, const Lane* a, const Lane* b, Lane* out, std::size_t n) {
  switch (op) {
    case Op::Add: return each(a, b, out, n, add);
    case Op::Sub: return each(a, b, out, n, sub);
    case Op::Mul: return each(a, b, out, n, mul);
    case Op::Div: return scalar::apply(op, a, b, out, n);  // no vector integer division
    case Op::Eq: return each(a, b, out, n, [](__m256i x, __m256i y) { return bit(_mm256_cmpeq_epi64(x, y)); });
    case Op::Neq:
      return each(a, b, out, n, [](__m256i x, __m256i y) { return not_bit(_mm256_cmpeq_epi64(x, y)); });
    case Op::Lt:
      return each(a, b, out, n,
                  [](__m256i x, __m256i y) { return bit(_mm256_cmpgt_epi64(centered(y), centered(x))); });
    case Op::Le:
      return each(a, b, out, n,
                  [](__m256i x, __m256i y) { return not_bit(_mm256_cmpgt_epi64(centered(x), centered(y))); });
    case Op::Gt:
      return each(a, b, out, n,
                  [](__m256i x, __m256i y) { return bit(_mm256_cmpgt_epi64(centered(x), centered(y))); });
    case Op::Ge:
      return each(a, b, out, n,
                  [](__m256i x, __m256i y) { return not_bit(_mm256_cmpgt_epi64(centered(y), centered(x))); });
  }
}

void mul_accumulate(const Lane* sel, const Lane* src, Lane* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(acc + i, add(load(acc + i), mul(load(sel + i), load(src + i))));
  if (i < n) scalar::mul_accumulate(sel + i, src + i, acc + i, n - i);
}

}  // namespace selectc::kernels::avx2
