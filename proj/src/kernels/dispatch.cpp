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

#include <atomic>
#include <cstdlib>
#include <string>

#include "selectc/error.hpp"
#include "selectc/kernels.hpp"

namespace selectc::kernels {
namespace {

Backend detect() {
  if (const char* env = std::getenv("SELECTC_KERNEL"); env && std::string(env) == "scalar") return Backend::Scalar;
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

void check_sizes(std::size_t a, std::size_t b, std::size_t c) {
  if (a != b || a != c) throw Error("kernel", "lane count mismatch");
}

}  // namespace

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(SELECTC_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_available()) throw Error("kernel", "avx2 kernels are not available");
  current().store(b, std::memory_order_relaxed);
}

void apply_with(Backend b, Op op, std::span<const Lane> x, std::span<const Lane> y, std::span<Lane> out) {
  check_sizes(x.size(), y.size(), out.size());
#if defined(SELECTC_HAVE_AVX2)
  if (b == Backend::Avx2) {
    if (!avx2_available()) throw Error("kernel", "avx2 kernels are not available");
    return avx2::apply(op, x.data(), y.data(), out.data(), out.size());
  }
#else
  if (b == Backend::Avx2) throw Error("kernel", "avx2 kernels are not available");
#endif
  scalar::apply(op, x.data(), y.data(), out.data(), out.size());
}

void mul_accumulate_with(Backend b, std::span<const Lane> sel, std::span<const Lane> src, std::span<Lane> acc) {
  check_sizes(sel.size(), src.size(), acc.size());
#if defined(SELECTC_HAVE_AVX2)
  if (b == Backend::Avx2) {
    if (!avx2_available()) throw Error("kernel", "avx2 kernels are not available");
    return avx2::mul_accumulate(sel.data(), src.data(), acc.data(), acc.size());
  }
#else
  if (b == Backend::Avx2) throw Error("kernel", "avx2 kernels are not available");
#endif
  scalar::mul_accumulate(sel.data(), src.data(), acc.data(), acc.size());
}

void apply(Op op, std::span<const Lane> a, std::span<const Lane> b, std::span<Lane> out) {
  apply_with(active_backend(), op, a, b, out);
}

void mul_accumulate(std::span<const Lane> sel, std::span<const Lane> src, std::span<Lane> acc) {
  mul_accumulate_with(active_backend(), sel, src, acc);
}

}  // namespace selectc::kernels
