/*
 * Copyright 2026 The pgcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <atomic>
#include <cassert>

#include "pgcache/common.hpp"
#include "pgcache/kernels.hpp"

namespace pgcache::kernels {
namespace {

using XorFn = void (*)(std::uint8_t*, const std::uint8_t*, std::size_t) noexcept;
using ZeroFn = bool (*)(const std::uint8_t*, std::size_t) noexcept;

struct Table {
  Isa isa;
  XorFn xor_into;
  ZeroFn all_zero;
};

constexpr Table kScalar{Isa::Scalar, &scalar::xor_into, &scalar::all_zero};
#if defined(PGCACHE_HAVE_AVX2)
constexpr Table kAvx2{Isa::Avx2, &avx2::xor_into, &avx2::all_zero};
#endif
#if defined(PGCACHE_HAVE_NEON)
constexpr Table kNeon{Isa::Neon, &neon::xor_into, &neon::all_zero};
#endif

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(PGCACHE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(PGCACHE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Table* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return &kScalar;
#if defined(PGCACHE_HAVE_AVX2)
    case Isa::Avx2: return &kAvx2;
#endif
#if defined(PGCACHE_HAVE_NEON)
    case Isa::Neon: return &kNeon;
#endif
    default: return nullptr;
  }
}

const Table* best() noexcept {
  const auto isas = available_isas();
  return table_for(isas.back());
}

std::atomic<const Table*> g_active{nullptr};

const Table& active() noexcept {
  const Table* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = best();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (cpu_supports(isa) && table_for(isa) != nullptr) out.push_back(isa);
  return out;
}

void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) noexcept {
  assert(dst.size() == src.size());
  active().xor_into(dst.data(), src.data(), std::min(dst.size(), src.size()));
}

bool all_zero(std::span<const std::uint8_t> data) noexcept {
  return active().all_zero(data.data(), data.size());
}

Isa active_isa() noexcept { return active().isa; }

void force_isa(Isa isa) {
  const Table* t = cpu_supports(isa) ? table_for(isa) : nullptr;
  if (t == nullptr) throw Error(ErrorCode::InvalidInput, std::string("kernel variant unavailable: ") + std::string(to_string(isa)));
  g_active.store(t, std::memory_order_release);
}

void reset_isa() noexcept { g_active.store(nullptr, std::memory_order_release); }

}  // namespace pgcache::kernels
