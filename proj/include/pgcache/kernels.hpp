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

#pragma once

// Byte-buffer kernels behind the coded deliveries. Each kernel has a scalar
// reference and vector variants; the best variant the CPU supports is picked
// on first use.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pgcache::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

/// dst[i] ^= src[i]; the spans must have equal length.
void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) noexcept;

/// True iff every byte is zero.
bool all_zero(std::span<const std::uint8_t> data) noexcept;

/// Variant currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Variants this binary was compiled with and the CPU can run, scalar first.
std::vector<Isa> available_isas();

/// Pins dispatch to `isa` (must be available); used by equivalence tests.
void force_isa(Isa isa);

/// Restores automatic selection.
void reset_isa() noexcept;

namespace scalar {
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) noexcept;
bool all_zero(const std::uint8_t* data, std::size_t n) noexcept;
}  // namespace scalar

#if defined(PGCACHE_HAVE_AVX2)
namespace avx2 {
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) noexcept;
bool all_zero(const std::uint8_t* data, std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(PGCACHE_HAVE_NEON)
namespace neon {
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) noexcept;
bool all_zero(const std::uint8_t* data, std::size_t n) noexcept;
}  // namespace neon
#endif

}  // namespace pgcache::kernels
