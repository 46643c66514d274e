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

#include <arm_neon.h>

#include "pgcache/kernels.hpp"

namespace pgcache::kernels::neon {

void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) noexcept {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    vst1q_u8(dst + i, veorq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
  }
  for (; i < n; ++i) dst[i] ^= src[i];
}

bool all_zero(const std::uint8_t* data, std::size_t n) noexcept {
  std::size_t i = 0;
  uint8x16_t acc = vdupq_n_u8(0);
  for (; i + 16 <= n; i += 16) acc = vorrq_u8(acc, vld1q_u8(data + i));
  if (vmaxvq_u8(acc) != 0) return false;
  std::uint8_t tail = 0;
  for (; i < n; ++i) tail |= data[i];
  return tail == 0;
}

}  // namespace pgcache::kernels::neon
