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

// Counting over projective geometries PG_q(k-1) and enumeration of the
// subspaces lying above a fixed anchor.

#include <cstddef>
#include <vector>

#include "pgcache/common.hpp"
#include "pgcache/gf.hpp"

namespace pgcache::projective {

BigInt ipow(const BigInt& base, unsigned exp);

/// Number of 1-dim subspaces of F_q^k, (q^k - 1)/(q - 1). theta(0) = 0.
BigInt theta(unsigned k, unsigned q);

/// Number of m-dim subspaces of F_q^k. Throws OutOfRange if m > k.
BigInt gaussian_binomial(unsigned k, unsigned m, unsigned q);

/// Number of unordered b-sets of lines {T_1..T_b} with A ⊕ T_1 ⊕ ... ⊕ T_b of
/// dimension a + b, for a fixed a-dim A in F_q^k. Requires 1 <= a + b <= k.
BigInt count_extension_sets(unsigned a, unsigned b, unsigned k, unsigned q);

/// Number of lines T with A' ⊕ T = A for a fixed hyperplane A' of the a-dim A: q^(a-1).
BigInt count_line_completions(unsigned a, unsigned q);

/// One normalized representative per line of F_q^k, in increasing index order.
std::vector<gf::FqVector> line_representatives(const gf::Field& field, std::size_t k);

/// All d-dim subspaces containing `anchor`, sorted by canonical key.
///
/// Grows the anchor one line at a time and deduplicates through the canonical
/// form. Throws OutOfRange unless dim(anchor) <= d <= k.
std::vector<gf::Subspace> enumerate_superspaces(const gf::Field& field, const gf::Subspace& anchor,
                                                std::size_t d);

}  // namespace pgcache::projective
