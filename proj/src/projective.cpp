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

#include "pgcache/projective.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace pgcache::projective {

BigInt ipow(const BigInt& base, unsigned exp) {
  BigInt r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

BigInt theta(unsigned k, unsigned q) {
  return (ipow(q, k) - 1) / (q - 1);
}

BigInt gaussian_binomial(unsigned k, unsigned m, unsigned q) {
  if (m > k) {
    throw Error(ErrorCode::OutOfRange,
                "[" + std::to_string(k) + " choose " + std::to_string(m) + "]_q with m > k");
  }
  BigInt num = 1;
  BigInt den = 1;
  for (unsigned i = 0; i < m; ++i) {
    num *= ipow(q, k - i) - 1;
    den *= ipow(q, m - i) - 1;
  }
  return num / den;
}

BigInt count_extension_sets(unsigned a, unsigned b, unsigned k, unsigned q) {
  if (a + b < 1 || a + b > k) {
    throw Error(ErrorCode::OutOfRange, "count_extension_sets needs 1 <= a + b <= k");
  }
  const BigInt lines = theta(k, q);
  BigInt num = 1;
  BigInt fact = 1;
  for (unsigned i = 0; i < b; ++i) {
    num *= lines - theta(a + i, q);
    fact *= i + 1;
  }
  if (num % fact != 0) {
    throw Error(ErrorCode::InternalInconsistency, "b! does not divide the ordered count");
  }
  return num / fact;
}

BigInt count_line_completions(unsigned a, unsigned q) {
  if (a < 1) throw Error(ErrorCode::OutOfRange, "count_line_completions needs a >= 1");
  return ipow(q, a - 1);
}

std::vector<gf::FqVector> line_representatives(const gf::Field& field, std::size_t k) {
  const unsigned q = field.order();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= q;
  std::vector<gf::FqVector> out;
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    gf::FqVector v = gf::vector_at(q, k, idx);
    auto lead = std::find_if(v.begin(), v.end(), [](gf::Elem x) { return x != 0; });
    if (*lead == 1) out.push_back(std::move(v));
  }
  return out;
}

std::vector<gf::Subspace> enumerate_superspaces(const gf::Field& field, const gf::Subspace& anchor,
                                                std::size_t d) {
  const std::size_t k = anchor.ambient_dim();
  if (d < anchor.dim() || d > k) {
    throw Error(ErrorCode::OutOfRange, "superspace dimension " + std::to_string(d) +
                                           " outside [" + std::to_string(anchor.dim()) + ", " +
                                           std::to_string(k) + "]");
  }
  std::vector<gf::Subspace> level{anchor};
  for (std::size_t dim = anchor.dim(); dim < d; ++dim) {
    // Lines supported on the non-pivot columns of s meet s trivially and give
    // each extension of s exactly once; other parents of the same extension
    // are absorbed by the set.
    const auto lines = line_representatives(field, k - dim);
    std::unordered_set<gf::Subspace, gf::SubspaceHash> next;
    next.reserve(level.size() * lines.size() / (dim - anchor.dim() + 1));
    for (const auto& s : level) {
      std::vector<std::size_t> free;
      for (std::size_t c = 0, i = 0; c < k; ++c) {
        if (i < s.pivots().size() && s.pivots()[i] == c) {
          ++i;
        } else {
          free.push_back(c);
        }
      }
      gf::FqVector v(k, 0);
      for (const auto& t : lines) {
        for (std::size_t j = 0; j < free.size(); ++j) v[free[j]] = t[j];
        next.insert(gf::extend(field, s, v));
      }
    }
    level.assign(next.begin(), next.end());
  }
  std::sort(level.begin(), level.end());
  return level;
}

}  // namespace pgcache::projective
