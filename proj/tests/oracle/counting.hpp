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

// Exhaustive subspace counts compared against the closed-form counting
// functions, over every F_q^k with q^k <= 256.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pgcache/projective.hpp"
#include "small_field.hpp"
#include "subspace_lattice.hpp"

namespace oracle {

struct CountingTally {
  std::size_t spaces = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;
};

inline std::vector<std::pair<unsigned, unsigned>> small_spaces(unsigned limit = 256) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (unsigned q = 2; q <= limit; ++q) {
    if (split_prime_power(q).first == 0) continue;
    unsigned size = q;
    for (unsigned k = 1; size <= limit; ++k, size *= q) out.emplace_back(q, k);
  }
  return out;
}

/// Compares theta, gaussian_binomial, count_extension_sets and
/// count_line_completions with lattice counts for one (q, k).
inline void check_counts(unsigned q, unsigned k, CountingTally& tally) {
  using pgcache::BigInt;
  namespace pj = pgcache::projective;
  SmallField field(q);
  SubspaceLattice lat(field, k);
  ++tally.spaces;
  auto fail = [&](const std::string& what) {
    tally.failures.push_back("q=" + std::to_string(q) + " k=" + std::to_string(k) + ": " + what);
  };

  for (unsigned d = 0; d <= k; ++d) {
    ++tally.checks;
    if (pj::gaussian_binomial(k, d, q) != BigInt(lat.count(d))) fail("subspaces of dim " + std::to_string(d));
  }
  ++tally.checks;
  if (pj::theta(k, q) != BigInt(lat.count(1))) fail("line count");

  // Lines inside each fixed subspace, by containment of explicit vector sets.
  for (unsigned d = 0; d <= k; ++d) {
    int id = lat.level(d).front();
    std::size_t inside = 0;
    for (int line : lat.level(1)) inside += SubspaceLattice::subset(lat.set(line), lat.set(id));
    ++tally.checks;
    if (pj::theta(d, q) != BigInt(inside)) fail("lines in a dim-" + std::to_string(d) + " subspace");
  }

  for (unsigned top = 1; top <= k; ++top) {
    auto ways = lat.ordered_chains(top);
    for (unsigned a = 0; a <= top; ++a) {
      unsigned b = top - a;
      std::uint64_t fact = 1;
      for (unsigned i = 2; i <= b; ++i) fact *= i;
      const auto& level = lat.level(a);
      std::size_t stride = std::max<std::size_t>(1, level.size() / 64);
      for (std::size_t i = 0; i < level.size(); i += stride) {
        std::uint64_t ordered = ways[level[i]];
        ++tally.checks;
        if (ordered % fact != 0) {
          fail("ordered extensions not divisible by b! at a=" + std::to_string(a));
        } else if (pj::count_extension_sets(a, b, k, q) != BigInt(ordered / fact)) {
          fail("extension sets a=" + std::to_string(a) + " b=" + std::to_string(b));
        }
      }
    }
  }

  for (unsigned a = 1; a <= k; ++a) {
    const auto& level = lat.level(a);
    std::size_t stride = std::max<std::size_t>(1, level.size() / 8);
    for (std::size_t i = 0; i < level.size(); i += stride) {
      const auto& big = lat.set(level[i]);
      for (int hyper : lat.level(a - 1)) {
        if (!SubspaceLattice::subset(lat.set(hyper), big)) continue;
        std::size_t completions = 0;
        for (int line : lat.level(1)) {
          const auto& l = lat.set(line);
          completions += SubspaceLattice::subset(l, big) && !SubspaceLattice::subset(l, lat.set(hyper));
        }
        ++tally.checks;
        if (pj::count_line_completions(a, q) != BigInt(completions)) {
          fail("line completions a=" + std::to_string(a));
        }
      }
    }
  }
}

inline CountingTally check_all_counts(unsigned limit = 256) {
  CountingTally tally;
  for (auto [q, k] : small_spaces(limit)) check_counts(q, k, tally);
  return tally;
}

}  // namespace oracle
