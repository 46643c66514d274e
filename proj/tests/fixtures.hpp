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

// The four-user, four-subfile caching line graph of the worked example, with
// users and subfiles numbered from 0: users 0 and 2 lack subfiles 0 and 1,
// users 1 and 3 lack subfiles 2 and 3.

#include <vector>

#include "pgcache/linegraph.hpp"
#include "pgcache/pda.hpp"

namespace fixtures {

inline pgcache::linegraph::CachingLineGraph example_graph() {
  using pgcache::linegraph::Vertex;
  std::vector<Vertex> v{{0, 0}, {0, 1}, {1, 2}, {1, 3}, {2, 0}, {2, 1}, {3, 2}, {3, 3}};
  return pgcache::linegraph::CachingLineGraph(4, 4, v);
}

/// {(0,f0),(1,f3)}, {(0,f1),(1,f2)}, {(2,f0),(3,f2)}, {(2,f1),(3,f3)} as vertex indices.
inline pgcache::linegraph::TransmissionCover example_cover() {
  pgcache::linegraph::TransmissionCover cover(2);
  for (auto c : std::vector<std::vector<std::uint32_t>>{{0, 3}, {1, 2}, {4, 6}, {5, 7}}) cover.push_back(c);
  return cover;
}

inline pgcache::pda::Pda example_pda() {
  constexpr std::uint32_t S = pgcache::pda::kStar;
  const std::uint32_t rows[4][4] = {{1, S, 3, S}, {2, S, 4, S}, {S, 2, S, 3}, {S, 1, S, 4}};
  pgcache::pda::Pda p(4, 4);
  for (std::size_t f = 0; f < 4; ++f)
    for (std::size_t k = 0; k < 4; ++k) p.set(f, k, rows[f][k]);
  return p;
}

}  // namespace fixtures
