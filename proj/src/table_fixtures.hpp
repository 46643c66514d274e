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

// Published comparison-table rows. Values for the earlier line-graph scheme
// cannot be recomputed from closed forms and are quoted as printed; the
// "reported" strings are kept so the computed columns can be checked against
// the published ones.

#include <array>
#include <span>
#include <string_view>

#include "pgcache/linegraph.hpp"

namespace pgcache::scheme::fixtures {

struct QuotedColumns {
  std::string_view users;
  std::string_view uncached;
  std::string_view subpacketization;
  std::string_view last;  // gain in the broadcast table, rate in the D2D table
};

struct BroadcastRow {
  linegraph::Parameters ours;
  unsigned yct_q;
  unsigned yct_m;
  QuotedColumns reported_ours;
  QuotedColumns prior_line_graph;  // not reproducible from closed forms
  QuotedColumns reported_yct;
};

struct D2DRow {
  linegraph::Parameters ours;
  std::string_view hypercube_side;  // decimal as printed
  QuotedColumns reported_ours;
  QuotedColumns reported_hypercube;
  QuotedColumns reported_man_d2d;
};

std::span<const BroadcastRow> broadcast_rows();
std::span<const D2DRow> d2d_rows();

}  // namespace pgcache::scheme::fixtures
