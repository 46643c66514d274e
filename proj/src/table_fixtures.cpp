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

#include "table_fixtures.hpp"

namespace pgcache::scheme::fixtures {
namespace {

constexpr std::array<BroadcastRow, 5> kBroadcast{{
    {{2, 7, 1, 1}, 14, 571, {"8001", "0.93", "8001", "6"}, {"8191", "0.94", "10^29", "10"},
     {"8008", "0.93", "inf", "572"}},
    {{2, 7, 3, 1}, 3, 2666, {"8001", "0.67", "10^7", "15"}, {"8191", "0.75", "10^35", "12"},
     {"8001", "0.67", "inf", "10^3"}},
    {{3, 4, 1, 1}, 3, 259, {"780", "0.62", "780", "6"}, {"781", "0.80", "10^10", "5"},
     {"780", "0.67", "10^123", "260"}},
    {{2, 5, 1, 1}, 4, 116, {"465", "0.72", "465", "6"}, {"511", "0.75", "10^15", "8"},
     {"468", "0.75", "10^69", "117"}},
    {{2, 4, 1, 1}, 2, 51, {"105", "0.46", "105", "6"}, {"127", "0.50", "10^9", "7"},
     {"104", "0.50", "10^15", "52"}},
}};

constexpr std::array<D2DRow, 6> kD2D{{
    {{2, 7, 1, 1}, "89.44", {"8001", "0.93", "40005", "1488"}, {"8001", "0.98", "10^174", "89.44"},
     {"8001", "0.93", "inf", "13.28"}},
    {{3, 5, 1, 1}, "85.20", {"7260", "0.87", "36300", "1263"}, {"7260", "0.98", "10^164", "85.20"},
     {"7260", "0.87", "inf", "6.70"}},
    {{2, 6, 1, 1}, "44.19", {"1953", "0.86", "9765", "336"}, {"1953", "0.97", "10^72", "44.19"},
     {"1953", "0.86", "inf", "6.15"}},
    {{3, 4, 1, 1}, "27.92", {"780", "0.62", "3900", "97.2"}, {"780", "0.96", "10^40", "27.92"},
     {"780", "0.62", "10^225", "1.65"}},
    {{2, 5, 1, 1}, "21.56", {"465", "0.72", "2325", "67.2"}, {"465", "0.95", "10^28", "21.56"},
     {"465", "0.72", "10^119", "2.60"}},
    {{2, 4, 1, 1}, "10.25", {"105", "0.46", "525", "9.6"}, {"105", "0.90", "10^10", "10.25"},
     {"105", "0.46", "10^32", "0.84"}},
}};

}  // namespace

std::span<const BroadcastRow> broadcast_rows() { return kBroadcast; }
std::span<const D2DRow> d2d_rows() { return kD2D; }

}  // namespace pgcache::scheme::fixtures
