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

// Exact parameter calculators: the projective-geometry scheme (broadcast and
// D2D), closed-form baselines used for comparison tables, and the bound /
// growth-rate report.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pgcache/common.hpp"
#include "pgcache/linegraph.hpp"

namespace pgcache::scheme {

using linegraph::Parameters;

struct SchemeParams {
  Parameters params;
  BigInt users;           // K
  BigInt subfiles;        // F
  BigInt user_clique;     // D
  BigInt subfile_clique;  // c
  BigInt transmissions;   // S
  Rational cache_fraction;     // M/N
  Rational uncached_fraction;  // 1 - M/N
  Rational rate;               // R
  unsigned gain = 0;           // gamma = d = C(m+3, 2)
};

/// Closed forms only; nothing is enumerated. Throws InvalidParameters.
SchemeParams scheme_params(const Parameters& p);

struct D2DParams {
  Parameters params;
  BigInt users;
  BigInt subfiles;
  Rational cache_fraction;
  Rational rate;
};

D2DParams d2d_params(const Parameters& p);

enum class Baseline { YctPda, MaddahAliNiesen, HypercubeD2D, MaddahAliNiesenD2D };

std::string to_string(Baseline kind);

struct BaselineArgs {
  unsigned users = 0;
  Rational cache_fraction = 0;
  unsigned q_prime = 0;
  unsigned m_prime = 0;
  /// Hypercube side length; defaults to sqrt(users) when that is an integer.
  std::optional<Rational> side;
};

struct ComparisonRow {
  Baseline kind = Baseline::YctPda;
  Rational users;
  Rational uncached_fraction;
  std::optional<BigInt> subpacketization;  // absent when not an integer (y^y with fractional y)
  double subpacketization_log10 = 0.0;
  std::optional<Rational> gain;
  std::optional<Rational> rate;
};

/// Throws InvalidParameters when the closed form is undefined for `args`.
ComparisonRow baseline_params(Baseline kind, const BaselineArgs& args);

/// Smallest n with 10^n >= value (value >= 1).
unsigned ceil_log10(const BigInt& value);
double log10(const BigInt& value);

struct BoundReport {
  Parameters params;
  unsigned alpha = 0;  // k - m - t
  Rational cache_fraction;
  Rational cache_bound;  // 2 / q^(alpha - 1)
  bool cache_bound_holds = false;
  double log_q_2k = 0.0;  // log_q(2K)
  bool k_minus_t_lower = false;  // (1/2)log_q 2K - 1 <= k - t
  bool k_minus_t_upper = false;  // k - t <= (1/2)log_q 2K
  bool square_lower = false;     // (1/4)L^2 - L + 1 <= (k - t)^2
  bool square_upper = false;     // (k - t)^2 <= (1/4)L^2
  double subpacketization_log10 = 0.0;
  double envelope_log10 = 0.0;
  bool envelope_holds = false;
  double rate_ratio = 0.0;  // R (log_q 2K)^2 / K

  bool holds() const noexcept {
    return cache_bound_holds && k_minus_t_lower && k_minus_t_upper && square_lower && square_upper &&
           envelope_holds;
  }
};

inline constexpr double kRateRatioLow = 1.0;
inline constexpr double kRateRatioHigh = 8.0;

BoundReport bound_report(const Parameters& p);

struct SearchBox {
  std::vector<unsigned> fields{2, 3, 4, 5, 7, 8, 9};
  unsigned max_k = 12;
};

/// Among valid parameters in the box with K >= target_users and
/// M/N <= target_cache_fraction, the lexicographic minimiser of
/// (K - target_users, target_cache_fraction - M/N).
std::optional<SchemeParams> select_parameters(const BigInt& target_users, const Rational& target_cache_fraction,
                                              const SearchBox& box = {});

nlohmann::json to_json(const SchemeParams& s);
nlohmann::json to_json(const D2DParams& s);
nlohmann::json to_json(const ComparisonRow& row);
nlohmann::json to_json(const BoundReport& r);

/// Rows reproducing the comparison tables: computed columns plus quoted fixture columns.
nlohmann::json comparison_table(int which);
/// The same rows flattened to CSV with a header line.
std::string comparison_table_csv(int which);

}  // namespace pgcache::scheme
