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

#include <cmath>

#include "doctest.h"
#include "pgcache/linegraph.hpp"
#include "pgcache/pda.hpp"
#include "pgcache/projective.hpp"
#include "pgcache/scheme.hpp"

using namespace pgcache;
using namespace pgcache::scheme;
using linegraph::Parameters;

namespace {

Rational frac(long n, long d) { return Rational(BigInt(n), BigInt(d)); }

std::string two_places(const Rational& r) { return to_decimal(r, 2); }

std::string truncated_two_places(const Rational& r) {
  BigInt hundredths = boost::multiprecision::numerator(r) * 100 / boost::multiprecision::denominator(r);
  std::string s = hundredths.str();
  while (s.size() < 3) s = "0" + s;
  return s.substr(0, s.size() - 2) + "." + s.substr(s.size() - 2);
}

unsigned floor_log10(double x) { return static_cast<unsigned>(std::floor(x)); }

}  // namespace

TEST_CASE("smallest instances reproduce their comparison rows") {
  auto a = scheme_params({2, 4, 1, 1});
  CHECK(a.users == 105);
  CHECK(a.subfiles == 105);
  CHECK(a.uncached_fraction == frac(48, 105));
  CHECK(two_places(a.uncached_fraction) == "0.46");
  CHECK(a.gain == 6);
  CHECK(a.rate == 8);
  CHECK(a.transmissions == 840);

  auto b = scheme_params({2, 5, 1, 1});
  CHECK(b.users == 465);
  CHECK(b.subfiles == 465);
  CHECK(b.uncached_fraction == frac(336, 465));
  CHECK(two_places(b.uncached_fraction) == "0.72");
  CHECK(b.gain == 6);

  auto da = d2d_params({2, 4, 1, 1});
  CHECK(da.subfiles == 525);
  CHECK(da.rate == frac(48, 5));
  auto db = d2d_params({2, 5, 1, 1});
  CHECK(db.subfiles == 2325);
  CHECK(db.rate == frac(336, 5));
}

TEST_CASE("parameter identities hold across a grid") {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    for (unsigned k = 4; k <= 10; ++k) {
      for (unsigned t = 1; t + 3 <= k; ++t) {
        for (unsigned m = 1; m + t + 2 <= k; ++m) {
          Parameters p{q, k, m, t};
          CAPTURE(linegraph::to_string(p));
          auto s = scheme_params(p);
          unsigned d = (m + 3) * (m + 2) / 2;
          CHECK(s.gain == d);
          CHECK(s.rate == Rational(s.subfile_clique, BigInt(d)));
          CHECK(s.cache_fraction == 1 - Rational(s.subfile_clique, s.users));
          CHECK(Rational(s.users) * s.uncached_fraction / s.rate == d);
          CHECK(s.users * s.user_clique == s.subfiles * s.subfile_clique);
          CHECK(s.transmissions * d == s.users * s.user_clique);
          auto dd = d2d_params(p);
          CHECK(dd.subfiles == (d - 1) * s.subfiles);
          CHECK(dd.rate == Rational(BigInt(d), BigInt(d - 1)) * Rational(s.transmissions, s.subfiles));
          CHECK(dd.users == s.users);
          CHECK(dd.cache_fraction == s.cache_fraction);
        }
      }
    }
  }
  CHECK_THROWS_AS(scheme_params({2, 4, 2, 1}), Error);
  CHECK_THROWS_AS(d2d_params({6, 4, 1, 1}), Error);
}

TEST_CASE("closed forms equal the parameters measured on constructed arrays") {
  for (Parameters p : {Parameters{2, 4, 1, 1}, Parameters{2, 5, 1, 1}, Parameters{3, 4, 1, 1}, Parameters{2, 5, 1, 2},
                       Parameters{2, 5, 2, 1}}) {
    CAPTURE(linegraph::to_string(p));
    auto ctx = linegraph::build_geometry(p);
    auto graph = linegraph::build_line_graph(ctx);
    auto array = pda::line_graph_to_pda(graph, linegraph::transmission_cover(ctx, graph));
    auto r = pda::validate_pda(array);
    REQUIRE(r.valid());
    auto s = scheme_params(p);
    CHECK(BigInt(array.users()) == s.users);
    CHECK(BigInt(array.subfiles()) == s.subfiles);
    CHECK(Rational(BigInt(*r.stars_per_column), BigInt(array.subfiles())) == s.cache_fraction);
    CHECK(Rational(BigInt(r.labels), BigInt(array.subfiles())) == s.rate);
    CHECK(r.regularity == std::optional<std::size_t>(s.gain));
  }
}

TEST_CASE("broadcast comparison rows") {
  struct Row {
    Parameters p;
    unsigned K;
    const char* U;
    unsigned F_exp;  // exponent shown, or 0 when F is printed in full
    unsigned F;
    unsigned gamma;
    unsigned yq, ym, K3;
    const char* U3;
    unsigned F3_exp;  // 0 where the table prints "inf"
    unsigned gamma3;
  };
  const Row rows[] = {
      {{2, 7, 1, 1}, 8001, "0.93", 0, 8001, 6, 14, 571, 8008, "0.93", 0, 572},
      {{2, 7, 3, 1}, 8001, "0.67", 7, 0, 15, 3, 2666, 8001, "0.67", 0, 2667},
      {{3, 4, 1, 1}, 780, "0.62", 0, 780, 6, 3, 259, 780, "0.67", 123, 260},
      {{2, 5, 1, 1}, 465, "0.72", 0, 465, 6, 4, 116, 468, "0.75", 69, 117},
      {{2, 4, 1, 1}, 105, "0.46", 0, 105, 6, 2, 51, 104, "0.50", 15, 52},
  };
  for (const auto& row : rows) {
    CAPTURE(linegraph::to_string(row.p));
    auto s = scheme_params(row.p);
    CHECK(s.users == row.K);
    CHECK(two_places(s.uncached_fraction) == row.U);
    if (row.F_exp) {
      CHECK(std::lround(scheme::log10(s.subfiles)) == row.F_exp);
      CHECK(ceil_log10(s.subfiles) == row.F_exp);
    } else {
      CHECK(s.subfiles == row.F);
    }
    CHECK(s.gain == row.gamma);

    BaselineArgs args;
    args.q_prime = row.yq;
    args.m_prime = row.ym;
    auto y = baseline_params(Baseline::YctPda, args);
    CHECK(y.users == row.K3);
    CHECK(two_places(y.uncached_fraction) == row.U3);
    CHECK(y.gain == std::optional<Rational>(row.gamma3));
    if (row.F3_exp) CHECK(floor_log10(y.subpacketization_log10) == row.F3_exp);
  }
  CHECK(scheme_params({2, 7, 3, 1}).subfiles == 9921240);
}

TEST_CASE("D2D comparison rows") {
  struct Row {
    Parameters p;
    unsigned K;
    const char* U;
    unsigned F;
    Rational R;
    const char* side;
    const char* U2;  // printed truncated
    unsigned F2_exp;
    unsigned F3_exp;  // 0 where the table prints "inf"
    double R3;
  };
  const Row rows[] = {
      {{2, 7, 1, 1}, 8001, "0.93", 40005, 1488, "89.44", "0.98", 174, 0, 13.28},
      {{3, 5, 1, 1}, 7260, "0.87", 36300, frac(6318, 5), "85.20", "0.98", 164, 0, 6.70},
      {{2, 6, 1, 1}, 1953, "0.86", 9765, 336, "44.19", "0.97", 72, 0, 6.15},
      {{3, 4, 1, 1}, 780, "0.62", 3900, frac(486, 5), "27.92", "0.96", 40, 225, 1.65},
      {{2, 5, 1, 1}, 465, "0.72", 2325, frac(336, 5), "21.56", "0.95", 28, 119, 2.60},
      {{2, 4, 1, 1}, 105, "0.46", 525, frac(48, 5), "10.25", "0.90", 10, 32, 0.84},
  };
  for (const auto& row : rows) {
    CAPTURE(linegraph::to_string(row.p));
    auto d = d2d_params(row.p);
    CHECK(d.users == row.K);
    CHECK(two_places(1 - d.cache_fraction) == row.U);
    CHECK(d.subfiles == row.F);
    CHECK(d.rate == row.R);

    BaselineArgs cube;
    cube.users = row.K;
    cube.side = parse_rational(row.side);
    auto h = baseline_params(Baseline::HypercubeD2D, cube);
    CHECK(h.rate == cube.side);
    CHECK(truncated_two_places(h.uncached_fraction) == row.U2);
    CHECK(floor_log10(h.subpacketization_log10) == row.F2_exp);

    BaselineArgs man;
    man.users = row.K;
    man.cache_fraction = d.cache_fraction;
    auto m = baseline_params(Baseline::MaddahAliNiesenD2D, man);
    CHECK(m.uncached_fraction == 1 - d.cache_fraction);
    if (row.F3_exp) CHECK(floor_log10(m.subpacketization_log10) == row.F3_exp);
    REQUIRE(m.rate.has_value());
    CHECK(std::abs(m.rate->convert_to<double>() - row.R3) <= 0.03);
  }
  // The printed rate for K = 7260 drops the fraction: 6318/5 = 1263.6 is shown as 1263.
  CHECK(boost::multiprecision::numerator(d2d_params({3, 5, 1, 1}).rate) / 5 == 1263);
}

TEST_CASE("baseline formulas") {
  BaselineArgs man;
  man.users = 4;
  man.cache_fraction = frac(1, 2);
  auto r = baseline_params(Baseline::MaddahAliNiesen, man);
  CHECK(r.subpacketization == std::optional<BigInt>(6));
  CHECK(r.rate == std::optional<Rational>(frac(2, 3)));
  CHECK(r.gain == std::optional<Rational>(3));
  man.cache_fraction = frac(1, 3);
  CHECK_THROWS_AS(baseline_params(Baseline::MaddahAliNiesen, man), Error);

  BaselineArgs yct;
  yct.q_prime = 2;
  yct.m_prime = 51;
  auto y = baseline_params(Baseline::YctPda, yct);
  CHECK(y.users == 104);
  CHECK(y.uncached_fraction == frac(1, 2));
  CHECK(y.subpacketization == std::optional<BigInt>(projective::ipow(BigInt(2), 51)));
  CHECK(y.rate == std::optional<Rational>(1));

  BaselineArgs cube;
  cube.users = 100;
  auto h = baseline_params(Baseline::HypercubeD2D, cube);
  CHECK(h.subpacketization == std::optional<BigInt>(projective::ipow(BigInt(10), 10)));
  CHECK(h.rate == std::optional<Rational>(10));
  cube.users = 105;
  CHECK_THROWS_AS(baseline_params(Baseline::HypercubeD2D, cube), Error);
  cube.side = frac(41, 4);
  auto h2 = baseline_params(Baseline::HypercubeD2D, cube);
  CHECK_FALSE(h2.subpacketization.has_value());
  CHECK(h2.uncached_fraction == frac(37, 41));

  BaselineArgs md;
  md.users = 105;
  md.cache_fraction = frac(57, 105);
  auto m = baseline_params(Baseline::MaddahAliNiesenD2D, md);
  BigInt c = 1;
  for (unsigned i = 0; i < 57; ++i) c = c * (105 - i) / (i + 1);
  CHECK(m.subpacketization == std::optional<BigInt>(57 * c));
  CHECK(m.rate == std::optional<Rational>(frac(48, 57)));

  CHECK(to_string(Baseline::YctPda) == "yct-pda");
  CHECK(to_string(Baseline::MaddahAliNiesenD2D) == "man-d2d");
}

TEST_CASE("decimal logarithms of big integers") {
  CHECK(ceil_log10(BigInt(1)) == 0);
  CHECK(ceil_log10(BigInt(10)) == 1);
  CHECK(ceil_log10(BigInt(11)) == 2);
  CHECK(ceil_log10(projective::ipow(BigInt(10), 300)) == 300);
  CHECK(ceil_log10(projective::ipow(BigInt(10), 300) + 1) == 301);
  CHECK(std::abs(scheme::log10(projective::ipow(BigInt(2), 1000)) - 1000 * std::log10(2.0)) < 1e-9);
}

TEST_CASE("bound report over the binary alpha = 2 grid") {
  for (unsigned k = 4; k <= 12; ++k) {
    Parameters p{2, k, k - 3, 1};
    CAPTURE(k);
    auto r = bound_report(p);
    auto s = scheme_params(p);
    CHECK(r.alpha == 2);
    CHECK(r.cache_fraction == s.cache_fraction);
    CHECK(r.cache_bound == 1);
    CHECK(r.holds());
    CHECK(r.rate_ratio >= kRateRatioLow);
    CHECK(r.rate_ratio <= kRateRatioHigh);

    // Independent floating evaluation of both sides of every inequality.
    long double K = s.users.convert_to<long double>();
    long double L = std::log2(2 * K);
    long double n = k - 1;
    CHECK((L / 2 - 1 <= n + 1e-12L) == r.k_minus_t_lower);
    CHECK((n <= L / 2 + 1e-12L) == r.k_minus_t_upper);
    CHECK((L * L / 4 - L + 1 <= n * n + 1e-9L) == r.square_lower);
    CHECK((n * n <= L * L / 4 + 1e-9L) == r.square_upper);
    long double fact = std::tgamma(std::floor(L / 2 - 2) + 1);
    long double env = (L + L * L / 4 - L - 2 - 1) * std::log10(2.0L) - std::log10(fact);
    CHECK(std::abs(static_cast<long double>(r.envelope_log10) - env) < 1e-6L);
    long double logF = std::log10(s.subfiles.convert_to<long double>());
    CHECK(std::abs(static_cast<long double>(r.subpacketization_log10) - logF) < 1e-9L);
    CHECK(logF <= env);
    long double ratio = s.rate.convert_to<long double>() * L * L / K;
    CHECK(std::abs(static_cast<long double>(r.rate_ratio) - ratio) < 1e-9L);
  }
  auto r = bound_report({2, 4, 1, 1});
  CHECK(r.cache_fraction == frac(57, 105));
  CHECK(r.cache_fraction <= r.cache_bound);
}

TEST_CASE("cache-fraction bound for other fields and alphas") {
  for (unsigned q : {2u, 3u, 4u, 5u}) {
    for (unsigned k = 4; k <= 10; ++k) {
      for (unsigned t = 1; t + 3 <= k; ++t) {
        for (unsigned m = 1; m + t + 2 <= k; ++m) {
          auto r = bound_report({q, k, m, t});
          CAPTURE(linegraph::to_string({q, k, m, t}));
          CHECK(r.cache_bound_holds);
          CHECK(r.cache_fraction <= r.cache_bound);
          CHECK(r.k_minus_t_lower);
          CHECK(r.k_minus_t_upper);
          CHECK(r.square_lower);
          CHECK(r.square_upper);
        }
      }
    }
  }
}

TEST_CASE("parameter selection is the lexicographic minimum over the box") {
  SearchBox box;
  box.fields = {2, 3, 4};
  box.max_k = 8;
  struct Target {
    long users;
    Rational fraction;
  };
  for (auto target : {Target{100, frac(6, 10)}, Target{400, frac(1, 2)}, Target{700, frac(7, 10)}, Target{2, frac(1, 100)}}) {
    auto got = select_parameters(BigInt(target.users), target.fraction, box);
    std::optional<SchemeParams> best;
    for (unsigned q : box.fields)
      for (unsigned k = 4; k <= box.max_k; ++k)
        for (unsigned t = 1; t + 3 <= k; ++t)
          for (unsigned m = 1; m + t + 2 <= k; ++m) {
            auto s = scheme_params({q, k, m, t});
            if (s.users < target.users || s.cache_fraction > target.fraction) continue;
            if (!best || s.users < best->users ||
                (s.users == best->users && s.cache_fraction > best->cache_fraction)) {
              best = s;
            }
          }
    REQUIRE(got.has_value() == best.has_value());
    if (got) {
      CHECK(got->users == best->users);
      CHECK(got->cache_fraction == best->cache_fraction);
    }
  }
}

TEST_CASE("comparison tables") {
  auto t1 = comparison_table(1);
  CHECK(t1.size() == 5);
  auto t2 = comparison_table(2);
  CHECK(t2.size() == 6);
  CHECK(comparison_table_csv(1).find("8001,0.93,8001") != std::string::npos);
  CHECK_THROWS_AS(comparison_table(3), Error);
}
