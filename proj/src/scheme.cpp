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

#include "pgcache/scheme.hpp"

#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pgcache/projective.hpp"
#include "table_fixtures.hpp"

namespace pgcache::scheme {
namespace {

using Float = boost::multiprecision::cpp_bin_float_50;
using projective::gaussian_binomial;
using projective::ipow;

BigInt theta(unsigned n, unsigned q) { return gaussian_binomial(n, 1, q); }

BigInt binomial(const BigInt& n, unsigned r) {
  BigInt out = 1;
  for (unsigned i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
  return out;
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

Float to_float(const BigInt& x) { return Float(x); }

Float log_q(const Float& x, unsigned q) { return boost::multiprecision::log(x) / boost::multiprecision::log(Float(q)); }

// Rational q^e for a possibly negative exponent.
Rational qpow(unsigned q, int e) {
  return e >= 0 ? Rational(ipow(q, static_cast<unsigned>(e))) : Rational(BigInt(1), ipow(q, static_cast<unsigned>(-e)));
}

nlohmann::json params_json(const Parameters& p) {
  return {{"q", p.q}, {"k", p.k}, {"m", p.m}, {"t", p.t}};
}

nlohmann::json rational_json(const Rational& r) {
  return {{"exact", to_exact(r)}, {"decimal", to_decimal(r, 4)}};
}

std::string format_log10(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << v;
  return out.str();
}

}  // namespace

SchemeParams scheme_params(const Parameters& p) {
  const linegraph::ClosedForms cf = linegraph::closed_forms(p);
  const unsigned q = p.q, k = p.k, m = p.m, t = p.t;
  SchemeParams s;
  s.params = p;
  s.users = cf.users;
  s.subfiles = cf.subfiles;
  s.user_clique = cf.user_clique;
  s.subfile_clique = cf.subfile_clique;
  s.transmissions = cf.transmissions;
  s.gain = static_cast<unsigned>(cf.clique_size);

  const BigInt tail = theta(k - m - t, q) * theta(k - m - t - 1, q);
  s.uncached_fraction = Rational(ipow(q, 2 * (m + 1)) * tail, theta(k - t + 1, q) * theta(k - t, q));
  s.cache_fraction = 1 - s.uncached_fraction;
  s.rate = Rational(ipow(q, 2 * m + 3) * tail, BigInt((m + 2) * (m + 3)));

  if (s.uncached_fraction != Rational(cf.subfile_clique, cf.users) ||
      s.rate != Rational(cf.subfile_clique, cf.clique_size)) {
    throw Error(ErrorCode::InternalInconsistency, "rate / memory disagree with clique sizes " + to_string(p));
  }
  return s;
}

D2DParams d2d_params(const Parameters& p) {
  const SchemeParams s = scheme_params(p);
  const unsigned q = p.q, k = p.k, m = p.m, t = p.t;
  D2DParams d;
  d.params = p;
  d.users = s.users;
  d.subfiles = BigInt((m + 1) * (m + 4) / 2) * s.subfiles;
  d.cache_fraction = s.cache_fraction;
  d.rate = Rational(ipow(q, 2 * m + 3) * theta(k - m - t, q) * theta(k - m - t - 1, q),
                    BigInt((m + 1) * (m + 4)));
  return d;
}

std::string to_string(Baseline kind) {
  switch (kind) {
    case Baseline::YctPda: return "yct-pda";
    case Baseline::MaddahAliNiesen: return "man";
    case Baseline::HypercubeD2D: return "hypercube-d2d";
    case Baseline::MaddahAliNiesenD2D: return "man-d2d";
  }
  return "unknown";
}

unsigned ceil_log10(const BigInt& value) {
  if (value < 1) throw Error(ErrorCode::OutOfRange, "ceil_log10 of a value below 1");
  const std::string digits = value.str();
  const bool power_of_ten =
      digits[0] == '1' && digits.find_first_not_of('0', 1) == std::string::npos;
  return static_cast<unsigned>(power_of_ten ? digits.size() - 1 : digits.size());
}

double log10(const BigInt& value) {
  const std::string digits = value.str();
  const std::size_t lead = std::min<std::size_t>(digits.size(), 17);
  return std::log10(std::stod(digits.substr(0, lead))) + static_cast<double>(digits.size() - lead);
}

ComparisonRow baseline_params(Baseline kind, const BaselineArgs& args) {
  ComparisonRow row;
  row.kind = kind;
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidParameters, what);
  };
  switch (kind) {
    case Baseline::YctPda: {
      require(args.q_prime >= 2 && args.m_prime >= 1, "yct-pda needs q' >= 2 and m' >= 1");
      const unsigned qp = args.q_prime;
      row.users = BigInt(qp) * (args.m_prime + 1);
      row.uncached_fraction = 1 - Rational(1, qp);
      row.subpacketization = ipow(qp, args.m_prime);
      row.rate = Rational(qp - 1);
      row.gain = row.users * row.uncached_fraction / *row.rate;
      break;
    }
    case Baseline::MaddahAliNiesen: {
      require(args.users >= 1 && args.cache_fraction >= 0 && args.cache_fraction <= 1,
              "man needs K >= 1 and 0 <= M/N <= 1");
      const Rational kt = args.cache_fraction * args.users;
      require(denominator(kt) == 1, "man needs an integral K*M/N");
      const unsigned t = static_cast<unsigned>(numerator(kt));
      row.users = args.users;
      row.uncached_fraction = 1 - args.cache_fraction;
      row.subpacketization = binomial(args.users, t);
      row.gain = Rational(1 + t);
      row.rate = row.users * row.uncached_fraction / *row.gain;
      break;
    }
    case Baseline::HypercubeD2D: {
      require(args.users >= 1, "hypercube-d2d needs K >= 1");
      Rational side;
      if (args.side) {
        side = *args.side;
      } else {
        const BigInt root = boost::multiprecision::sqrt(BigInt(args.users));
        require(root * root == args.users, "hypercube-d2d needs a side length when K is not a square");
        side = Rational(root);
      }
      require(side > 1, "hypercube-d2d needs side > 1");
      row.users = args.users;
      row.uncached_fraction = 1 - 1 / side;
      row.rate = side;
      if (denominator(side) == 1) {
        const unsigned y = static_cast<unsigned>(numerator(side));
        row.subpacketization = ipow(y, y);
      }
      const double y = static_cast<double>(side);
      row.subpacketization_log10 = y * std::log10(y);
      break;
    }
    case Baseline::MaddahAliNiesenD2D: {
      require(args.users >= 1 && args.cache_fraction > 0 && args.cache_fraction <= 1,
              "man-d2d needs K >= 1 and 0 < M/N <= 1");
      const Rational kt = args.cache_fraction * args.users;
      const BigInt y2 = numerator(kt) / denominator(kt);
      require(y2 >= 1, "man-d2d needs floor(K*M/N) >= 1");
      row.users = args.users;
      row.uncached_fraction = 1 - args.cache_fraction;
      row.subpacketization = y2 * binomial(args.users, static_cast<unsigned>(y2));
      row.rate = 1 / args.cache_fraction - 1;
      break;
    }
  }
  if (row.subpacketization) row.subpacketization_log10 = scheme::log10(*row.subpacketization);
  return row;
}

BoundReport bound_report(const Parameters& p) {
  const SchemeParams s = scheme_params(p);
  const unsigned q = p.q;
  const int n = static_cast<int>(p.k - p.t);
  BoundReport r;
  r.params = p;
  r.alpha = p.k - p.m - p.t;
  r.cache_fraction = s.cache_fraction;
  r.cache_bound = Rational(BigInt(2), ipow(q, r.alpha - 1));
  r.cache_bound_holds = s.cache_fraction <= r.cache_bound;

  // L = log_q 2K; every comparison against L is settled by integer powers of q.
  const BigInt two_k = 2 * s.users;
  r.k_minus_t_lower = Rational(two_k) <= qpow(q, 2 * (n + 1));
  r.k_minus_t_upper = qpow(q, 2 * n) <= Rational(two_k);
  r.square_upper = qpow(q, 2 * n) <= Rational(two_k);
  r.square_lower = qpow(q, 2 * (1 - n)) <= Rational(two_k) && Rational(two_k) <= qpow(q, 2 * (n + 1));

  const Float L = log_q(to_float(two_k), q);
  r.log_q_2k = static_cast<double>(L);

  // floor(L/2) is the largest j with q^(2j) <= 2K
  int half_floor = 0;
  while (qpow(q, 2 * (half_floor + 1)) <= Rational(two_k)) ++half_floor;
  const int fact_arg = half_floor - static_cast<int>(r.alpha);
  const Float log10q = boost::multiprecision::log10(Float(q));
  const Float a = Float(r.alpha);
  const Float lhs = boost::multiprecision::log10(to_float(s.subfiles));
  r.subpacketization_log10 = static_cast<double>(lhs);
  if (fact_arg >= 0) {
    const Float rhs = boost::multiprecision::log10(to_float(two_k)) +
                      (L * L / 4 - a * L / 2 - a - 1) * log10q -
                      boost::multiprecision::log10(to_float(factorial(static_cast<unsigned>(fact_arg))));
    r.envelope_log10 = static_cast<double>(rhs);
    r.envelope_holds = lhs <= rhs;
  }
  const Float ratio = Float(numerator(s.rate)) / Float(denominator(s.rate)) * L * L / to_float(s.users);
  r.rate_ratio = static_cast<double>(ratio);
  return r;
}

std::optional<SchemeParams> select_parameters(const BigInt& target_users, const Rational& target_cache_fraction,
                                              const SearchBox& box) {
  std::optional<SchemeParams> best;
  for (unsigned q : box.fields) {
    if (gf::prime_power_decomposition(q).first == 0) continue;
    for (unsigned k = 4; k <= box.max_k; ++k) {
      for (unsigned t = 1; t + 3 <= k; ++t) {
        for (unsigned m = 1; m + t + 2 <= k; ++m) {
          SchemeParams s = scheme_params({q, k, m, t});
          if (s.users < target_users || s.cache_fraction > target_cache_fraction) continue;
          if (!best) {
            best = std::move(s);
            continue;
          }
          const BigInt gap = s.users - target_users;
          const BigInt best_gap = best->users - target_users;
          if (gap < best_gap || (gap == best_gap && s.cache_fraction > best->cache_fraction)) {
            best = std::move(s);
          }
        }
      }
    }
  }
  return best;
}

nlohmann::json to_json(const SchemeParams& s) {
  nlohmann::json j;
  j["params"] = params_json(s.params);
  j["K"] = s.users.str();
  j["F"] = s.subfiles.str();
  j["F_ceil_log10"] = ceil_log10(s.subfiles);
  j["D"] = s.user_clique.str();
  j["c"] = s.subfile_clique.str();
  j["S"] = s.transmissions.str();
  j["cache_fraction"] = rational_json(s.cache_fraction);
  j["uncached_fraction"] = rational_json(s.uncached_fraction);
  j["rate"] = rational_json(s.rate);
  j["gain"] = s.gain;
  return j;
}

nlohmann::json to_json(const D2DParams& d) {
  nlohmann::json j;
  j["params"] = params_json(d.params);
  j["K"] = d.users.str();
  j["F"] = d.subfiles.str();
  j["F_ceil_log10"] = ceil_log10(d.subfiles);
  j["cache_fraction"] = rational_json(d.cache_fraction);
  j["uncached_fraction"] = rational_json(1 - d.cache_fraction);
  j["rate"] = rational_json(d.rate);
  return j;
}

nlohmann::json to_json(const ComparisonRow& row) {
  nlohmann::json j;
  j["kind"] = to_string(row.kind);
  j["K"] = rational_json(row.users);
  j["uncached_fraction"] = rational_json(row.uncached_fraction);
  j["F"] = row.subpacketization ? nlohmann::json(row.subpacketization->str()) : nlohmann::json(nullptr);
  j["F_log10"] = format_log10(row.subpacketization_log10);
  j["F_ceil_log10"] = row.subpacketization ? ceil_log10(*row.subpacketization)
                                           : static_cast<unsigned>(std::ceil(row.subpacketization_log10));
  j["gain"] = row.gain ? rational_json(*row.gain) : nlohmann::json(nullptr);
  j["rate"] = row.rate ? rational_json(*row.rate) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["params"] = params_json(r.params);
  j["alpha"] = r.alpha;
  j["cache_fraction"] = rational_json(r.cache_fraction);
  j["cache_bound"] = rational_json(r.cache_bound);
  j["cache_bound_holds"] = r.cache_bound_holds;
  j["log_q_2K"] = r.log_q_2k;
  j["k_minus_t_lower"] = r.k_minus_t_lower;
  j["k_minus_t_upper"] = r.k_minus_t_upper;
  j["square_lower"] = r.square_lower;
  j["square_upper"] = r.square_upper;
  j["F_log10"] = r.subpacketization_log10;
  j["envelope_log10"] = r.envelope_log10;
  j["envelope_holds"] = r.envelope_holds;
  j["rate_ratio"] = r.rate_ratio;
  j["rate_ratio_in_band"] = r.rate_ratio >= kRateRatioLow && r.rate_ratio <= kRateRatioHigh;
  j["holds"] = r.holds();
  return j;
}

namespace {

nlohmann::json quoted(const fixtures::QuotedColumns& c, const char* last) {
  return {{"K", c.users}, {"U", c.uncached}, {"F", c.subpacketization}, {last, c.last}};
}

std::string f_display(const ComparisonRow& row) {
  return "10^" + std::to_string(row.subpacketization ? ceil_log10(*row.subpacketization)
                                                      : static_cast<unsigned>(std::ceil(row.subpacketization_log10)));
}

}  // namespace

nlohmann::json comparison_table(int which) {
  nlohmann::json rows = nlohmann::json::array();
  if (which == 1) {
    for (const auto& fx : fixtures::broadcast_rows()) {
      const SchemeParams s = scheme_params(fx.ours);
      BaselineArgs yct;
      yct.q_prime = fx.yct_q;
      yct.m_prime = fx.yct_m;
      nlohmann::json row;
      row["ours"] = to_json(s);
      row["ours"]["U"] = to_decimal(s.uncached_fraction, 2);
      row["prior_line_graph"] = quoted(fx.prior_line_graph, "gamma");
      row["yct_pda"] = to_json(baseline_params(Baseline::YctPda, yct));
      row["yct_pda"]["args"] = {{"q_prime", fx.yct_q}, {"m_prime", fx.yct_m}};
      row["reported"] = {{"ours", quoted(fx.reported_ours, "gamma")}, {"yct_pda", quoted(fx.reported_yct, "gamma")}};
      rows.push_back(std::move(row));
    }
  } else if (which == 2) {
    for (const auto& fx : fixtures::d2d_rows()) {
      const D2DParams d = d2d_params(fx.ours);
      const unsigned K = static_cast<unsigned>(d.users);
      BaselineArgs cube;
      cube.users = K;
      cube.side = parse_rational(fx.hypercube_side);
      BaselineArgs man;
      man.users = K;
      man.cache_fraction = d.cache_fraction;
      nlohmann::json row;
      row["ours"] = to_json(d);
      row["ours"]["U"] = to_decimal(1 - d.cache_fraction, 2);
      row["hypercube_d2d"] = to_json(baseline_params(Baseline::HypercubeD2D, cube));
      row["hypercube_d2d"]["args"] = {{"side", fx.hypercube_side}};
      row["man_d2d"] = to_json(baseline_params(Baseline::MaddahAliNiesenD2D, man));
      row["reported"] = {{"ours", quoted(fx.reported_ours, "R")},
                         {"hypercube_d2d", quoted(fx.reported_hypercube, "R")},
                         {"man_d2d", quoted(fx.reported_man_d2d, "R")}};
      rows.push_back(std::move(row));
    }
  } else {
    throw Error(ErrorCode::InvalidParameters, "table must be 1 or 2");
  }
  return rows;
}

std::string comparison_table_csv(int which) {
  std::ostringstream out;
  if (which == 1) {
    out << "q,k,m,t,K1,U1,F1,F1_ceil_log10,gamma1,K2,U2,F2,gamma2,K3,U3,F3,gamma3\n";
    for (const auto& fx : fixtures::broadcast_rows()) {
      const SchemeParams s = scheme_params(fx.ours);
      BaselineArgs yct;
      yct.q_prime = fx.yct_q;
      yct.m_prime = fx.yct_m;
      const ComparisonRow y = baseline_params(Baseline::YctPda, yct);
      out << fx.ours.q << ',' << fx.ours.k << ',' << fx.ours.m << ',' << fx.ours.t << ',' << s.users << ','
          << to_decimal(s.uncached_fraction, 2) << ',' << s.subfiles << ',' << ceil_log10(s.subfiles) << ','
          << s.gain << ',' << fx.prior_line_graph.users << ',' << fx.prior_line_graph.uncached << ','
          << fx.prior_line_graph.subpacketization << ',' << fx.prior_line_graph.last << ','
          << to_exact(y.users) << ',' << to_decimal(y.uncached_fraction, 2) << ',' << f_display(y) << ','
          << to_exact(*y.gain) << '\n';
    }
  } else if (which == 2) {
    out << "q,k,m,t,K1,U1,F1,R1,K2,U2,F2,R2,K3,U3,F3,R3\n";
    for (const auto& fx : fixtures::d2d_rows()) {
      const D2DParams d = d2d_params(fx.ours);
      const unsigned K = static_cast<unsigned>(d.users);
      BaselineArgs cube;
      cube.users = K;
      cube.side = parse_rational(fx.hypercube_side);
      BaselineArgs man;
      man.users = K;
      man.cache_fraction = d.cache_fraction;
      const ComparisonRow h = baseline_params(Baseline::HypercubeD2D, cube);
      const ComparisonRow g = baseline_params(Baseline::MaddahAliNiesenD2D, man);
      out << fx.ours.q << ',' << fx.ours.k << ',' << fx.ours.m << ',' << fx.ours.t << ',' << d.users << ','
          << to_decimal(1 - d.cache_fraction, 2) << ',' << d.subfiles << ',' << to_decimal(d.rate, 2) << ','
          << to_exact(h.users) << ',' << to_decimal(h.uncached_fraction, 2) << ',' << f_display(h) << ','
          << to_decimal(*h.rate, 2) << ',' << to_exact(g.users) << ',' << to_decimal(g.uncached_fraction, 2)
          << ',' << f_display(g) << ',' << to_decimal(*g.rate, 2) << '\n';
    }
  } else {
    throw Error(ErrorCode::InvalidParameters, "table must be 1 or 2");
  }
  return out.str();
}

}  // namespace pgcache::scheme
