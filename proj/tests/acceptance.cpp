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

// Acceptance runner: one PASS/FAIL line per criterion, with wall time
// checked against the criterion's limit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracle/counting.hpp"
#include "pgcache/cli.hpp"
#include "pgcache/linegraph.hpp"
#include "pgcache/pda.hpp"
#include "pgcache/projective.hpp"
#include "pgcache/scheme.hpp"
#include "pgcache/simulator.hpp"

using namespace pgcache;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note = what;
    ok = ok && cond;
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_ms;
  std::function<void(Outcome&)> body;
};

struct Pipeline {
  linegraph::GeometryContext ctx;
  linegraph::CachingLineGraph graph;
  linegraph::TransmissionCover cover;
  pda::Pda array;
};

Pipeline pipeline(linegraph::Parameters p) {
  Pipeline out;
  out.ctx = linegraph::build_geometry(p);
  out.graph = linegraph::build_line_graph(out.ctx);
  out.cover = linegraph::transmission_cover(out.ctx, out.graph);
  out.array = pda::line_graph_to_pda(out.graph, out.cover);
  return out;
}

std::string fmt_ms(double ms) {
  char buf[32];
  if (ms < 1.0) std::snprintf(buf, sizeof buf, "%.3f ms", ms);
  else std::snprintf(buf, sizeof buf, "%.1f ms", ms);
  return buf;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pgcache");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool intact_shape(const pda::PdaReport& r, std::size_t g, std::size_t labels, std::size_t z) {
  return r.valid() && r.regularity == std::optional<std::size_t>(g) && r.labels == labels &&
         r.stars_per_column == std::optional<std::size_t>(z);
}

void c1(Outcome& o) {
  auto s = scheme::scheme_params({2, 4, 1, 1});
  o.expect(s.users == 105, "K");
  o.expect(s.subfiles == 105, "F");
  o.expect(s.uncached_fraction == Rational(48, 105), "1-M/N");
  o.expect(to_decimal(s.uncached_fraction, 2) == "0.46", "1-M/N display");
  o.expect(s.gain == 6, "gain");
  o.expect(s.rate == 8, "R");
}

void c2(Outcome& o) {
  auto s = scheme::scheme_params({2, 5, 1, 1});
  o.expect(s.users == 465, "K");
  o.expect(s.subfiles == 465, "F");
  o.expect(s.uncached_fraction == Rational(336, 465), "1-M/N");
  o.expect(to_decimal(s.uncached_fraction, 2) == "0.72", "1-M/N display");
  o.expect(s.gain == 6, "gain");
}

void c3(Outcome& o) {
  auto a = scheme::d2d_params({2, 4, 1, 1});
  auto b = scheme::d2d_params({2, 5, 1, 1});
  o.expect(a.subfiles == 525 && a.rate == Rational(48, 5), "K=105");
  o.expect(b.subfiles == 2325 && b.rate == Rational(336, 5), "K=465");
}

void c4(Outcome& o) {
  linegraph::Parameters p{2, 4, 1, 1};
  auto pipe = pipeline(p);
  auto cf = linegraph::closed_forms(p);
  auto rep = linegraph::verify_caching_line_graph(pipe.graph, p);
  o.expect(rep.ok(), "line graph verification");
  o.expect(pipe.graph.users() == 105 && cf.users == 105, "users");
  o.expect(pipe.graph.subfiles() == 105 && cf.subfiles == 105, "subfiles");
  o.expect(pipe.graph.user_clique_size() == std::optional<std::size_t>(48) && cf.user_clique == 48, "user clique");
  o.expect(pipe.graph.subfile_clique_size() == std::optional<std::size_t>(48) && cf.subfile_clique == 48,
           "subfile clique");
  o.expect(pipe.cover.size() == 840 && cf.transmissions == 840, "transmissions");
  o.expect(pipe.graph.vertices().size() == 5040 && cf.vertices == 5040, "vertices");
  o.expect(BigInt(pipe.cover.size()) * cf.clique_size == cf.users * cf.user_clique, "S = KD/d");
  o.expect(linegraph::check_cover(pipe.graph, pipe.cover).ok(), "cover");
}

void c5(Outcome& o) {
  auto p = pipeline({2, 4, 1, 1}).array;
  auto r = pda::validate_pda(p);
  o.expect(p.users() == 105 && p.subfiles() == 105, "shape");
  o.expect(r.c1 && r.c2 && r.c3, "C1-C3");
  o.expect(intact_shape(r, 6, 840, 57), "(K,F,Z,S,g)");
  std::size_t caught = 0, total = 0;
  for (std::size_t f = 0; f < p.subfiles(); ++f) {
    for (std::size_t k = 0; k < p.users(); ++k) {
      auto m = p;
      std::uint32_t v = p.at(f, k);
      m.set(f, k, v == pda::kStar ? static_cast<std::uint32_t>(1 + (f * 105 + k) % 840) : pda::kStar);
      ++total;
      caught += !intact_shape(pda::validate_pda(m), 6, 840, 57);
      if (v != pda::kStar) {
        m.set(f, k, v % 840 + 1);
        ++total;
        caught += !intact_shape(pda::validate_pda(m), 6, 840, 57);
      }
    }
  }
  o.expect(caught == total, std::to_string(total - caught) + " of " + std::to_string(total) + " mutations missed");
  o.note = o.ok ? std::to_string(total) + " mutations caught" : o.note;
}

void c6(Outcome& o) {
  auto p = pipeline({2, 4, 1, 1}).array;
  sim::SimulationConfig cfg;
  cfg.mode = sim::Mode::Broadcast;
  cfg.files = 8;
  cfg.rounds = 10;
  cfg.seed = 2026;
  auto r = sim::verify_roundtrip(p, cfg);
  o.expect(r.decoded_ok, "decode");
  o.expect(r.decoded_users == 10 * 105, "decoded users");
  o.expect(r.measured_rate == 8, "rate");
}

void c7(Outcome& o) {
  auto p = pipeline({2, 4, 1, 1}).array;
  sim::SimulationConfig cfg;
  cfg.mode = sim::Mode::D2D;
  cfg.seed = 2026;
  auto r = sim::verify_roundtrip(p, cfg);
  o.expect(r.decoded_ok, "decode");
  o.expect(r.decoded_users == 105, "decoded users");
  o.expect(r.measured_rate == Rational(48, 5), "rate");
}

void c8(Outcome& o) {
  auto graph = fixtures::example_graph();
  auto cover = fixtures::example_cover();
  o.expect(linegraph::verify_caching_line_graph(graph).ok(), "graph");
  o.expect(linegraph::check_cover(graph, cover).ok(), "cover");
  auto p = pda::line_graph_to_pda(graph, cover);
  auto r = pda::validate_pda(p);
  o.expect(p == fixtures::example_pda(), "array");
  o.expect(p.users() == 4 && p.subfiles() == 4 && intact_shape(r, 2, 4, 2), "(4,4,2,4)");
  o.expect(Rational(BigInt(*r.stars_per_column), BigInt(p.subfiles())) == Rational(1, 2), "M/N");
  auto lib = sim::FileLibrary::generate(4, 64, 8);
  auto log = sim::deliver_broadcast(p, lib, {0, 1, 2, 3});
  o.expect(log.count() == 4, "transmissions");
  sim::SimulationConfig cfg;
  cfg.rounds = 4;
  auto rep = sim::verify_roundtrip(p, cfg);
  o.expect(rep.decoded_ok && rep.decoded_users == 16, "decode");
  o.expect(rep.measured_rate == 1, "rate");
}

void c9(Outcome& o) {
  auto tally = oracle::check_all_counts(256);
  o.expect(tally.failures.empty(), tally.failures.empty() ? "" : tally.failures.front());
  if (o.ok) o.note = std::to_string(tally.spaces) + " spaces, " + std::to_string(tally.checks) + " checks";
}

void c10(Outcome& o) {
  std::size_t checks = 0;
  for (unsigned q : {2u, 3u, 4u, 5u}) {
    for (unsigned a = 0; a <= 12; ++a) {
      for (unsigned b = 0; b <= a; ++b) {
        BigInt v = projective::gaussian_binomial(a, b, q);
        o.expect(projective::ipow(BigInt(q), (a - b) * b) <= v, "q-binomial lower");
        o.expect(v <= projective::ipow(BigInt(q), (a - b + 1) * b), "q-binomial upper");
        ++checks;
      }
    }
  }
  for (unsigned k = 4; k <= 12; ++k) {
    for (unsigned m = 1; m + 1 + 2 <= k; ++m) {
      auto r = scheme::bound_report({2, k, m, 1});
      o.expect(r.holds(), "bounds at " + linegraph::to_string(r.params));
      ++checks;
      if (r.alpha == 2) {
        o.expect(r.rate_ratio >= scheme::kRateRatioLow && r.rate_ratio <= scheme::kRateRatioHigh,
                 "rate ratio band at " + linegraph::to_string(r.params));
      }
    }
  }
  if (o.ok) o.note = std::to_string(checks) + " checks";
}

void c11(Outcome& o) {
  auto base = fs::temp_directory_path() / "pgcache_acceptance";
  fs::remove_all(base);
  const std::vector<std::string> p{"-q", "2", "-k", "4", "-m", "1", "-t", "1"};
  for (auto run : {"a", "b"}) {
    auto dir = base / run;
    std::vector<std::string> build{"build", "--out", dir.string()};
    build.insert(build.end(), p.begin(), p.end());
    o.expect(cli(build) == 0, "build");
    for (auto mode : {"broadcast", "d2d"}) {
      std::vector<std::string> s{"simulate", "--mode", mode, "--seed", "11", "--files", "8",
                                 "--out", (dir / (std::string(mode) + ".json")).string()};
      s.insert(s.end(), p.begin(), p.end());
      o.expect(cli(s) == 0, std::string("simulate ") + mode);
    }
  }
  std::size_t compared = 0;
  for (auto f : {"pda.csv", "pda.json", "linegraph.json", "broadcast.json", "d2d.json"}) {
    auto a = slurp(base / "a" / f), b = slurp(base / "b" / f);
    o.expect(!a.empty() && a == b, std::string(f) + " differs");
    ++compared;
  }
  fs::remove_all(base);
  if (o.ok) o.note = std::to_string(compared) + " artifacts identical";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "parameters (2,4,1,1): K=F=105, 1-M/N=48/105, gain 6, R=8", 1.0, c1},
      {2, "parameters (2,5,1,1): K=F=465, 1-M/N=336/465, gain 6", 1.0, c2},
      {3, "D2D parameters: (525, 48/5) and (2325, 336/5)", 1.0, c3},
      {4, "construction (2,4,1,1) matches closed forms", 60000.0, c4},
      {5, "PDA (2,4,1,1) valid, 6-regular (105,105,57,840), every single-entry mutation caught", 10000.0, c5},
      {6, "broadcast round trip (2,4,1,1), N=8, 10 demand vectors, R=8", 60000.0, c6},
      {7, "D2D round trip (2,4,1,1), R=48/5", 120000.0, c7},
      {8, "worked example: (4,4,2,4) PDA, 4 transmissions, R=1, M/N=1/2", 1000.0, c8},
      {9, "counting identities vs exhaustive enumeration, q^k <= 256", 60000.0, c9},
      {10, "bounds suite and rate-ratio band", 60000.0, c10},
      {11, "build + simulate byte-identical across runs", 60000.0, c11},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    bool in_time = ms <= c.limit_ms;
    bool pass = o.ok && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << fmt_ms(ms) << ", limit "
              << fmt_ms(c.limit_ms) << ")";
    if (!in_time) std::cout << " over time limit";
    if (!o.note.empty()) std::cout << ": " << o.note;
    std::cout << '\n';
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
