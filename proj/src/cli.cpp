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

#include "pgcache/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pgcache/common.hpp"
#include "pgcache/linegraph.hpp"
#include "pgcache/pda.hpp"
#include "pgcache/scheme.hpp"
#include "pgcache/simulator.hpp"

namespace pgcache::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ParamOptions {
  unsigned q = 0;
  unsigned k = 0;
  unsigned m = 0;
  unsigned t = 0;
  CLI::Option* q_opt = nullptr;

  bool given() const { return q_opt->count() > 0; }
  linegraph::Parameters get() const { return {q, k, m, t}; }
};

void add_params(CLI::App* app, ParamOptions& p, bool required) {
  p.q_opt = app->add_option("-q", p.q, "field size (prime power)");
  auto* k = app->add_option("-k", p.k, "ambient dimension");
  auto* m = app->add_option("-m", p.m, "user/subfile dimension offset");
  auto* t = app->add_option("-t", p.t, "anchor dimension");
  if (required) {
    for (auto* o : {p.q_opt, k, m, t}) o->required();
  } else {
    for (auto* o : {k, m, t}) o->needs(p.q_opt);
    p.q_opt->needs(k)->needs(m)->needs(t);
  }
}

struct Pipeline {
  linegraph::GeometryContext ctx;
  linegraph::CachingLineGraph graph;
  linegraph::TransmissionCover cover;
  pda::Pda array;
};

Pipeline run_pipeline(const linegraph::Parameters& p, std::uint64_t max_vertices) {
  linegraph::GeometryOptions opts;
  opts.max_vertices = max_vertices;
  auto ctx = linegraph::build_geometry(p, opts);
  auto graph = linegraph::build_line_graph(ctx);
  auto cover = linegraph::transmission_cover(ctx, graph);
  auto array = pda::line_graph_to_pda(graph, cover);
  return {std::move(ctx), std::move(graph), std::move(cover), std::move(array)};
}

pda::Pda load_any(const fs::path& path) {
  if (path.extension() == ".json") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return pda::from_json(j);
  }
  return pda::load_pda(path);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::InvalidInput, "write failed for " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("exact")) return v["exact"].get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// Flat CSV view of an array of objects; nested values become their exact or JSON text.
std::string to_csv(const json& rows) {
  std::ostringstream out;
  if (rows.empty()) return {};
  std::vector<std::string> keys;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out << (i ? "," : "") << (row.contains(keys[i]) ? csv_cell(row[keys[i]]) : "");
    }
    out << '\n';
  }
  return out.str();
}

json flat_params(const scheme::SchemeParams& s, const scheme::D2DParams& d) {
  json j;
  j["q"] = s.params.q;
  j["k"] = s.params.k;
  j["m"] = s.params.m;
  j["t"] = s.params.t;
  j["K"] = s.users.str();
  j["F"] = s.subfiles.str();
  j["F_ceil_log10"] = scheme::ceil_log10(s.subfiles);
  j["D"] = s.user_clique.str();
  j["c"] = s.subfile_clique.str();
  j["S"] = s.transmissions.str();
  j["cache_fraction"] = to_exact(s.cache_fraction);
  j["uncached_fraction"] = to_exact(s.uncached_fraction);
  j["uncached_fraction_decimal"] = to_decimal(s.uncached_fraction, 2);
  j["rate"] = to_exact(s.rate);
  j["gain"] = s.gain;
  j["F_d2d"] = d.subfiles.str();
  j["rate_d2d"] = to_exact(d.rate);
  j["rate_d2d_decimal"] = to_decimal(d.rate, 2);
  return j;
}

struct CommonOptions {
  std::string format = "json";
  std::uint64_t max_vertices = linegraph::kDefaultMaxVertices;
};

void add_format(CLI::App* app, CommonOptions& c) {
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_cap(CLI::App* app, CommonOptions& c) {
  app->add_option("--max-vertices", c.max_vertices, "largest line graph to build");
}

int cmd_params(const ParamOptions& po, const CommonOptions& c, std::ostream& out) {
  auto p = po.get();
  auto s = scheme::scheme_params(p);
  auto d = scheme::d2d_params(p);
  if (c.format == "csv") {
    out << to_csv(json::array({flat_params(s, d)}));
  } else {
    out << dump({{"broadcast", scheme::to_json(s)}, {"d2d", scheme::to_json(d)}});
  }
  return kExitOk;
}

json closed_form_check(const pda::PdaReport& report, const pda::Pda& array, const scheme::SchemeParams& s) {
  std::size_t F = array.subfiles();
  Rational cache(BigInt(report.stars_per_column.value_or(0)), BigInt(F));
  Rational rate(BigInt(report.labels), BigInt(F));
  bool ok = report.valid() && BigInt(array.users()) == s.users && BigInt(F) == s.subfiles &&
            BigInt(report.labels) == s.transmissions && cache == s.cache_fraction && rate == s.rate &&
            report.regularity == std::optional<std::size_t>(s.gain);
  return {{"cache_fraction", to_exact(cache)}, {"rate", to_exact(rate)}, {"matches_closed_forms", ok}};
}

int cmd_build(const ParamOptions& po, const CommonOptions& c, const std::string& dir, std::ostream& out) {
  auto p = po.get();
  auto pipe = run_pipeline(p, c.max_vertices);
  auto graph_report = linegraph::verify_caching_line_graph(pipe.graph, p);
  auto cover_check = linegraph::check_cover(pipe.graph, pipe.cover);
  auto pda_report = pda::validate_pda(pipe.array);
  fs::path base(dir);
  fs::create_directories(base);
  write_file(base / "pda.csv", pda::to_csv(pipe.array));
  write_file(base / "pda.json", dump(pda::to_json(pipe.array, p)));
  write_file(base / "linegraph.json", dump(linegraph::to_json(pipe.ctx, pipe.graph, pipe.cover)));
  bool ok = graph_report.ok() && cover_check.ok() && pda_report.valid();
  json j;
  j["params"] = {{"q", p.q}, {"k", p.k}, {"m", p.m}, {"t", p.t}};
  j["files"] = {"pda.csv", "pda.json", "linegraph.json"};
  j["line_graph"] = linegraph::to_json(graph_report);
  j["cover"] = {{"partition", cover_check.partition}, {"cliques", cover_check.cliques}};
  j["pda"] = pda::to_json(pda_report);
  j["ok"] = ok;
  out << dump(j);
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const ParamOptions& po, const CommonOptions& c, const std::string& pda_path, std::ostream& out) {
  json j;
  bool ok = true;
  if (!pda_path.empty()) {
    auto array = load_any(pda_path);
    auto report = pda::validate_pda(array);
    j["source"] = pda_path;
    j["K"] = array.users();
    j["F"] = array.subfiles();
    j["pda"] = pda::to_json(report);
    ok = report.valid();
  } else {
    auto p = po.get();
    auto s = scheme::scheme_params(p);
    auto pipe = run_pipeline(p, c.max_vertices);
    auto graph_report = linegraph::verify_caching_line_graph(pipe.graph, p);
    auto cover_check = linegraph::check_cover(pipe.graph, pipe.cover);
    auto pda_report = pda::validate_pda(pipe.array);
    auto closed = closed_form_check(pda_report, pipe.array, s);
    j["params"] = {{"q", p.q}, {"k", p.k}, {"m", p.m}, {"t", p.t}};
    j["line_graph"] = linegraph::to_json(graph_report);
    j["cover"] = {{"partition", cover_check.partition}, {"cliques", cover_check.cliques}};
    if (!cover_check.ok()) j["cover"]["detail"] = cover_check.detail;
    j["pda"] = pda::to_json(pda_report);
    j["scheme"] = closed;
    ok = graph_report.ok() && cover_check.ok() && pda_report.valid() && closed["matches_closed_forms"].get<bool>();
  }
  j["ok"] = ok;
  out << dump(j);
  return ok ? kExitOk : kExitCheckFailed;
}

struct SimOptions {
  std::string mode = "broadcast";
  std::uint64_t seed = 0;
  std::size_t files = 0;
  std::size_t file_size = 0;
  std::size_t rounds = 1;
  bool worst_case = false;
  bool timing = false;
  std::string pda_path;
  std::string out_path;
};

int cmd_simulate(const ParamOptions& po, const CommonOptions& c, const SimOptions& so, std::ostream& out) {
  sim::SimulationConfig cfg;
  cfg.mode = so.mode == "d2d" ? sim::Mode::D2D : sim::Mode::Broadcast;
  cfg.seed = so.seed;
  cfg.files = so.files;
  cfg.file_size = so.file_size;
  cfg.rounds = so.rounds;
  pda::Pda array;
  if (!so.pda_path.empty()) {
    array = load_any(so.pda_path);
  } else {
    cfg.params = po.get();
    array = run_pipeline(*cfg.params, c.max_vertices).array;
  }
  if (so.worst_case) cfg.demands = sim::Demands(array.users(), 0);
  auto report = sim::verify_roundtrip(array, cfg);
  std::string text = dump(sim::to_json(report, so.timing));
  if (!so.out_path.empty()) write_file(so.out_path, text);
  out << text;
  bool ok = report.decoded_ok && report.measured_rate == report.formula_rate;
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_table(int which, const CommonOptions& c, std::ostream& out) {
  if (c.format == "csv") {
    out << scheme::comparison_table_csv(which);
  } else {
    out << dump(scheme::comparison_table(which));
  }
  return kExitOk;
}

int cmd_bounds(const ParamOptions& po, unsigned k_max, const CommonOptions& c, std::ostream& out) {
  auto base = po.get();
  unsigned last = std::max(k_max, base.k);
  json rows = json::array();
  bool ok = true;
  const unsigned alpha = base.k - base.m - base.t;
  const bool band_family = base.q == 2 && alpha == 2 && base.t == 1;
  for (unsigned k = base.k; k <= last; ++k) {
    linegraph::Parameters p = base;
    p.k = k;
    p.m = k - base.t - alpha;
    auto r = scheme::bound_report(p);
    json row = scheme::to_json(r);
    ok = ok && r.holds();
    if (band_family) {
      bool in_band = r.rate_ratio >= scheme::kRateRatioLow && r.rate_ratio <= scheme::kRateRatioHigh;
      ok = ok && in_band;
      row["rate_ratio_in_band"] = in_band;
    } else {
      row["rate_ratio_in_band"] = nullptr;
    }
    rows.push_back(row);
  }
  if (c.format == "csv") {
    json flat = json::array();
    for (const auto& row : rows) {
      json f;
      for (auto it = row.begin(); it != row.end(); ++it) {
        if (it.key() == "params") {
          for (auto pit = it->begin(); pit != it->end(); ++pit) f[pit.key()] = *pit;
        } else {
          f[it.key()] = *it;
        }
      }
      flat.push_back(f);
    }
    out << to_csv(flat);
  } else {
    out << dump({{"rate_ratio_band", {scheme::kRateRatioLow, scheme::kRateRatioHigh}}, {"rows", rows}, {"ok", ok}});
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const std::vector<unsigned>& fields, unsigned k_min, unsigned k_max, unsigned m_max, unsigned t_max,
              const CommonOptions& c, std::ostream& out) {
  json rows = json::array();
  for (unsigned q : fields) {
    for (unsigned k = k_min; k <= k_max; ++k) {
      for (unsigned m = 1; m <= m_max; ++m) {
        for (unsigned t = 1; t <= t_max; ++t) {
          if (m + t + 2 > k) continue;
          linegraph::Parameters p{q, k, m, t};
          rows.push_back(flat_params(scheme::scheme_params(p), scheme::d2d_params(p)));
        }
      }
    }
  }
  out << (c.format == "csv" ? to_csv(rows) : dump(rows));
  return kExitOk;
}

int cmd_select(const std::string& users, const std::string& fraction, const std::vector<unsigned>& fields,
               unsigned k_max, std::ostream& out) {
  BigInt target;
  try {
    target = BigInt(users);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "--users must be a positive integer");
  }
  scheme::SearchBox box;
  box.fields = fields;
  box.max_k = k_max;
  auto found = scheme::select_parameters(target, parse_rational(fraction), box);
  if (!found) {
    out << dump({{"found", false}});
    return kExitCheckFailed;
  }
  out << dump({{"found", true}, {"scheme", scheme::to_json(*found)}});
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projective-geometry coded caching toolkit"};
  app.name("pgcache");
  app.require_subcommand(1);

  CommonOptions common;
  common.max_vertices = linegraph::max_vertices_from_env();

  ParamOptions params_p, build_p, verify_p, sim_p, bounds_p;

  auto* params = app.add_subcommand("params", "scheme parameters from closed forms");
  add_params(params, params_p, true);
  add_format(params, common);

  std::string out_dir = ".";
  auto* build = app.add_subcommand("build", "construct line graph, cover and PDA files");
  add_params(build, build_p, true);
  add_cap(build, common);
  build->add_option("--out", out_dir, "output directory");

  std::string verify_pda;
  auto* verify = app.add_subcommand("verify", "check a constructed instance or a PDA file");
  add_params(verify, verify_p, false);
  add_cap(verify, common);
  auto* verify_pda_opt = verify->add_option("--pda", verify_pda, "PDA file (.csv or .json)");
  verify_pda_opt->excludes(verify_p.q_opt);

  SimOptions so;
  auto* simulate = app.add_subcommand("simulate", "byte-level placement, delivery and decoding");
  add_params(simulate, sim_p, false);
  add_cap(simulate, common);
  simulate->add_option("--mode", so.mode, "delivery model")->check(CLI::IsMember({"broadcast", "d2d"}));
  simulate->add_option("--seed", so.seed, "library and demand seed");
  simulate->add_option("--files", so.files, "library size N (default K)");
  simulate->add_option("--file-size", so.file_size, "bytes per file, padded up to an admissible size");
  simulate->add_option("--rounds", so.rounds, "random demand vectors")->check(CLI::PositiveNumber);
  simulate->add_flag("--worst-case", so.worst_case, "every user demands file 0");
  simulate->add_flag("--timing", so.timing, "include runtime_ms in the report");
  simulate->add_option("--out", so.out_path, "also write the report here");
  auto* sim_pda_opt = simulate->add_option("--pda", so.pda_path, "PDA file (.csv or .json)");
  sim_pda_opt->excludes(sim_p.q_opt);

  int which = 1;
  auto* table = app.add_subcommand("table", "comparison tables");
  table->add_option("--which", which, "table number")->check(CLI::IsMember({1, 2}));
  add_format(table, common);

  unsigned bounds_k_max = 0;
  auto* bounds = app.add_subcommand("bounds", "bound and growth-rate report");
  add_params(bounds, bounds_p, true);
  bounds->add_option("--k-max", bounds_k_max, "sweep k up to this value, keeping k-m-t and t fixed");
  add_format(bounds, common);

  std::vector<unsigned> sweep_fields{2, 3, 4, 5};
  unsigned sweep_k_min = 4, sweep_k_max = 8, sweep_m_max = 2, sweep_t_max = 2;
  auto* sweep = app.add_subcommand("sweep", "parameter grid");
  sweep->add_option("--fields", sweep_fields, "field sizes")->delimiter(',');
  sweep->add_option("--k-min", sweep_k_min, "smallest k");
  sweep->add_option("--k-max", sweep_k_max, "largest k");
  sweep->add_option("--m-max", sweep_m_max, "largest m");
  sweep->add_option("--t-max", sweep_t_max, "largest t");
  add_format(sweep, common);

  std::string select_users, select_fraction;
  std::vector<unsigned> select_fields = scheme::SearchBox{}.fields;
  unsigned select_k_max = scheme::SearchBox{}.max_k;
  auto* select = app.add_subcommand("select", "smallest scheme covering a target (K, M/N)");
  select->add_option("--users", select_users, "target user count")->required();
  select->add_option("--cache-fraction", select_fraction, "largest acceptable M/N")->required();
  select->add_option("--fields", select_fields, "field sizes")->delimiter(',');
  select->add_option("--k-max", select_k_max, "largest k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*params) return cmd_params(params_p, common, out);
    if (*build) return cmd_build(build_p, common, out_dir, out);
    if (*verify) {
      if (verify_pda.empty() && !verify_p.given()) {
        err << "verify: give -q -k -m -t or --pda\n";
        return kExitUsage;
      }
      return cmd_verify(verify_p, common, verify_pda, out);
    }
    if (*simulate) {
      if (so.pda_path.empty() && !sim_p.given()) {
        err << "simulate: give -q -k -m -t or --pda\n";
        return kExitUsage;
      }
      return cmd_simulate(sim_p, common, so, out);
    }
    if (*table) return cmd_table(which, common, out);
    if (*bounds) return cmd_bounds(bounds_p, bounds_k_max, common, out);
    if (*sweep) return cmd_sweep(sweep_fields, sweep_k_min, sweep_k_max, sweep_m_max, sweep_t_max, common, out);
    if (*select) return cmd_select(select_users, select_fraction, select_fields, select_k_max, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pgcache::cli
