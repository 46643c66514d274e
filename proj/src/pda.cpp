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

#include "pgcache/pda.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pgcache::pda {
namespace {

constexpr std::size_t kMaxViolations = 32;

void note(PdaReport& r, Violation v) {
  if (r.violations.size() < kMaxViolations) r.violations.push_back(std::move(v));
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::uint64_t parse_uint(const std::string& s, std::size_t line, std::size_t column) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    parse_error(line, column, "expected a non-negative integer, got '" + s + "'");
  }
  return value;
}

}  // namespace

std::uint32_t Pda::max_label() const noexcept {
  return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

LabelIndex::LabelIndex(const Pda& pda) {
  const std::uint32_t labels = pda.max_label();
  offsets_.assign(static_cast<std::size_t>(labels) + 1, 0);
  for (auto v : pda.entries())
    if (v != kStar) ++offsets_[v];
  for (std::size_t s = 1; s < offsets_.size(); ++s) offsets_[s] += offsets_[s - 1];
  positions_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t col = 0; col < pda.users(); ++col) {
    for (std::uint32_t row = 0; row < pda.subfiles(); ++row) {
      const auto v = pda.at(row, col);
      if (v != kStar) positions_[fill[v - 1]++] = {row, col};
    }
  }
}

PdaReport validate_pda(const Pda& pda) {
  PdaReport r;
  const std::size_t K = pda.users(), F = pda.subfiles();

  // C1
  r.c1 = K > 0;
  std::optional<std::size_t> z;
  for (std::size_t col = 0; col < K; ++col) {
    std::size_t stars = 0;
    for (std::size_t row = 0; row < F; ++row) stars += pda.is_star(row, col);
    if (!z) {
      z = stars;
    } else if (stars != *z) {
      r.c1 = false;
      note(r, {"C1", std::nullopt, col,
               "column has " + std::to_string(stars) + " stars, column 0 has " + std::to_string(*z)});
    }
  }
  if (r.c1) r.stars_per_column = z;

  // C2
  const std::uint32_t S = pda.max_label();
  r.labels = S;
  const LabelIndex index(pda);
  r.c2 = S > 0;
  if (S == 0) note(r, {"C2", std::nullopt, std::nullopt, "array holds no integers"});
  std::optional<std::size_t> g;
  bool regular = S > 0;
  for (std::uint32_t s = 1; s <= S; ++s) {
    const std::size_t count = index[s].size();
    if (count == 0) {
      r.c2 = false;
      note(r, {"C2", std::nullopt, std::nullopt, "integer " + std::to_string(s) + " never occurs"});
    }
    if (!g) {
      g = count;
    } else if (count != *g) {
      regular = false;
    }
  }
  if (regular) r.regularity = g;

  // C3
  r.c3 = true;
  for (std::uint32_t s = 1; s <= S; ++s) {
    auto pos = index[s];
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = i + 1; j < pos.size(); ++j) {
        const auto& a = pos[i];
        const auto& b = pos[j];
        if (a.row == b.row || a.col == b.col) {
          r.c3 = false;
          note(r, {"C3.1", b.row, b.col,
                   "integer " + std::to_string(s) + " repeats at (" + std::to_string(a.row) + "," +
                       std::to_string(a.col) + ") in the same " + (a.row == b.row ? "row" : "column")});
          continue;
        }
        if (!pda.is_star(a.row, b.col)) {
          r.c3 = false;
          note(r, {"C3.2", a.row, b.col, "cross position of integer " + std::to_string(s) + " is not *"});
        }
        if (!pda.is_star(b.row, a.col)) {
          r.c3 = false;
          note(r, {"C3.2", b.row, a.col, "cross position of integer " + std::to_string(s) + " is not *"});
        }
      }
    }
  }
  return r;
}

Pda line_graph_to_pda(const linegraph::CachingLineGraph& graph, const linegraph::TransmissionCover& cover) {
  const auto check = linegraph::check_cover(graph, cover);
  if (!check.partition) throw Error(ErrorCode::InvalidInput, "cover is not a partition: " + check.detail);
  Pda out(graph.users(), graph.subfiles());
  for (std::size_t s = 0; s < cover.size(); ++s) {
    for (auto v : cover.clique(s)) {
      const auto& vx = graph.vertex(v);
      out.set(vx.subfile, vx.user, static_cast<std::uint32_t>(s + 1));
    }
  }
  return out;
}

std::string to_csv(const Pda& pda) {
  std::string out = std::to_string(pda.users()) + "," + std::to_string(pda.subfiles()) + "\n";
  for (std::size_t row = 0; row < pda.subfiles(); ++row) {
    for (std::size_t col = 0; col < pda.users(); ++col) {
      if (col > 0) out += ',';
      const auto v = pda.at(row, col);
      if (v == kStar) {
        out += '*';
      } else {
        out += std::to_string(v);
      }
    }
    out += '\n';
  }
  return out;
}

Pda parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) parse_error(1, 1, "empty file");

  auto header = split(lines[0]);
  if (header.size() != 2) parse_error(1, 1, "header must be 'K,F'");
  const auto K = parse_uint(header[0], 1, 1);
  const auto F = parse_uint(header[1], 1, 2);
  if (K == 0 || F == 0) parse_error(1, 1, "K and F must be positive");
  if (lines.size() - 1 != F) {
    parse_error(lines.size() < F + 1 ? lines.size() + 1 : F + 2, 1,
                "expected " + std::to_string(F) + " rows, found " + std::to_string(lines.size() - 1));
  }
  Pda out(K, F);
  for (std::size_t row = 0; row < F; ++row) {
    const std::size_t line_no = row + 2;
    auto cells = split(lines[row + 1]);
    if (cells.size() != K) {
      parse_error(line_no, std::min<std::size_t>(cells.size(), K) + 1,
                  "expected " + std::to_string(K) + " entries, found " + std::to_string(cells.size()));
    }
    for (std::size_t col = 0; col < K; ++col) {
      if (cells[col] == "*") continue;
      const auto v = parse_uint(cells[col], line_no, col + 1);
      if (v == 0) parse_error(line_no, col + 1, "integers are 1-based");
      if (v > UINT32_MAX) parse_error(line_no, col + 1, "integer too large");
      out.set(row, col, static_cast<std::uint32_t>(v));
    }
  }
  return out;
}

void save_pda(const Pda& pda, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << to_csv(pda);
}

Pda load_pda(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

nlohmann::json to_json(const Pda& pda, const std::optional<linegraph::Parameters>& params) {
  using nlohmann::json;
  const PdaReport report = validate_pda(pda);
  json j;
  json meta;
  if (params) {
    meta["q"] = params->q;
    meta["k"] = params->k;
    meta["m"] = params->m;
    meta["t"] = params->t;
  }
  meta["K"] = pda.users();
  meta["F"] = pda.subfiles();
  meta["Z"] = report.stars_per_column ? json(*report.stars_per_column) : json(nullptr);
  meta["S"] = report.labels;
  meta["g"] = report.regularity ? json(*report.regularity) : json(nullptr);
  j["metadata"] = std::move(meta);
  json rows = json::array();
  for (std::size_t row = 0; row < pda.subfiles(); ++row) {
    json r = json::array();
    for (std::size_t col = 0; col < pda.users(); ++col) {
      const auto v = pda.at(row, col);
      if (v == kStar) {
        r.push_back("*");
      } else {
        r.push_back(v);
      }
    }
    rows.push_back(std::move(r));
  }
  j["entries"] = std::move(rows);
  return j;
}

Pda from_json(const nlohmann::json& j) {
  try {
    const auto& rows = j.at("entries");
    const std::size_t F = rows.size();
    const std::size_t K = F == 0 ? 0 : rows.at(0).size();
    if (F == 0 || K == 0) throw Error(ErrorCode::ParseError, "empty entries");
    Pda out(K, F);
    for (std::size_t row = 0; row < F; ++row) {
      if (rows[row].size() != K) throw Error(ErrorCode::ParseError, "ragged row " + std::to_string(row));
      for (std::size_t col = 0; col < K; ++col) {
        const auto& cell = rows[row][col];
        if (cell.is_string() && cell.get<std::string>() == "*") continue;
        if (!cell.is_number_unsigned() || cell.get<std::uint64_t>() == 0) {
          throw Error(ErrorCode::ParseError, "bad entry at row " + std::to_string(row) + ", column " +
                                                 std::to_string(col));
        }
        out.set(row, col, cell.get<std::uint32_t>());
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json to_json(const PdaReport& report) {
  using nlohmann::json;
  json j;
  j["C1"] = report.c1;
  j["C2"] = report.c2;
  j["C3"] = report.c3;
  j["valid"] = report.valid();
  j["Z"] = report.stars_per_column ? json(*report.stars_per_column) : json(nullptr);
  j["S"] = report.labels;
  j["g"] = report.regularity ? json(*report.regularity) : json("irregular");
  json v = json::array();
  for (const auto& x : report.violations) {
    v.push_back({{"condition", x.condition},
                 {"row", x.row ? json(*x.row) : json(nullptr)},
                 {"col", x.col ? json(*x.col) : json(nullptr)},
                 {"detail", x.detail}});
  }
  j["violations"] = std::move(v);
  return j;
}

}  // namespace pgcache::pda
