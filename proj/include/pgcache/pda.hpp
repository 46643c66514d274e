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

// Placement delivery arrays: an F x K array over {*} ∪ [S]. Row f, column k
// holds * when user k caches subfile f, otherwise the label of the coded
// transmission that delivers it.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pgcache/linegraph.hpp"

namespace pgcache::pda {

inline constexpr std::uint32_t kStar = 0;

class Pda {
 public:
  Pda() = default;
  /// All-star array with `users` columns and `subfiles` rows.
  Pda(std::size_t users, std::size_t subfiles)
      : users_(users), subfiles_(subfiles), entries_(users * subfiles, kStar) {}

  std::size_t users() const noexcept { return users_; }
  std::size_t subfiles() const noexcept { return subfiles_; }

  std::uint32_t at(std::size_t row, std::size_t col) const noexcept { return entries_[row * users_ + col]; }
  bool is_star(std::size_t row, std::size_t col) const noexcept { return at(row, col) == kStar; }
  void set(std::size_t row, std::size_t col, std::uint32_t value) noexcept { entries_[row * users_ + col] = value; }

  const std::vector<std::uint32_t>& entries() const noexcept { return entries_; }
  std::uint32_t max_label() const noexcept;

  friend bool operator==(const Pda&, const Pda&) = default;

 private:
  std::size_t users_ = 0;
  std::size_t subfiles_ = 0;
  std::vector<std::uint32_t> entries_;  // row-major
};

struct Position {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
};

/// Occurrences of every label, each list sorted by (col, row).
class LabelIndex {
 public:
  explicit LabelIndex(const Pda& pda);

  std::size_t labels() const noexcept { return offsets_.size() - 1; }
  /// Positions of label s (1-based).
  std::span<const Position> operator[](std::uint32_t s) const noexcept {
    return {positions_.data() + offsets_[s - 1], offsets_[s] - offsets_[s - 1]};
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Position> positions_;
};

struct Violation {
  std::string condition;  // "C1", "C2", "C3.1", "C3.2"
  std::optional<std::size_t> row;
  std::optional<std::size_t> col;
  std::string detail;
};

struct PdaReport {
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;
  std::optional<std::size_t> stars_per_column;  // Z
  std::size_t labels = 0;                       // S
  std::optional<std::size_t> regularity;        // g
  std::vector<Violation> violations;

  bool valid() const noexcept { return c1 && c2 && c3; }
};

PdaReport validate_pda(const Pda& pda);

/// Star where (k, f) is not a vertex, otherwise 1 + the index of the cover clique holding it.
/// Throws InvalidInput if the cover does not partition the vertices.
Pda line_graph_to_pda(const linegraph::CachingLineGraph& graph, const linegraph::TransmissionCover& cover);

/// CSV: a "K,F" header, then F rows of K entries, each "*" or a positive integer.
std::string to_csv(const Pda& pda);
/// Throws ParseError naming the line and column.
Pda parse_csv(std::string_view text);
void save_pda(const Pda& pda, const std::filesystem::path& path);
Pda load_pda(const std::filesystem::path& path);

nlohmann::json to_json(const Pda& pda, const std::optional<linegraph::Parameters>& params = std::nullopt);
Pda from_json(const nlohmann::json& j);
nlohmann::json to_json(const PdaReport& report);

}  // namespace pgcache::pda
