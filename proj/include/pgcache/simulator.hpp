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

// Byte-level placement and delivery driven by a PDA, for the server
// broadcast model and the serverless D2D model, with bit-exact decoding.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pgcache/common.hpp"
#include "pgcache/linegraph.hpp"
#include "pgcache/pda.hpp"

namespace pgcache::sim {

using Bytes = std::vector<std::uint8_t>;
using Demands = std::vector<std::uint32_t>;

/// FNV-1a, 64-bit.
std::uint64_t digest(std::span<const std::uint8_t> data) noexcept;

struct FileLibrary {
  std::size_t file_size = 0;
  std::uint64_t seed = 0;
  std::vector<Bytes> files;

  std::size_t count() const noexcept { return files.size(); }

  /// N files of pseudo-random bytes drawn from mt19937_64(seed).
  static FileLibrary generate(std::size_t files, std::size_t file_size, std::uint64_t seed);
};

/// What each user holds after placement: every file's copy of each subfile
/// whose PDA entry in the user's column is *.
class CacheState {
 public:
  CacheState() = default;
  CacheState(std::size_t files, std::size_t subfile_size) : files_(files), subfile_size_(subfile_size) {}

  std::size_t users() const noexcept { return users_.size(); }
  std::size_t files() const noexcept { return files_; }
  std::size_t subfile_size() const noexcept { return subfile_size_; }

  std::span<const std::uint32_t> cached_subfiles(std::size_t user) const noexcept { return users_[user].rows; }
  std::optional<std::span<const std::uint8_t>> lookup(std::size_t user, std::size_t file, std::size_t subfile) const;
  std::size_t bytes_stored(std::size_t user) const noexcept { return users_[user].data.size(); }

  void add_user(std::vector<std::uint32_t> rows, Bytes data) { users_.push_back({std::move(rows), std::move(data)}); }

 private:
  struct UserCache {
    std::vector<std::uint32_t> rows;  // sorted
    Bytes data;                       // [file][slot][byte]
  };
  std::size_t files_ = 0;
  std::size_t subfile_size_ = 0;
  std::vector<UserCache> users_;
};

/// Throws SizeMismatch unless the file size is a positive multiple of F.
CacheState place(const pda::Pda& pda, const FileLibrary& library);

/// Deterministic demand vector: one file index per user.
Demands random_demands(std::size_t users, std::size_t files, std::uint64_t seed);

struct BroadcastLog {
  std::size_t payload_size = 0;
  Bytes payloads;  // one payload per label, in label order
  Demands demands;

  std::size_t count() const noexcept { return payload_size == 0 ? 0 : payloads.size() / payload_size; }
  std::span<const std::uint8_t> payload(std::size_t i) const noexcept {
    return {payloads.data() + i * payload_size, payload_size};
  }
  std::span<std::uint8_t> payload(std::size_t i) noexcept { return {payloads.data() + i * payload_size, payload_size}; }
};

/// Label s is sent as the XOR of W_{d_k, f} over the positions (f, k) holding s.
/// Throws InvalidDemand or SizeMismatch.
BroadcastLog deliver_broadcast(const pda::Pda& pda, const FileLibrary& library, const Demands& demands);

/// Rebuilds the file demanded by `user`. Throws DecodeFailure at the first
/// subfile that cannot be recovered from the cache and the log.
Bytes decode_broadcast(std::size_t user, const pda::Pda& pda, const pda::LabelIndex& index,
                       const CacheState& cache, const BroadcastLog& log);

struct D2DTransmission {
  std::uint32_t sender = 0;
  std::uint32_t label = 0;
  std::uint32_t slot = 0;  // position of the sender among the label's occurrences
};

/// Per label s with occurrences (f_1,k_1)..(f_g,k_g): every W_{d_{k_i}, f_i} is
/// cut into g-1 parts indexed by j != i, and user k_j sends the XOR over i != j
/// of part j of W_{d_{k_i}, f_i}.
struct D2DLog {
  std::size_t part_size = 0;
  std::size_t regularity = 0;
  std::vector<D2DTransmission> transmissions;  // label-major, then slot
  Bytes payloads;
  Demands demands;

  std::span<const std::uint8_t> payload(std::size_t i) const noexcept {
    return {payloads.data() + i * part_size, part_size};
  }
};

/// Transmissions are built from the senders' caches only.
/// Throws NotRegular (g < 2 or irregular), SizeMismatch, InvalidDemand.
D2DLog deliver_d2d(const pda::Pda& pda, const CacheState& caches, const Demands& demands);

Bytes decode_d2d(std::size_t user, const pda::Pda& pda, const pda::LabelIndex& index, const CacheState& cache,
                 const D2DLog& log);

enum class Mode { Broadcast, D2D };

std::string to_string(Mode mode);

struct SimulationConfig {
  Mode mode = Mode::Broadcast;
  std::size_t files = 0;      // 0: one file per user
  std::size_t file_size = 0;  // 0: smallest admissible size; otherwise rounded up
  std::uint64_t seed = 0;
  std::size_t rounds = 1;     // random demand vectors to run
  std::optional<Demands> demands;  // replaces the random vectors when set
  std::optional<linegraph::Parameters> params;  // recorded in the report
};

struct SimulationReport {
  Mode mode = Mode::Broadcast;
  std::optional<linegraph::Parameters> params;
  std::size_t users = 0;
  std::size_t subfiles = 0;
  std::size_t labels = 0;
  std::optional<std::size_t> regularity;
  std::size_t files = 0;
  std::size_t file_size = 0;
  std::size_t padding = 0;
  std::size_t rounds = 0;
  Rational measured_rate;
  Rational formula_rate;
  std::vector<Rational> per_user_rates;  // D2D only
  bool decoded_ok = false;
  std::size_t decoded_users = 0;  // over all rounds
  std::string failure;
  std::uint64_t seed = 0;
  std::uint64_t transcript_digest = 0;
  double runtime_ms = 0.0;
};

/// Admissible file size: a multiple of F (broadcast) or F·(g-1) (D2D), at least `requested`.
std::size_t admissible_file_size(const pda::Pda& pda, Mode mode, std::size_t requested);

/// Places, delivers, and decodes for every user in each round.
SimulationReport verify_roundtrip(const pda::Pda& pda, const SimulationConfig& config);

nlohmann::json to_json(const SimulationReport& report, bool include_timing);

}  // namespace pgcache::sim
