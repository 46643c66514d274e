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

// The caching line graph built from superspaces of a fixed anchor W:
// users are pairs of t-dim superspaces spanning a (t+1)-space, subfiles are
// (m+1)-sets spanning an (m+t)-space, and transmissions are (m+3)-sets
// spanning an (m+t+2)-space.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pgcache/common.hpp"
#include "pgcache/gf.hpp"

namespace pgcache::linegraph {

struct Parameters {
  unsigned q = 2;
  unsigned k = 4;
  unsigned m = 1;
  unsigned t = 1;

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

std::string to_string(const Parameters& p);

/// Throws InvalidParameters unless m, t >= 1, m + t + 2 <= k and q is a prime power.
void validate(const Parameters& p);

/// Closed-form K, F, D = |C_X|, c = |C_Y|, the clique size d = C(m+3, 2),
/// S = K·D/d and the vertex count K·D.
struct ClosedForms {
  BigInt users;
  BigInt subfiles;
  BigInt user_clique;
  BigInt subfile_clique;
  BigInt clique_size;
  BigInt transmissions;
  BigInt vertices;
};

ClosedForms closed_forms(const Parameters& p);

inline constexpr std::uint64_t kDefaultMaxVertices = 1'000'000;

/// PGCACHE_MAX_VERTICES when set to a positive integer, `fallback` otherwise.
std::uint64_t max_vertices_from_env(std::uint64_t fallback = kDefaultMaxVertices);

/// Sorted, lexicographically ordered table of fixed-arity index tuples.
class SetTable {
 public:
  explicit SetTable(std::size_t arity = 0) : arity_(arity) {}

  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return arity_ == 0 ? 0 : data_.size() / arity_; }
  std::span<const std::uint32_t> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * arity_, arity_};
  }
  /// Appends a tuple; callers append in lexicographic order.
  void push_back(std::span<const std::uint32_t> tuple) { data_.insert(data_.end(), tuple.begin(), tuple.end()); }
  std::optional<std::size_t> find(std::span<const std::uint32_t> tuple) const;

 private:
  std::size_t arity_;
  std::vector<std::uint32_t> data_;
};

struct GeometryOptions {
  std::uint64_t max_vertices = kDefaultMaxVertices;
  /// Overrides the default anchor span{e_{k-t+2}, ..., e_k}; must have dim t - 1.
  std::optional<gf::Subspace> anchor;
};

struct GeometryContext {
  Parameters params;
  gf::Field field = gf::Field::make(2);
  gf::Subspace anchor;
  std::vector<gf::Subspace> members;  // the t-dim superspaces of the anchor, canonical order
  SetTable users{2};
  SetTable subfiles;
  SetTable transmissions;
};

/// Index tuples (ascending) of `size` members whose sum has dimension dim(anchor) + size.
SetTable independent_sets(const gf::Field& field, const gf::Subspace& anchor,
                          std::span<const gf::Subspace> members, std::size_t size);

/// Enumerates the member family and the user/subfile/transmission sets.
/// Throws InvalidParameters, or InstanceTooLarge when K·D exceeds the cap.
GeometryContext build_geometry(const Parameters& p, const GeometryOptions& options = {});

struct Vertex {
  std::uint32_t user = 0;
  std::uint32_t subfile = 0;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Vertices are (user, subfile) pairs marking what a user does not cache.
class CachingLineGraph {
 public:
  CachingLineGraph() = default;
  CachingLineGraph(std::size_t users, std::size_t subfiles, std::vector<Vertex> vertices);

  std::size_t users() const noexcept { return users_; }
  std::size_t subfiles() const noexcept { return subfiles_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const Vertex& vertex(std::size_t i) const noexcept { return vertices_[i]; }

  std::optional<std::size_t> find(Vertex v) const;
  bool contains(Vertex v) const { return find(v).has_value(); }

  /// Vertex indices of a user clique (contiguous) and a subfile clique.
  std::span<const Vertex> user_clique(std::size_t user) const;
  std::span<const std::uint32_t> subfile_clique(std::size_t subfile) const;

  /// Common clique sizes when every clique of the kind has the same size.
  std::optional<std::size_t> user_clique_size() const;
  std::optional<std::size_t> subfile_clique_size() const;

  /// Copy with vertex i removed.
  CachingLineGraph without(std::size_t i) const;

 private:
  std::size_t users_ = 0;
  std::size_t subfiles_ = 0;
  std::vector<Vertex> vertices_;               // sorted by (user, subfile)
  std::vector<std::size_t> user_offsets_;      // users_ + 1
  std::vector<std::size_t> subfile_offsets_;   // subfiles_ + 1
  std::vector<std::uint32_t> by_subfile_;      // vertex indices grouped by subfile
};

/// A vertex (X, Y) exists iff the sum over X ∪ Y has dimension m + t + 2.
CachingLineGraph build_line_graph(const GeometryContext& ctx);

struct VerificationReport {
  bool p1 = false;  // user cliques share one size D
  bool p2 = false;  // subfile cliques share one size c
  bool p3 = false;  // each vertex names exactly one in-range user and subfile
  std::optional<bool> closed_forms;
  std::size_t users = 0;
  std::size_t subfiles = 0;
  std::optional<std::size_t> user_clique;
  std::optional<std::size_t> subfile_clique;
  std::vector<std::string> failures;

  bool ok() const noexcept { return p1 && p2 && p3 && closed_forms.value_or(true); }
};

VerificationReport verify_caching_line_graph(const CachingLineGraph& graph);
/// Also compares measured K, F, D, c with the closed forms for `p`.
VerificationReport verify_caching_line_graph(const CachingLineGraph& graph, const Parameters& p);

/// Edge rule of the complement of the square: distinct users, distinct
/// subfiles, and both cross pairs absent. Throws UnknownVertex.
bool is_edge_complement_square(const CachingLineGraph& graph, Vertex a, Vertex b);

/// Disjoint cliques of the complement-square graph, stored as vertex indices.
class TransmissionCover {
 public:
  TransmissionCover() = default;
  explicit TransmissionCover(std::size_t clique_size) : clique_size_(clique_size) {}

  std::size_t clique_size() const noexcept { return clique_size_; }
  std::size_t size() const noexcept { return clique_size_ == 0 ? 0 : members_.size() / clique_size_; }
  std::span<const std::uint32_t> clique(std::size_t i) const noexcept {
    return {members_.data() + i * clique_size_, clique_size_};
  }
  void push_back(std::span<const std::uint32_t> clique);

 private:
  std::size_t clique_size_ = 0;
  std::vector<std::uint32_t> members_;
};

struct CoverCheck {
  bool partition = false;  // every vertex in exactly one clique
  bool cliques = false;    // every intra-clique pair is an edge
  std::string detail;

  bool ok() const noexcept { return partition && cliques; }
};

CoverCheck check_cover(const CachingLineGraph& graph, const TransmissionCover& cover);

/// One clique per transmission set Z: {({V_i, V_j}, Z \ {V_i, V_j})}.
/// Throws InternalInconsistency if the result is not a clique partition.
TransmissionCover transmission_cover(const GeometryContext& ctx, const CachingLineGraph& graph);

nlohmann::json to_json(const GeometryContext& ctx, const CachingLineGraph& graph,
                       const TransmissionCover& cover);
nlohmann::json to_json(const VerificationReport& report);

}  // namespace pgcache::linegraph
