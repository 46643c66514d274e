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

#include "pgcache/linegraph.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "pgcache/projective.hpp"

namespace pgcache::linegraph {
namespace {

BigInt exact_div(const BigInt& num, const BigInt& den, const char* what) {
  if (num % den != 0) throw Error(ErrorCode::InternalInconsistency, std::string("non-integral ") + what);
  return num / den;
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

gf::Subspace default_anchor(const gf::Field& field, std::size_t k, std::size_t t) {
  std::vector<gf::FqVector> basis;
  for (std::size_t i = k - (t - 1); i < k; ++i) {
    gf::FqVector e(k, 0);
    e[i] = 1;
    basis.push_back(std::move(e));
  }
  return gf::span(field, basis, k);
}

gf::Subspace sum_of(const gf::Field& field, const gf::Subspace& anchor,
                    std::span<const gf::Subspace> members, std::span<const std::uint32_t> idx) {
  gf::Subspace s = anchor;
  for (auto i : idx) s = gf::subspace_sum(field, s, members[i]);
  return s;
}

}  // namespace

std::string to_string(const Parameters& p) {
  return "(q=" + std::to_string(p.q) + ", k=" + std::to_string(p.k) + ", m=" + std::to_string(p.m) +
         ", t=" + std::to_string(p.t) + ")";
}

void validate(const Parameters& p) {
  if (p.m < 1 || p.t < 1) throw Error(ErrorCode::InvalidParameters, "m and t must be >= 1 " + to_string(p));
  if (p.m + p.t + 2 > p.k) throw Error(ErrorCode::InvalidParameters, "m + t + 2 > k " + to_string(p));
  if (gf::prime_power_decomposition(p.q).first == 0 || p.q > gf::kMaxOrder) {
    throw Error(ErrorCode::InvalidParameters, "q is not a supported prime power " + to_string(p));
  }
}

ClosedForms closed_forms(const Parameters& p) {
  validate(p);
  using projective::gaussian_binomial;
  using projective::ipow;
  const unsigned q = p.q, k = p.k, m = p.m, t = p.t;
  ClosedForms out;
  out.users = exact_div(BigInt(q) * gaussian_binomial(k - t + 1, 1, q) * gaussian_binomial(k - t, 1, q), 2, "K");

  BigInt prod = 1;
  for (unsigned i = 0; i <= m; ++i) prod *= ipow(q, m + 1) - ipow(q, i);
  out.subfiles = exact_div(gaussian_binomial(k - t + 1, m + 1, q) * prod,
                           factorial(m + 1) * ipow(q - 1, m + 1), "F");

  BigInt lines = 1;
  for (unsigned i = 1; i <= m + 1; ++i) lines *= gaussian_binomial(k - t - i, 1, q);
  out.user_clique = exact_div(ipow(q, (m + 1) * (m + 4) / 2) * lines, factorial(m + 1), "|C_X|");

  out.subfile_clique = exact_div(ipow(q, 2 * m + 3) * gaussian_binomial(k - m - t, 1, q) *
                                     gaussian_binomial(k - m - t - 1, 1, q),
                                 2, "|C_Y|");
  out.clique_size = (m + 3) * (m + 2) / 2;
  out.vertices = out.users * out.user_clique;
  if (out.vertices != out.subfiles * out.subfile_clique) {
    throw Error(ErrorCode::InternalInconsistency, "K|C_X| != F|C_Y| " + to_string(p));
  }
  out.transmissions = exact_div(out.vertices, out.clique_size, "S");
  return out;
}

std::uint64_t max_vertices_from_env(std::uint64_t fallback) {
  const char* raw = std::getenv("PGCACHE_MAX_VERTICES");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) return fallback;
  return value;
}

std::optional<std::size_t> SetTable::find(std::span<const std::uint32_t> tuple) const {
  if (tuple.size() != arity_) return std::nullopt;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto row = (*this)[mid];
    if (std::lexicographical_compare(row.begin(), row.end(), tuple.begin(), tuple.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::equal(tuple.begin(), tuple.end(), (*this)[lo].begin())) return lo;
  return std::nullopt;
}

SetTable independent_sets(const gf::Field& field, const gf::Subspace& anchor,
                          std::span<const gf::Subspace> members, std::size_t size) {
  SetTable out(size);
  if (size == 0) return out;
  const std::size_t n = members.size();
  std::vector<std::uint32_t> stack;
  std::vector<gf::Subspace> sums{anchor};
  stack.reserve(size);
  // depth-first in lexicographic order; every member must raise the dimension by one
  auto recurse = [&](auto&& self, std::uint32_t start) -> void {
    if (stack.size() == size) {
      out.push_back(stack);
      return;
    }
    const std::size_t remaining = size - stack.size();
    for (std::uint32_t i = start; i + remaining <= n; ++i) {
      gf::Subspace next = gf::subspace_sum(field, sums.back(), members[i]);
      if (next.dim() != sums.back().dim() + 1) continue;
      stack.push_back(i);
      sums.push_back(std::move(next));
      self(self, i + 1);
      sums.pop_back();
      stack.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

GeometryContext build_geometry(const Parameters& p, const GeometryOptions& options) {
  validate(p);
  const ClosedForms expected = closed_forms(p);
  if (expected.vertices > options.max_vertices) {
    throw Error(ErrorCode::InstanceTooLarge, to_string(p) + " has " + expected.vertices.str() +
                                                 " vertices, cap is " + std::to_string(options.max_vertices));
  }
  GeometryContext ctx;
  ctx.params = p;
  ctx.field = gf::Field::make(p.q);
  if (options.anchor) {
    if (options.anchor->ambient_dim() != p.k || options.anchor->dim() != p.t - 1) {
      throw Error(ErrorCode::InvalidParameters, "anchor must be a (t-1)-dim subspace of F_q^k");
    }
    ctx.anchor = *options.anchor;
  } else {
    ctx.anchor = default_anchor(ctx.field, p.k, p.t);
  }
  ctx.members = projective::enumerate_superspaces(ctx.field, ctx.anchor, p.t);
  ctx.users = independent_sets(ctx.field, ctx.anchor, ctx.members, 2);
  ctx.subfiles = independent_sets(ctx.field, ctx.anchor, ctx.members, p.m + 1);
  ctx.transmissions = independent_sets(ctx.field, ctx.anchor, ctx.members, p.m + 3);
  return ctx;
}

// ---------------------------------------------------------------------------

CachingLineGraph::CachingLineGraph(std::size_t users, std::size_t subfiles, std::vector<Vertex> vertices)
    : users_(users), subfiles_(subfiles), vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  user_offsets_.assign(users_ + 1, 0);
  subfile_offsets_.assign(subfiles_ + 1, 0);
  for (const auto& v : vertices_) {
    if (v.user < users_) ++user_offsets_[v.user + 1];
    if (v.subfile < subfiles_) ++subfile_offsets_[v.subfile + 1];
  }
  std::partial_sum(user_offsets_.begin(), user_offsets_.end(), user_offsets_.begin());
  std::partial_sum(subfile_offsets_.begin(), subfile_offsets_.end(), subfile_offsets_.begin());
  by_subfile_.assign(subfile_offsets_.back(), 0);
  std::vector<std::size_t> fill(subfile_offsets_.begin(), subfile_offsets_.end() - 1);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto f = vertices_[i].subfile;
    if (f < subfiles_) by_subfile_[fill[f]++] = static_cast<std::uint32_t>(i);
  }
}

std::optional<std::size_t> CachingLineGraph::find(Vertex v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::span<const Vertex> CachingLineGraph::user_clique(std::size_t user) const {
  return {vertices_.data() + user_offsets_[user], user_offsets_[user + 1] - user_offsets_[user]};
}

std::span<const std::uint32_t> CachingLineGraph::subfile_clique(std::size_t subfile) const {
  return {by_subfile_.data() + subfile_offsets_[subfile],
          subfile_offsets_[subfile + 1] - subfile_offsets_[subfile]};
}

std::optional<std::size_t> CachingLineGraph::user_clique_size() const {
  if (users_ == 0) return std::nullopt;
  const std::size_t d = user_clique(0).size();
  for (std::size_t u = 1; u < users_; ++u)
    if (user_clique(u).size() != d) return std::nullopt;
  return d;
}

std::optional<std::size_t> CachingLineGraph::subfile_clique_size() const {
  if (subfiles_ == 0) return std::nullopt;
  const std::size_t c = subfile_clique(0).size();
  for (std::size_t f = 1; f < subfiles_; ++f)
    if (subfile_clique(f).size() != c) return std::nullopt;
  return c;
}

CachingLineGraph CachingLineGraph::without(std::size_t i) const {
  std::vector<Vertex> copy = vertices_;
  copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(i));
  return CachingLineGraph(users_, subfiles_, std::move(copy));
}

CachingLineGraph build_line_graph(const GeometryContext& ctx) {
  const auto& field = ctx.field;
  const std::size_t target = ctx.params.m + ctx.params.t + 2;
  std::vector<gf::Subspace> user_sums, subfile_sums;
  user_sums.reserve(ctx.users.size());
  subfile_sums.reserve(ctx.subfiles.size());
  for (std::size_t u = 0; u < ctx.users.size(); ++u)
    user_sums.push_back(sum_of(field, ctx.anchor, ctx.members, ctx.users[u]));
  for (std::size_t f = 0; f < ctx.subfiles.size(); ++f)
    subfile_sums.push_back(sum_of(field, ctx.anchor, ctx.members, ctx.subfiles[f]));

  std::vector<Vertex> vertices;
  for (std::size_t u = 0; u < ctx.users.size(); ++u) {
    for (std::size_t f = 0; f < ctx.subfiles.size(); ++f) {
      if (gf::subspace_sum(field, user_sums[u], subfile_sums[f]).dim() == target) {
        vertices.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(f)});
      }
    }
  }
  return CachingLineGraph(ctx.users.size(), ctx.subfiles.size(), std::move(vertices));
}

VerificationReport verify_caching_line_graph(const CachingLineGraph& graph) {
  VerificationReport r;
  r.users = graph.users();
  r.subfiles = graph.subfiles();

  r.p3 = true;
  const auto& vs = graph.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].user >= graph.users() || vs[i].subfile >= graph.subfiles()) {
      r.p3 = false;
      r.failures.push_back("P3: vertex " + std::to_string(i) + " out of range");
      break;
    }
    if (i > 0 && vs[i] == vs[i - 1]) {
      r.p3 = false;
      r.failures.push_back("P3: duplicate vertex (" + std::to_string(vs[i].user) + "," +
                           std::to_string(vs[i].subfile) + ")");
      break;
    }
  }

  r.user_clique = graph.user_clique_size();
  r.p1 = r.user_clique.has_value() && *r.user_clique > 0;
  if (!r.p1) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t u = 0; u < graph.users(); ++u) {
      lo = std::min(lo, graph.user_clique(u).size());
      hi = std::max(hi, graph.user_clique(u).size());
    }
    r.failures.push_back("P1: user clique sizes range over [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  r.subfile_clique = graph.subfile_clique_size();
  r.p2 = r.subfile_clique.has_value() && *r.subfile_clique > 0;
  if (!r.p2) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t f = 0; f < graph.subfiles(); ++f) {
      lo = std::min(lo, graph.subfile_clique(f).size());
      hi = std::max(hi, graph.subfile_clique(f).size());
    }
    r.failures.push_back("P2: subfile clique sizes range over [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  return r;
}

VerificationReport verify_caching_line_graph(const CachingLineGraph& graph, const Parameters& p) {
  VerificationReport r = verify_caching_line_graph(graph);
  const ClosedForms expected = closed_forms(p);
  auto check = [&](const char* name, std::optional<std::size_t> measured, const BigInt& want) {
    if (!measured || BigInt(*measured) != want) {
      r.failures.push_back(std::string("closed form ") + name + ": measured " +
                           (measured ? std::to_string(*measured) : std::string("irregular")) +
                           ", expected " + want.str());
      return false;
    }
    return true;
  };
  bool ok = check("K", graph.users(), expected.users);
  ok = check("F", graph.subfiles(), expected.subfiles) && ok;
  ok = check("D", r.user_clique, expected.user_clique) && ok;
  ok = check("c", r.subfile_clique, expected.subfile_clique) && ok;
  r.closed_forms = ok;
  return r;
}

bool is_edge_complement_square(const CachingLineGraph& graph, Vertex a, Vertex b) {
  for (const Vertex& v : {a, b}) {
    if (!graph.contains(v)) {
      throw Error(ErrorCode::UnknownVertex,
                  "(" + std::to_string(v.user) + "," + std::to_string(v.subfile) + ") not in graph");
    }
  }
  if (a.user == b.user || a.subfile == b.subfile) return false;
  return !graph.contains({a.user, b.subfile}) && !graph.contains({b.user, a.subfile});
}

void TransmissionCover::push_back(std::span<const std::uint32_t> clique) {
  if (clique.size() != clique_size_) {
    throw Error(ErrorCode::InvalidInput, "clique of size " + std::to_string(clique.size()) +
                                             " in a cover of " + std::to_string(clique_size_) + "-cliques");
  }
  members_.insert(members_.end(), clique.begin(), clique.end());
}

CoverCheck check_cover(const CachingLineGraph& graph, const TransmissionCover& cover) {
  CoverCheck out;
  std::vector<std::uint32_t> owner(graph.size(), UINT32_MAX);
  out.partition = true;
  out.cliques = true;
  for (std::size_t s = 0; s < cover.size() && out.partition; ++s) {
    for (auto v : cover.clique(s)) {
      if (v >= graph.size()) {
        out.partition = false;
        out.detail = "clique " + std::to_string(s) + " names vertex " + std::to_string(v) + " outside the graph";
        break;
      }
      if (owner[v] != UINT32_MAX) {
        out.partition = false;
        out.detail = "vertex " + std::to_string(v) + " in cliques " + std::to_string(owner[v]) + " and " +
                     std::to_string(s);
        break;
      }
      owner[v] = static_cast<std::uint32_t>(s);
    }
  }
  if (out.partition) {
    auto missing = std::find(owner.begin(), owner.end(), UINT32_MAX);
    if (missing != owner.end()) {
      out.partition = false;
      out.detail = "vertex " + std::to_string(missing - owner.begin()) + " not covered";
    }
  }
  if (!out.partition) {
    out.cliques = false;
    return out;
  }
  for (std::size_t s = 0; s < cover.size() && out.cliques; ++s) {
    auto c = cover.clique(s);
    for (std::size_t i = 0; i < c.size() && out.cliques; ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        if (!is_edge_complement_square(graph, graph.vertex(c[i]), graph.vertex(c[j]))) {
          out.cliques = false;
          out.detail = "clique " + std::to_string(s) + ": vertices " + std::to_string(c[i]) + " and " +
                       std::to_string(c[j]) + " are not adjacent";
          break;
        }
      }
    }
  }
  return out;
}

TransmissionCover transmission_cover(const GeometryContext& ctx, const CachingLineGraph& graph) {
  const std::size_t arity = ctx.transmissions.arity();
  TransmissionCover cover(arity * (arity - 1) / 2);
  std::vector<std::uint32_t> clique, rest;
  for (std::size_t s = 0; s < ctx.transmissions.size(); ++s) {
    auto z = ctx.transmissions[s];
    clique.clear();
    for (std::size_t i = 0; i < arity; ++i) {
      for (std::size_t j = i + 1; j < arity; ++j) {
        const std::uint32_t pair[2] = {z[i], z[j]};
        rest.clear();
        for (std::size_t l = 0; l < arity; ++l)
          if (l != i && l != j) rest.push_back(z[l]);
        auto user = ctx.users.find(pair);
        auto subfile = ctx.subfiles.find(rest);
        if (!user || !subfile) {
          throw Error(ErrorCode::InternalInconsistency, "transmission " + std::to_string(s) +
                                                            " splits into an unknown user or subfile");
        }
        auto v = graph.find({static_cast<std::uint32_t>(*user), static_cast<std::uint32_t>(*subfile)});
        if (!v) {
          throw Error(ErrorCode::InternalInconsistency,
                      "transmission " + std::to_string(s) + " names a cached (user, subfile) pair");
        }
        clique.push_back(static_cast<std::uint32_t>(*v));
      }
    }
    cover.push_back(clique);
  }
  const CoverCheck check = check_cover(graph, cover);
  if (!check.ok()) throw Error(ErrorCode::InternalInconsistency, check.detail);
  return cover;
}

nlohmann::json to_json(const GeometryContext& ctx, const CachingLineGraph& graph,
                       const TransmissionCover& cover) {
  using nlohmann::json;
  auto rows = [](const gf::Subspace& s) {
    json out = json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) out.push_back(std::vector<unsigned>(s.row(i).begin(), s.row(i).end()));
    return out;
  };
  auto table = [](const SetTable& t) {
    json out = json::array();
    for (std::size_t i = 0; i < t.size(); ++i) out.push_back(std::vector<std::uint32_t>(t[i].begin(), t[i].end()));
    return out;
  };
  json j;
  j["parameters"] = {{"q", ctx.params.q}, {"k", ctx.params.k}, {"m", ctx.params.m}, {"t", ctx.params.t}};
  j["field"] = ctx.field.describe();
  j["anchor"] = rows(ctx.anchor);
  json members = json::array();
  for (const auto& s : ctx.members) members.push_back(rows(s));
  j["members"] = std::move(members);
  j["users"] = table(ctx.users);
  j["subfiles"] = table(ctx.subfiles);
  json vertices = json::array();
  for (const auto& v : graph.vertices()) vertices.push_back({v.user, v.subfile});
  j["vertices"] = std::move(vertices);
  json cliques = json::array();
  for (std::size_t s = 0; s < cover.size(); ++s) {
    auto c = cover.clique(s);
    cliques.push_back(std::vector<std::uint32_t>(c.begin(), c.end()));
  }
  j["cliques"] = std::move(cliques);
  return j;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["P1"] = report.p1;
  j["P2"] = report.p2;
  j["P3"] = report.p3;
  if (report.closed_forms) j["closed_forms"] = *report.closed_forms;
  j["K"] = report.users;
  j["F"] = report.subfiles;
  j["D"] = report.user_clique ? nlohmann::json(*report.user_clique) : nlohmann::json(nullptr);
  j["c"] = report.subfile_clique ? nlohmann::json(*report.subfile_clique) : nlohmann::json(nullptr);
  j["failures"] = report.failures;
  j["ok"] = report.ok();
  return j;
}

}  // namespace pgcache::linegraph
