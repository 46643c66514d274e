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

#include "pgcache/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <numeric>
#include <random>

#include "pgcache/kernels.hpp"

namespace pgcache::sim {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv_update(std::uint64_t h, std::span<const std::uint8_t> data) noexcept {
  for (std::uint8_t b : data) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::span<const std::uint8_t> subfile_of(const Bytes& file, std::size_t f, std::size_t size) noexcept {
  return {file.data() + f * size, size};
}

void check_demands(const Demands& demands, std::size_t users, std::size_t files) {
  if (demands.size() != users) {
    throw Error(ErrorCode::InvalidDemand,
                "demand vector has " + std::to_string(demands.size()) + " entries for " + std::to_string(users) +
                    " users");
  }
  for (std::size_t k = 0; k < users; ++k) {
    if (demands[k] >= files) {
      throw Error(ErrorCode::InvalidDemand, "user " + std::to_string(k) + " demands file " +
                                                std::to_string(demands[k]) + " of " + std::to_string(files));
    }
  }
}

std::span<const std::uint8_t> cached_or_throw(const CacheState& cache, std::size_t user, std::size_t file,
                                              std::size_t subfile, ErrorCode code) {
  auto data = cache.lookup(user, file, subfile);
  if (!data) {
    throw Error(code, "user " + std::to_string(user) + " does not cache subfile " + std::to_string(subfile) +
                          " of file " + std::to_string(file));
  }
  return *data;
}

// Part index of sender slot j inside the g-1 parts of occurrence i.
std::size_t part_index(std::size_t i, std::size_t j) noexcept { return j < i ? j : j - 1; }

std::size_t regularity_or_throw(const pda::Pda& pda, const pda::LabelIndex& index) {
  std::size_t g = 0;
  for (std::uint32_t s = 1; s <= index.labels(); ++s) {
    std::size_t n = index[s].size();
    if (g == 0) g = n;
    if (n != g) {
      throw Error(ErrorCode::NotRegular, "label " + std::to_string(s) + " occurs " + std::to_string(n) +
                                             " times, expected " + std::to_string(g));
    }
  }
  if (g < 2) throw Error(ErrorCode::NotRegular, "D2D delivery needs every label to occur at least twice");
  (void)pda;
  return g;
}

}  // namespace

std::uint64_t digest(std::span<const std::uint8_t> data) noexcept { return fnv_update(kFnvOffset, data); }

FileLibrary FileLibrary::generate(std::size_t files, std::size_t file_size, std::uint64_t seed) {
  FileLibrary lib;
  lib.file_size = file_size;
  lib.seed = seed;
  lib.files.resize(files);
  std::mt19937_64 rng(seed);
  for (auto& file : lib.files) {
    file.resize(file_size);
    std::size_t i = 0;
    for (; i + 8 <= file_size; i += 8) {
      std::uint64_t w = rng();
      for (int b = 0; b < 8; ++b) file[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
    }
    if (i < file_size) {
      std::uint64_t w = rng();
      for (int b = 0; i < file_size; ++i, ++b) file[i] = static_cast<std::uint8_t>(w >> (8 * b));
    }
  }
  return lib;
}

std::optional<std::span<const std::uint8_t>> CacheState::lookup(std::size_t user, std::size_t file,
                                                                std::size_t subfile) const {
  if (user >= users_.size() || file >= files_) return std::nullopt;
  const auto& u = users_[user];
  auto it = std::lower_bound(u.rows.begin(), u.rows.end(), subfile);
  if (it == u.rows.end() || *it != subfile) return std::nullopt;
  std::size_t slot = static_cast<std::size_t>(it - u.rows.begin());
  return std::span<const std::uint8_t>(u.data.data() + (file * u.rows.size() + slot) * subfile_size_, subfile_size_);
}

CacheState place(const pda::Pda& pda, const FileLibrary& library) {
  std::size_t F = pda.subfiles();
  if (F == 0 || library.file_size == 0 || library.file_size % F != 0) {
    throw Error(ErrorCode::SizeMismatch, "file size " + std::to_string(library.file_size) +
                                             " is not a positive multiple of F = " + std::to_string(F));
  }
  for (const auto& file : library.files) {
    if (file.size() != library.file_size) throw Error(ErrorCode::SizeMismatch, "files differ in length");
  }
  std::size_t sub = library.file_size / F;
  CacheState cache(library.count(), sub);
  for (std::size_t k = 0; k < pda.users(); ++k) {
    std::vector<std::uint32_t> rows;
    for (std::size_t f = 0; f < F; ++f) {
      if (pda.is_star(f, k)) rows.push_back(static_cast<std::uint32_t>(f));
    }
    Bytes data(library.count() * rows.size() * sub);
    std::uint8_t* out = data.data();
    for (const auto& file : library.files) {
      for (std::uint32_t f : rows) {
        std::memcpy(out, file.data() + f * sub, sub);
        out += sub;
      }
    }
    cache.add_user(std::move(rows), std::move(data));
  }
  return cache;
}

Demands random_demands(std::size_t users, std::size_t files, std::uint64_t seed) {
  if (files == 0) throw Error(ErrorCode::InvalidDemand, "library is empty");
  std::mt19937_64 rng(seed);
  Demands d(users);
  for (auto& x : d) x = static_cast<std::uint32_t>(rng() % files);
  return d;
}

BroadcastLog deliver_broadcast(const pda::Pda& pda, const FileLibrary& library, const Demands& demands) {
  std::size_t F = pda.subfiles();
  if (F == 0 || library.file_size % F != 0) {
    throw Error(ErrorCode::SizeMismatch, "file size is not a multiple of F = " + std::to_string(F));
  }
  check_demands(demands, pda.users(), library.count());
  BroadcastLog log;
  log.payload_size = library.file_size / F;
  log.demands = demands;
  std::size_t S = pda.max_label();
  log.payloads.assign(S * log.payload_size, 0);
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t k = 0; k < pda.users(); ++k) {
      std::uint32_t s = pda.at(f, k);
      if (s == pda::kStar) continue;
      kernels::xor_into(log.payload(s - 1), subfile_of(library.files[demands[k]], f, log.payload_size));
    }
  }
  return log;
}

Bytes decode_broadcast(std::size_t user, const pda::Pda& pda, const pda::LabelIndex& index, const CacheState& cache,
                       const BroadcastLog& log) {
  std::size_t sub = log.payload_size;
  if (sub != cache.subfile_size()) throw Error(ErrorCode::SizeMismatch, "log and cache subfile sizes differ");
  std::uint32_t want = log.demands.at(user);
  Bytes out(pda.subfiles() * sub);
  for (std::size_t f = 0; f < pda.subfiles(); ++f) {
    std::span<std::uint8_t> dst(out.data() + f * sub, sub);
    std::uint32_t s = pda.at(f, user);
    if (s == pda::kStar) {
      auto src = cached_or_throw(cache, user, want, f, ErrorCode::DecodeFailure);
      std::memcpy(dst.data(), src.data(), sub);
      continue;
    }
    if (s > log.count()) {
      throw Error(ErrorCode::DecodeFailure, "user " + std::to_string(user) + " subfile " + std::to_string(f) +
                                                ": transmission " + std::to_string(s) + " missing from log");
    }
    std::memcpy(dst.data(), log.payload(s - 1).data(), sub);
    for (const auto& pos : index[s]) {
      if (pos.row == f && pos.col == user) continue;
      auto known = cache.lookup(user, log.demands[pos.col], pos.row);
      if (!known) {
        throw Error(ErrorCode::DecodeFailure,
                    "user " + std::to_string(user) + " cannot recover subfile " + std::to_string(f) +
                        " from transmission " + std::to_string(s) + ": subfile " + std::to_string(pos.row) +
                        " of file " + std::to_string(log.demands[pos.col]) + " is not cached");
      }
      kernels::xor_into(dst, *known);
    }
  }
  return out;
}

D2DLog deliver_d2d(const pda::Pda& pda, const CacheState& caches, const Demands& demands) {
  pda::LabelIndex index(pda);
  std::size_t g = regularity_or_throw(pda, index);
  std::size_t sub = caches.subfile_size();
  if (sub == 0 || sub % (g - 1) != 0) {
    throw Error(ErrorCode::SizeMismatch, "subfile size " + std::to_string(sub) + " is not a multiple of g-1 = " +
                                             std::to_string(g - 1));
  }
  check_demands(demands, pda.users(), caches.files());
  D2DLog log;
  log.part_size = sub / (g - 1);
  log.regularity = g;
  log.demands = demands;
  std::size_t S = index.labels();
  log.transmissions.reserve(S * g);
  log.payloads.assign(S * g * log.part_size, 0);
  std::size_t t = 0;
  for (std::uint32_t s = 1; s <= S; ++s) {
    auto occ = index[s];
    for (std::size_t j = 0; j < g; ++j, ++t) {
      std::uint32_t sender = occ[j].col;
      log.transmissions.push_back({sender, s, static_cast<std::uint32_t>(j)});
      std::span<std::uint8_t> dst(log.payloads.data() + t * log.part_size, log.part_size);
      for (std::size_t i = 0; i < g; ++i) {
        if (i == j) continue;
        auto src = cached_or_throw(caches, sender, demands[occ[i].col], occ[i].row, ErrorCode::InternalInconsistency);
        kernels::xor_into(dst, src.subspan(part_index(i, j) * log.part_size, log.part_size));
      }
    }
  }
  return log;
}

Bytes decode_d2d(std::size_t user, const pda::Pda& pda, const pda::LabelIndex& index, const CacheState& cache,
                 const D2DLog& log) {
  std::size_t g = log.regularity;
  std::size_t sub = cache.subfile_size();
  std::size_t part = log.part_size;
  if (g < 2 || part * (g - 1) != sub) throw Error(ErrorCode::SizeMismatch, "log and cache subfile sizes differ");
  std::uint32_t want = log.demands.at(user);
  Bytes out(pda.subfiles() * sub);
  for (std::size_t f = 0; f < pda.subfiles(); ++f) {
    std::span<std::uint8_t> dst(out.data() + f * sub, sub);
    std::uint32_t s = pda.at(f, user);
    if (s == pda::kStar) {
      auto src = cached_or_throw(cache, user, want, f, ErrorCode::DecodeFailure);
      std::memcpy(dst.data(), src.data(), sub);
      continue;
    }
    auto occ = index[s];
    std::size_t base = (s - 1) * g;
    if (occ.size() != g || base + g > log.transmissions.size()) {
      throw Error(ErrorCode::DecodeFailure, "user " + std::to_string(user) + " subfile " + std::to_string(f) +
                                                ": transmissions for label " + std::to_string(s) + " missing");
    }
    std::size_t i = 0;
    while (i < g && !(occ[i].row == f && occ[i].col == user)) ++i;
    for (std::size_t j = 0; j < g; ++j) {
      if (j == i) continue;
      std::span<std::uint8_t> piece = dst.subspan(part_index(i, j) * part, part);
      auto payload = log.payload(base + j);
      std::memcpy(piece.data(), payload.data(), part);
      for (std::size_t l = 0; l < g; ++l) {
        if (l == i || l == j) continue;
        auto known = cache.lookup(user, log.demands[occ[l].col], occ[l].row);
        if (!known) {
          throw Error(ErrorCode::DecodeFailure,
                      "user " + std::to_string(user) + " cannot recover subfile " + std::to_string(f) +
                          " from the transmission of user " + std::to_string(occ[j].col) + ": subfile " +
                          std::to_string(occ[l].row) + " of file " + std::to_string(log.demands[occ[l].col]) +
                          " is not cached");
        }
        kernels::xor_into(piece, known->subspan(part_index(l, j) * part, part));
      }
    }
  }
  return out;
}

std::string to_string(Mode mode) { return mode == Mode::Broadcast ? "broadcast" : "d2d"; }

std::size_t admissible_file_size(const pda::Pda& pda, Mode mode, std::size_t requested) {
  std::size_t unit = pda.subfiles();
  if (mode == Mode::D2D) {
    pda::LabelIndex index(pda);
    unit *= regularity_or_throw(pda, index) - 1;
  }
  if (unit == 0) throw Error(ErrorCode::SizeMismatch, "PDA has no subfiles");
  if (requested == 0) return unit;
  return (requested + unit - 1) / unit * unit;
}

SimulationReport verify_roundtrip(const pda::Pda& pda, const SimulationConfig& config) {
  auto start = std::chrono::steady_clock::now();
  SimulationReport report;
  report.mode = config.mode;
  report.params = config.params;
  report.users = pda.users();
  report.subfiles = pda.subfiles();
  report.labels = pda.max_label();
  report.seed = config.seed;
  report.files = config.files == 0 ? pda.users() : config.files;
  report.file_size = admissible_file_size(pda, config.mode, config.file_size);
  report.padding = config.file_size == 0 ? 0 : report.file_size - config.file_size;

  pda::LabelIndex index(pda);
  Rational base(BigInt(report.labels), BigInt(report.subfiles));
  if (config.mode == Mode::D2D) {
    std::size_t g = regularity_or_throw(pda, index);
    report.regularity = g;
    report.formula_rate = Rational(BigInt(g), BigInt(g - 1)) * base;
  } else {
    report.formula_rate = base;
  }

  FileLibrary library = FileLibrary::generate(report.files, report.file_size, config.seed);
  CacheState cache = place(pda, library);

  std::vector<Demands> rounds;
  if (config.demands) {
    rounds.push_back(*config.demands);
  } else {
    for (std::size_t r = 0; r < std::max<std::size_t>(config.rounds, 1); ++r) {
      rounds.push_back(random_demands(pda.users(), report.files, mix(config.seed ^ mix(r + 1))));
    }
  }
  report.rounds = rounds.size();

  std::uint64_t h = kFnvOffset;
  bool ok = true;
  bool rate_set = false;
  for (const auto& demands : rounds) {
    Rational measured;
    std::vector<Rational> per_user;
    if (config.mode == Mode::Broadcast) {
      BroadcastLog log = deliver_broadcast(pda, library, demands);
      h = fnv_update(h, log.payloads);
      measured = Rational(BigInt(log.payloads.size()), BigInt(report.file_size));
      for (std::size_t k = 0; k < pda.users(); ++k) {
        Bytes got;
        try {
          got = decode_broadcast(k, pda, index, cache, log);
        } catch (const Error& e) {
          if (report.failure.empty()) report.failure = e.what();
          ok = false;
          continue;
        }
        if (got == library.files[demands[k]]) {
          ++report.decoded_users;
        } else {
          ok = false;
          if (report.failure.empty()) report.failure = "user " + std::to_string(k) + " decoded a wrong file";
        }
      }
    } else {
      D2DLog log = deliver_d2d(pda, cache, demands);
      h = fnv_update(h, log.payloads);
      measured = Rational(BigInt(log.payloads.size()), BigInt(report.file_size));
      std::vector<std::size_t> sent(pda.users(), 0);
      for (const auto& t : log.transmissions) ++sent[t.sender];
      for (std::size_t k = 0; k < pda.users(); ++k) {
        per_user.emplace_back(BigInt(sent[k] * log.part_size), BigInt(report.file_size));
      }
      for (std::size_t k = 0; k < pda.users(); ++k) {
        Bytes got;
        try {
          got = decode_d2d(k, pda, index, cache, log);
        } catch (const Error& e) {
          if (report.failure.empty()) report.failure = e.what();
          ok = false;
          continue;
        }
        if (got == library.files[demands[k]]) {
          ++report.decoded_users;
        } else {
          ok = false;
          if (report.failure.empty()) report.failure = "user " + std::to_string(k) + " decoded a wrong file";
        }
      }
    }
    if (!rate_set) {
      report.measured_rate = measured;
      report.per_user_rates = std::move(per_user);
      rate_set = true;
    } else if (measured != report.measured_rate) {
      ok = false;
      if (report.failure.empty()) report.failure = "rate depends on the demand vector";
    }
  }
  report.decoded_ok = ok;
  report.transcript_digest = h;
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json to_json(const SimulationReport& r, bool include_timing) {
  nlohmann::json j;
  j["mode"] = to_string(r.mode);
  if (r.params) {
    j["q"] = r.params->q;
    j["k"] = r.params->k;
    j["m"] = r.params->m;
    j["t"] = r.params->t;
  } else {
    j["source"] = "pda";
  }
  j["K"] = r.users;
  j["F"] = r.subfiles;
  j["S"] = r.labels;
  if (r.regularity) j["g"] = *r.regularity;
  j["files"] = r.files;
  j["file_size"] = r.file_size;
  j["padding"] = r.padding;
  j["rounds"] = r.rounds;
  j["measured_rate"] = to_exact(r.measured_rate);
  j["measured_rate_decimal"] = to_decimal(r.measured_rate, 6);
  j["formula_rate"] = to_exact(r.formula_rate);
  j["rate_matches"] = r.measured_rate == r.formula_rate;
  if (r.mode == Mode::D2D) {
    nlohmann::json rates = nlohmann::json::array();
    for (const auto& x : r.per_user_rates) rates.push_back(to_exact(x));
    j["per_user_rates"] = rates;
  }
  j["decoded_ok"] = r.decoded_ok;
  j["decoded_users"] = r.decoded_users;
  if (!r.failure.empty()) j["failure"] = r.failure;
  j["seed"] = r.seed;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(r.transcript_digest));
  j["transcript_digest"] = buf;
  if (include_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

}  // namespace pgcache::sim
