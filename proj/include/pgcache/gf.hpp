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

// Arithmetic in F_q and canonical subspaces of F_q^k.
//
// Elements are encoded as integers in [0, q): the base-p digits of an element
// are the coefficients of its polynomial representative, lowest degree first.
// Extension fields reduce modulo the smallest monic irreducible polynomial of
// degree e over F_p, where "smallest" compares the integer encodings of the
// non-leading coefficients.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pgcache/common.hpp"

namespace pgcache::gf {

using Elem = std::uint16_t;
using FqVector = std::vector<Elem>;

inline constexpr unsigned kMaxOrder = 1u << 16;

class Field {
 public:
  /// Builds F_q. Throws NotPrimePower unless q = p^e, OutOfRange above 2^16.
  static Field make(unsigned q);

  unsigned order() const noexcept { return q_; }
  unsigned characteristic() const noexcept { return p_; }
  unsigned degree() const noexcept { return e_; }

  /// Coefficients c_0..c_e of the reduction polynomial (c_e = 1). For prime
  /// fields this is the polynomial x.
  const std::vector<unsigned>& modulus() const noexcept { return modulus_; }

  Elem zero() const noexcept { return 0; }
  Elem one() const noexcept { return 1; }

  Elem add(Elem a, Elem b) const noexcept {
    if (p_ == 2) return static_cast<Elem>(a ^ b);
    if (e_ == 1) return static_cast<Elem>((static_cast<unsigned>(a) + b) % p_);
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
    return add_digits(a, b);
  }
  Elem neg(Elem a) const noexcept { return neg_[a]; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg_[b]); }

  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    if (e_ == 1) return static_cast<Elem>((static_cast<std::uint32_t>(a) * b) % p_);
    return exp_[static_cast<std::size_t>(log_[a]) + log_[b]];
  }
  /// Multiplicative inverse; throws OutOfRange for 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// Generator of the multiplicative group used for the log tables.
  Elem primitive_element() const noexcept { return generator_; }

  std::string describe() const;

 private:
  Field() = default;
  Elem add_digits(Elem a, Elem b) const noexcept;

  unsigned q_ = 0;
  unsigned p_ = 0;
  unsigned e_ = 0;
  Elem generator_ = 1;
  std::vector<unsigned> modulus_;
  std::vector<Elem> neg_;
  std::vector<Elem> exp_;  // length 2(q-1)
  std::vector<std::uint32_t> log_;
  std::vector<Elem> inv_;
  std::vector<Elem> add_table_;  // only for odd-characteristic extensions with q <= 256
};

/// Returns (p, e) with q = p^e, or (0, 0) when q is not a prime power.
std::pair<unsigned, unsigned> prime_power_decomposition(unsigned q) noexcept;

/// A subspace of F_q^k stored as its reduced row echelon basis.
///
/// Two subspaces are equal as sets iff their bases are identical, so the
/// row-major element sequence doubles as a hash/ordering key.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim); }

  std::size_t ambient_dim() const noexcept { return k_; }
  std::size_t dim() const noexcept { return pivots_.size(); }
  bool is_zero() const noexcept { return pivots_.empty(); }

  std::span<const Elem> row(std::size_t i) const noexcept {
    return {rows_.data() + i * k_, k_};
  }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  const std::vector<Elem>& key() const noexcept { return rows_; }
  std::vector<FqVector> basis() const;

  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    return a.rows_ <=> b.rows_;
  }

 private:
  explicit Subspace(std::size_t k) : k_(k) {}
  friend Subspace rref(const Field&, std::vector<Elem>, std::size_t, std::size_t);

  std::size_t k_ = 0;
  std::vector<Elem> rows_;
  std::vector<std::size_t> pivots_;
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const noexcept;
};

/// Row-reduces `rows` (n rows of length k, row-major) into canonical form.
Subspace rref(const Field& field, std::vector<Elem> rows, std::size_t n, std::size_t k);

/// Linear span; zero and repeated vectors are allowed. Throws DimensionMismatch.
Subspace span(const Field& field, std::span<const FqVector> vectors, std::size_t k);

/// A + B. Throws DimensionMismatch.
Subspace subspace_sum(const Field& field, const Subspace& a, const Subspace& b);

/// A + span(v).
Subspace extend(const Field& field, const Subspace& a, std::span<const Elem> v);

/// v minus its component along A's pivot rows; zero iff v is in A.
FqVector residue(const Field& field, const Subspace& a, std::span<const Elem> v);

bool subspace_contains(const Field& field, const Subspace& a, std::span<const Elem> v);

/// dim(A ∩ B) from dim A + dim B - dim(A + B).
std::size_t intersection_dim(const Field& field, const Subspace& a, const Subspace& b);

/// True iff B ⊆ A.
bool includes(const Field& field, const Subspace& a, const Subspace& b);

/// Decodes the index-th vector of F_q^k (base-q digits, first coordinate most significant).
FqVector vector_at(unsigned q, std::size_t k, std::uint64_t index);

/// Scales v so that its first nonzero coordinate is 1. Zero stays zero.
FqVector normalize(const Field& field, FqVector v);

}  // namespace pgcache::gf
