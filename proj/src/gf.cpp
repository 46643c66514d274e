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

#include "pgcache/gf.hpp"

#include <algorithm>
#include <sstream>

namespace pgcache::gf {
namespace {

using Poly = std::vector<unsigned>;  // coefficients mod p, lowest degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic b.
Poly poly_mod(Poly a, const Poly& b, unsigned p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + (p - lead) * b[i]) % p;
    }
    trim(a);
  }
  return a;
}

Poly decode(unsigned value, unsigned p, unsigned e) {
  Poly out(e, 0);
  for (unsigned i = 0; i < e; ++i) {
    out[i] = value % p;
    value /= p;
  }
  return out;
}

unsigned encode(const Poly& a, unsigned p) {
  unsigned value = 0;
  for (std::size_t i = a.size(); i-- > 0;) value = value * p + a[i];
  return value;
}

// Monic polynomial of degree d whose non-leading coefficients are the digits of `low`.
Poly monic(unsigned low, unsigned p, unsigned d) {
  Poly f = decode(low, p, d);
  f.push_back(1);
  return f;
}

unsigned ipow(unsigned base, unsigned exp) {
  unsigned r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

bool is_irreducible(const Poly& f, unsigned p) {
  const unsigned deg = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; 2 * d <= deg; ++d) {
    const unsigned count = ipow(p, d);
    for (unsigned low = 0; low < count; ++low) {
      if (poly_mod(f, monic(low, p, d), p).empty()) return false;
    }
  }
  return true;
}

Poly smallest_irreducible(unsigned p, unsigned e) {
  const unsigned count = ipow(p, e);
  for (unsigned low = 0; low < count; ++low) {
    Poly f = monic(low, p, e);
    if (f[0] != 0 && is_irreducible(f, p)) return f;
  }
  throw Error(ErrorCode::InternalInconsistency, "no irreducible polynomial found");
}

unsigned poly_mulmod(unsigned a, unsigned b, const Poly& modulus, unsigned p, unsigned e) {
  const Poly x = decode(a, p, e);
  const Poly y = decode(b, p, e);
  Poly prod(2 * e, 0);
  for (unsigned i = 0; i < e; ++i) {
    if (x[i] == 0) continue;
    for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  }
  return encode(poly_mod(std::move(prod), modulus, p), p);
}

std::vector<unsigned> prime_factors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::pair<unsigned, unsigned> prime_power_decomposition(unsigned q) noexcept {
  if (q < 2) return {0, 0};
  auto factors = prime_factors(q);
  if (factors.size() != 1) return {0, 0};
  unsigned e = 0;
  for (unsigned n = q; n > 1; n /= factors[0]) ++e;
  return {factors[0], e};
}

Field Field::make(unsigned q) {
  if (q > kMaxOrder) throw Error(ErrorCode::OutOfRange, "field order above 2^16: " + std::to_string(q));
  auto [p, e] = prime_power_decomposition(q);
  if (p == 0) throw Error(ErrorCode::NotPrimePower, std::to_string(q) + " is not a prime power");

  Field f;
  f.q_ = q;
  f.p_ = p;
  f.e_ = e;
  f.modulus_ = e == 1 ? Poly{0, 1} : smallest_irreducible(p, e);

  f.neg_.resize(q);
  for (unsigned a = 0; a < q; ++a) {
    Poly d = decode(a, p, e);
    for (auto& c : d) c = (p - c) % p;
    f.neg_[a] = static_cast<Elem>(encode(d, p));
  }

  auto mul_raw = [&](unsigned a, unsigned b) -> unsigned {
    if (e == 1) return static_cast<unsigned>((static_cast<std::uint64_t>(a) * b) % p);
    return poly_mulmod(a, b, f.modulus_, p, e);
  };

  // smallest element of multiplicative order q - 1
  const unsigned group = q - 1;
  const auto factors = prime_factors(group);
  auto power = [&](unsigned base, unsigned exp) {
    unsigned result = 1;
    while (exp > 0) {
      if (exp & 1u) result = mul_raw(result, base);
      base = mul_raw(base, base);
      exp >>= 1u;
    }
    return result;
  };
  unsigned generator = 1;
  for (unsigned g = (q == 2 ? 1u : 2u); g < q; ++g) {
    bool primitive = true;
    for (unsigned r : factors) {
      if (power(g, group / r) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      generator = g;
      break;
    }
  }
  f.generator_ = static_cast<Elem>(generator);

  f.inv_.assign(q, 0);
  if (e > 1) {
    f.exp_.resize(2 * static_cast<std::size_t>(group));
    f.log_.assign(q, 0);
    unsigned x = 1;
    for (unsigned i = 0; i < group; ++i) {
      f.exp_[i] = static_cast<Elem>(x);
      f.exp_[i + group] = static_cast<Elem>(x);
      f.log_[x] = i;
      x = mul_raw(x, generator);
    }
    for (unsigned a = 1; a < q; ++a) f.inv_[a] = f.exp_[(group - f.log_[a]) % group];
    if (p != 2 && q <= 256) {
      f.add_table_.resize(static_cast<std::size_t>(q) * q);
      for (unsigned a = 0; a < q; ++a)
        for (unsigned b = 0; b < q; ++b)
          f.add_table_[static_cast<std::size_t>(a) * q + b] =
              f.add_digits(static_cast<Elem>(a), static_cast<Elem>(b));
    }
  } else {
    for (unsigned a = 1; a < q; ++a) f.inv_[a] = static_cast<Elem>(power(a, q - 2));
  }
  return f;
}

Elem Field::add_digits(Elem a, Elem b) const noexcept {
  unsigned x = a, y = b, out = 0, place = 1;
  for (unsigned i = 0; i < e_; ++i) {
    out += ((x % p_ + y % p_) % p_) * place;
    x /= p_;
    y /= p_;
    place *= p_;
  }
  return static_cast<Elem>(out);
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw Error(ErrorCode::OutOfRange, "inverse of zero");
  return inv_[a];
}

std::string Field::describe() const {
  std::ostringstream out;
  out << "F_" << q_;
  if (e_ > 1) {
    out << " mod ";
    bool first = true;
    for (std::size_t i = modulus_.size(); i-- > 0;) {
      if (modulus_[i] == 0) continue;
      if (!first) out << " + ";
      first = false;
      if (modulus_[i] != 1 || i == 0) out << modulus_[i];
      if (i >= 1) out << "x";
      if (i >= 2) out << "^" << i;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::vector<FqVector> Subspace::basis() const {
  std::vector<FqVector> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

std::size_t SubspaceHash::operator()(const Subspace& s) const noexcept {
  std::size_t h = 1469598103934665603ull ^ s.ambient_dim();
  for (Elem x : s.key()) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}

Subspace rref(const Field& field, std::vector<Elem> rows, std::size_t n, std::size_t k) {
  Subspace out(k);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < k && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && rows[pivot * k + col] == 0) ++pivot;
    if (pivot == n) continue;
    if (pivot != rank) {
      std::swap_ranges(rows.begin() + static_cast<std::ptrdiff_t>(pivot * k),
                       rows.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * k),
                       rows.begin() + static_cast<std::ptrdiff_t>(rank * k));
    }
    Elem* prow = rows.data() + rank * k;
    const Elem scale = field.inv(prow[col]);
    if (scale != 1) {
      for (std::size_t j = col; j < k; ++j) prow[j] = field.mul(prow[j], scale);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == rank) continue;
      Elem* other = rows.data() + r * k;
      const Elem factor = other[col];
      if (factor == 0) continue;
      const Elem f = field.neg(factor);
      for (std::size_t j = col; j < k; ++j) {
        if (prow[j] != 0) other[j] = field.add(other[j], field.mul(f, prow[j]));
      }
    }
    out.pivots_.push_back(col);
    ++rank;
  }
  rows.resize(rank * k);
  out.rows_ = std::move(rows);
  return out;
}

Subspace span(const Field& field, std::span<const FqVector> vectors, std::size_t k) {
  std::vector<Elem> rows;
  rows.reserve(vectors.size() * k);
  for (const auto& v : vectors) {
    if (v.size() != k) {
      throw Error(ErrorCode::DimensionMismatch,
                  "vector of length " + std::to_string(v.size()) + " in F_q^" + std::to_string(k));
    }
    rows.insert(rows.end(), v.begin(), v.end());
  }
  return rref(field, std::move(rows), vectors.size(), k);
}

Subspace subspace_sum(const Field& field, const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subspace sum across ambient dimensions");
  }
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  std::vector<Elem> rows = a.key();
  rows.insert(rows.end(), b.key().begin(), b.key().end());
  return rref(field, std::move(rows), a.dim() + b.dim(), a.ambient_dim());
}

Subspace extend(const Field& field, const Subspace& a, std::span<const Elem> v) {
  if (v.size() != a.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "extend");
  std::vector<Elem> rows = a.key();
  rows.insert(rows.end(), v.begin(), v.end());
  return rref(field, std::move(rows), a.dim() + 1, a.ambient_dim());
}

FqVector residue(const Field& field, const Subspace& a, std::span<const Elem> v) {
  if (v.size() != a.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "residue");
  FqVector r(v.begin(), v.end());
  const std::size_t k = a.ambient_dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Elem c = r[a.pivots()[i]];
    if (c == 0) continue;
    const Elem f = field.neg(c);
    auto row = a.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      if (row[j] != 0) r[j] = field.add(r[j], field.mul(f, row[j]));
    }
  }
  return r;
}

bool subspace_contains(const Field& field, const Subspace& a, std::span<const Elem> v) {
  const FqVector r = residue(field, a, v);
  return std::all_of(r.begin(), r.end(), [](Elem x) { return x == 0; });
}

std::size_t intersection_dim(const Field& field, const Subspace& a, const Subspace& b) {
  return a.dim() + b.dim() - subspace_sum(field, a, b).dim();
}

bool includes(const Field& field, const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "includes");
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (!subspace_contains(field, a, b.row(i))) return false;
  }
  return true;
}

FqVector vector_at(unsigned q, std::size_t k, std::uint64_t index) {
  FqVector v(k, 0);
  for (std::size_t i = k; i-- > 0;) {
    v[i] = static_cast<Elem>(index % q);
    index /= q;
  }
  return v;
}

FqVector normalize(const Field& field, FqVector v) {
  auto lead = std::find_if(v.begin(), v.end(), [](Elem x) { return x != 0; });
  if (lead == v.end() || *lead == 1) return v;
  const Elem s = field.inv(*lead);
  for (auto it = lead; it != v.end(); ++it) *it = field.mul(*it, s);
  return v;
}

}  // namespace pgcache::gf
