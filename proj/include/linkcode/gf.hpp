// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKCODE_GF_HPP_
#define LINKCODE_GF_HPP_

// Arithmetic and elimination over small prime fields GF(q).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linkcode/error.hpp"

namespace linkcode {

inline constexpr int kMaxFieldOrder = 257;

inline bool IsPrime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

// Order of a prime field, checked on construction.
class FieldOrder {
 public:
  explicit FieldOrder(int q) : q_(q) {
    if (!IsPrime(q) || q > kMaxFieldOrder) {
      throw InputError("field order " + std::to_string(q) +
                       " is not a prime <= " + std::to_string(kMaxFieldOrder));
    }
  }

  int value() const { return q_; }

  friend bool operator==(FieldOrder, FieldOrder) = default;

 private:
  int q_;
};

using GfVector = std::vector<uint16_t>;

// Modular arithmetic with a precomputed inverse table.
class PrimeField {
 public:
  explicit PrimeField(FieldOrder order) : q_(order.value()), inv_(q_, 0) {
    for (int a = 1; a < q_; ++a) {
      for (int b = 1; b < q_; ++b) {
        if (a * b % q_ == 1) {
          inv_[a] = static_cast<uint16_t>(b);
          break;
        }
      }
    }
  }

  int order() const { return q_; }
  uint16_t add(uint16_t a, uint16_t b) const { return (a + b) % q_; }
  uint16_t sub(uint16_t a, uint16_t b) const { return (a + q_ - b) % q_; }
  uint16_t mul(uint16_t a, uint16_t b) const { return (a * b) % q_; }
  uint16_t inv(uint16_t a) const { return inv_[a]; }
  uint16_t reduce(long long a) const {
    long long r = a % q_;
    return static_cast<uint16_t>(r < 0 ? r + q_ : r);
  }

 private:
  int q_;
  std::vector<uint16_t> inv_;
};

// Row-echelon basis of a subspace of GF(q)^dim, grown one vector at a time.
// Each stored row has a unit pivot and zeros at the pivots of earlier rows,
// so reducing against the rows in insertion order is exact.
class EchelonBasis {
 public:
  EchelonBasis(const PrimeField& field, int dim) : field_(&field), dim_(dim) {}

  int rank() const { return static_cast<int>(rows_.size()); }
  int dim() const { return dim_; }

  // Returns the residue of v after elimination against the basis.
  GfVector Reduce(GfVector v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      const uint16_t c = v[pivots_[r]];
      if (c == 0) continue;
      const GfVector& row = rows_[r];
      for (int k = pivots_[r]; k < dim_; ++k) {
        if (row[k] != 0) v[k] = field_->sub(v[k], field_->mul(c, row[k]));
      }
    }
    return v;
  }

  bool InSpan(const GfVector& v) const {
    const GfVector res = Reduce(v);
    for (uint16_t x : res) {
      if (x != 0) return false;
    }
    return true;
  }

  bool UnitInSpan(int coord) const {
    GfVector e(dim_, 0);
    e[coord] = 1;
    return InSpan(e);
  }

  // Adds v; returns false if it was already in the span.
  bool Insert(const GfVector& v) {
    GfVector res = Reduce(v);
    int pivot = -1;
    for (int k = 0; k < dim_; ++k) {
      if (res[k] != 0) {
        pivot = k;
        break;
      }
    }
    if (pivot < 0) return false;
    const uint16_t scale = field_->inv(res[pivot]);
    for (int k = pivot; k < dim_; ++k) res[k] = field_->mul(res[k], scale);
    rows_.push_back(std::move(res));
    pivots_.push_back(pivot);
    return true;
  }

 private:
  const PrimeField* field_;
  int dim_;
  std::vector<GfVector> rows_;
  std::vector<int> pivots_;
};

inline int GfRank(const PrimeField& field, int dim,
                  std::span<const GfVector> vectors) {
  EchelonBasis basis(field, dim);
  for (const GfVector& v : vectors) basis.Insert(v);
  return basis.rank();
}

}  // namespace linkcode

#endif  // LINKCODE_GF_HPP_
