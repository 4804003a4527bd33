// Copyright 2026 The MFM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Numerical checks of the unitarity and stochasticity conditions.

#include <Eigen/SparseCore>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mfm/core.hpp"
#include "mfm/engine.hpp"
#include "mfm/rng.hpp"

namespace mfm {

enum class VerifyMethod { ExactDense, SampledColumns };

inline std::string to_string(VerifyMethod m) {
  return m == VerifyMethod::ExactDense ? "ExactDense" : "SampledColumns";
}

inline constexpr Index kExactVerifyCap = 4096;
inline constexpr double kExactTolerance = 1e-10;
inline constexpr double kSampledTolerance = 1e-8;

struct VerificationReport {
  FamilyKind checked_kind = FamilyKind::Unitary;
  VerifyMethod method = VerifyMethod::ExactDense;
  double max_deviation = 0;
  double tolerance = 0;
  std::uint64_t samples = 0;
  bool passed = false;
  std::optional<std::pair<Index, Index>> witness;
};

namespace detail {

using SparseColumn = std::vector<std::pair<Index, Amplitude>>;

// Full scan of one column through the entry oracle, independent of any
// column_support hint.
inline SparseColumn column_of(const MatrixFamily& family, Index col, Index dim, SizeParam n) {
  SparseColumn out;
  for (Index row = 0; row < dim; ++row) {
    const Amplitude e = family.entry(col, row, n);
    if (e != Amplitude{}) out.emplace_back(row, e);
  }
  return out;
}

// <a|b> for sparse columns sorted by row.
inline Amplitude inner(const SparseColumn& a, const SparseColumn& b) {
  Amplitude s{};
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      s += std::conj(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  return s;
}

struct Worst {
  double deviation = 0;
  std::optional<std::pair<Index, Index>> witness;

  void offer(double d, Index r, Index c) {
    if (!witness || d > deviation) {
      deviation = d;
      witness = std::make_pair(r, c);
    }
  }
};

}  // namespace detail

/// Computes max |(T^dagger T - I)[r][c]| over every r, c. The Gram matrix is
/// formed as a sparse product, so the cost scales with the overlap structure of
/// the columns rather than dim^3.
inline VerificationReport verify_unitary_exact(const MatrixFamily& family, SizeParam n,
                                               double tolerance = kExactTolerance) {
  using Sparse = Eigen::SparseMatrix<Amplitude, Eigen::ColMajor, std::int64_t>;
  const Index dim = family.dimension(n);
  if (dim > kExactVerifyCap) {
    throw DimensionRefused("verify_unitary_exact: dimension " + std::to_string(dim) +
                           " exceeds cap " + std::to_string(kExactVerifyCap));
  }
  const auto size = static_cast<std::int64_t>(dim);
  std::vector<Eigen::Triplet<Amplitude, std::int64_t>> triplets;
  for (Index col = 0; col < dim; ++col) {
    for (const auto& [row, e] : detail::column_of(family, col, dim, n)) {
      triplets.emplace_back(static_cast<std::int64_t>(row), static_cast<std::int64_t>(col), e);
    }
  }
  Sparse t(size, size);
  t.setFromTriplets(triplets.begin(), triplets.end());
  Sparse identity(size, size);
  identity.setIdentity();
  const Sparse gram = Sparse(t.adjoint()) * t;
  const Sparse deviation = gram - identity;

  detail::Worst worst;
  for (std::int64_t k = 0; k < deviation.outerSize(); ++k) {
    for (Sparse::InnerIterator it(deviation, k); it; ++it) {
      worst.offer(std::abs(it.value()), static_cast<Index>(it.row()),
                  static_cast<Index>(it.col()));
    }
  }

  VerificationReport r;
  r.checked_kind = FamilyKind::Unitary;
  r.method = VerifyMethod::ExactDense;
  r.max_deviation = worst.deviation;
  r.tolerance = tolerance;
  r.samples = dim;
  r.passed = r.max_deviation <= tolerance;
  if (worst.deviation > 0) r.witness = worst.witness;
  return r;
}

/// Checks norms of `samples` random columns and inner products of `samples`
/// random column pairs. When samples >= dimension and the dimension is at most
/// 1024, every column and every pair is checked instead.
inline VerificationReport verify_unitary_sampled(const MatrixFamily& family, SizeParam n,
                                                 std::uint64_t samples,
                                                 double tolerance = kSampledTolerance,
                                                 std::uint64_t seed = 0) {
  if (samples == 0) throw ContractError("verify_unitary_sampled: samples must be >= 1");
  const Index dim = detail::checked_dimension(family, n);

  std::unordered_map<Index, detail::SparseColumn> cache;
  auto column = [&](Index c) -> const detail::SparseColumn& {
    auto it = cache.find(c);
    if (it == cache.end()) it = cache.emplace(c, detail::column_of(family, c, dim, n)).first;
    return it->second;
  };

  detail::Worst worst;
  auto check_norm = [&](Index c) {
    worst.offer(std::abs(detail::inner(column(c), column(c)).real() - 1.0), c, c);
  };
  auto check_pair = [&](Index a, Index b) {
    worst.offer(std::abs(detail::inner(column(a), column(b))), a, b);
  };

  VerificationReport r;
  r.checked_kind = FamilyKind::Unitary;
  r.method = VerifyMethod::SampledColumns;
  r.tolerance = tolerance;

  if (samples >= dim && dim <= 1024) {
    for (Index a = 0; a < dim; ++a) {
      check_norm(a);
      for (Index b = a + 1; b < dim; ++b) check_pair(a, b);
    }
    r.samples = dim;
  } else {
    CounterRng rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) {
      check_norm(rng.below(dim));
      if (dim > 1) {
        const Index a = rng.below(dim);
        Index b = rng.below(dim - 1);
        if (b >= a) ++b;
        check_pair(a, b);
      }
    }
    r.samples = samples;
  }
  r.max_deviation = worst.deviation;
  r.passed = r.max_deviation <= tolerance;
  if (worst.deviation > 0) r.witness = worst.witness;
  return r;
}

/// For each source configuration, outgoing probabilities summed over all
/// destinations must equal 1 and each must lie in [0, 1]. Every source is
/// checked when the dimension is at most 4096 or samples >= dimension,
/// otherwise `samples` sources drawn with `seed`. Above 4096, columns are read
/// through column_support when the family provides it.
inline VerificationReport verify_stochastic(const MatrixFamily& family, SizeParam n,
                                            double tolerance = kExactTolerance,
                                            std::uint64_t samples = 256, std::uint64_t seed = 0) {
  if (family.kind != FamilyKind::Stochastic) {
    throw ContractError("verify_stochastic: family '" + family.name + "' is not Stochastic");
  }
  const Index dim = detail::checked_dimension(family, n);
  const bool full_rows = dim <= kExactVerifyCap;
  const bool exhaustive = full_rows || samples >= dim;

  detail::Worst worst;
  auto check_source = [&](Index i) {
    double sum = 0;
    auto visit = [&](Index j) {
      const Amplitude e = family.entry(i, j, n);
      if (e == Amplitude{}) return;
      if (e.imag() != 0) {
        throw ContractError("verify_stochastic: complex entry at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      }
      const double p = e.real();
      if (p < 0) worst.offer(-p, i, j);
      if (p > 1) worst.offer(p - 1, i, j);
      sum += p;
    };
    if (!full_rows && family.column_support) {
      for (Index j : family.column_support(i, n)) visit(j);
    } else {
      for (Index j = 0; j < dim; ++j) visit(j);
    }
    worst.offer(std::abs(sum - 1.0), i, i);
  };

  VerificationReport r;
  r.checked_kind = FamilyKind::Stochastic;
  r.tolerance = tolerance;
  if (exhaustive) {
    r.method = VerifyMethod::ExactDense;
    for (Index i = 0; i < dim; ++i) check_source(i);
    r.samples = dim;
  } else {
    r.method = VerifyMethod::SampledColumns;
    CounterRng rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) check_source(rng.below(dim));
    r.samples = samples;
  }
  r.max_deviation = worst.deviation;
  r.passed = r.max_deviation <= tolerance;
  if (worst.deviation > 0) r.witness = worst.witness;
  return r;
}

}  // namespace mfm
