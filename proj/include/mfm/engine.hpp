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

// Implicit application of matrix families and class-style decisions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mfm/core.hpp"

namespace mfm {

/// Tolerance for the "= 1", "= 0" and "> 0" comparisons of the classical table.
inline constexpr double kEqualityTolerance = 1e-9;

enum class Verdict { Accept, Reject, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "Accept";
    case Verdict::Reject: return "Reject";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace detail {

inline Index checked_dimension(const MatrixFamily& family, SizeParam n) {
  const Index dim = family.dimension(n);
  if (dim == 0) throw ContractError("family '" + family.name + "': dimension is zero");
  if (dim > kMaxDimension) {
    throw DimensionRefused("family '" + family.name + "': dimension " + std::to_string(dim) +
                           " exceeds cap " + std::to_string(kMaxDimension));
  }
  return dim;
}

inline bool finite(Amplitude a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

}  // namespace detail

/// One product out[j] = sum_i entry(i, j, n) v[i], touching only the support
/// of v.
inline StateVector apply_family(const MatrixFamily& family, const StateVector& v) {
  const SizeParam n = v.size_param();
  const Index dim = detail::checked_dimension(family, n);

  // Dense scratch for moderate dimensions, hash map beyond.
  constexpr Index kDenseScratch = Index{1} << 21;
  const bool dense = dim <= kDenseScratch;
  std::vector<Amplitude> scratch(dense ? dim : 0);
  std::vector<char> touched(dense ? dim : 0);
  std::vector<Index> order;
  std::unordered_map<Index, Amplitude> sparse;

  for (const auto& [i, vi] : v.entries()) {
    if (i >= dim) {
      throw ContractError("apply_family: source index " + std::to_string(i) +
                          " outside dimension " + std::to_string(dim));
    }
    auto visit = [&](Index j) {
      const Amplitude e = family.entry(i, j, n);
      if (e == Amplitude{}) return;
      const Amplitude term = e * vi;
      if (!detail::finite(term)) {
        throw NumericError("apply_family: non-finite value at entry(" + std::to_string(i) +
                           ", " + std::to_string(j) + ")");
      }
      if (dense) {
        if (!touched[j]) {
          touched[j] = 1;
          order.push_back(j);
        }
        scratch[j] += term;
      } else {
        sparse[j] += term;
      }
    };
    if (family.column_support) {
      for (Index j : family.column_support(i, n)) {
        if (j >= dim) {
          throw ContractError("apply_family: column_support returned " + std::to_string(j) +
                              " outside dimension");
        }
        visit(j);
      }
    } else {
      for (Index j = 0; j < dim; ++j) visit(j);
    }
  }

  StateVector out(n, v.semantics());
  if (dense) {
    for (Index j : order) out.set(j, scratch[j]);
  } else {
    for (const auto& [j, a] : sparse) out.set(j, a);
  }
  return out;
}

inline StateVector apply_power(const MatrixFamily& family, StateVector v, std::uint64_t k) {
  if (k == 0) throw ContractError("apply_power: k must be positive");
  for (std::uint64_t s = 0; s < k; ++s) v = apply_family(family, v);
  return v;
}

/// Everything the engine learns from running a spec on one input.
struct Evaluation {
  double probability = 0;      // clamped to [0, 1 + 1e-9]
  double raw_probability = 0;  // before clamping
  std::uint64_t applications = 0;
  std::map<Index, double> accepting_mass;
  StateVector final_state;
};

inline Evaluation evaluate(const MachineSpec& spec, std::string_view x) {
  if (auto bad = validate_machine_spec(spec, x); !bad.empty()) {
    std::string msg = "invalid machine spec:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw ContractError(msg);
  }
  Evaluation ev;
  const SizeParam n = spec.size_of(x);
  ev.applications = spec.applications(n);
  ev.final_state = apply_power(spec.family, spec.initial_state(x), ev.applications);

  // Only the support is scanned; accepting sets may be far larger.
  const bool squared = ev.final_state.semantics() == Semantics::AmplitudeVector;
  double sum = 0;
  for (const auto& [c, a] : ev.final_state.entries()) {
    if (!spec.accepts(x, c)) continue;
    const double contribution = squared ? std::norm(a) : a.real();
    ev.accepting_mass[c] = contribution;
    sum += contribution;
  }
  if (!std::isfinite(sum)) throw NumericError("acceptance probability is not finite");
  ev.raw_probability = sum;
  ev.probability = std::clamp(sum, 0.0, 1.0 + 1e-9);
  return ev;
}

inline double acceptance_probability(const MachineSpec& spec, std::string_view x) {
  return evaluate(spec, x).probability;
}

/// The verdict depends only on the probability and the mode.
inline Verdict verdict_for(double p, DecisionMode mode) {
  constexpr double tol = kEqualityTolerance;
  switch (mode) {
    case DecisionMode::P:
      if (std::abs(p - 1.0) <= tol) return Verdict::Accept;
      if (std::abs(p) <= tol) return Verdict::Reject;
      return Verdict::Inconclusive;
    case DecisionMode::NP:
      return p > tol ? Verdict::Accept : Verdict::Reject;
    case DecisionMode::PP:
      return p > 0.5 + tol ? Verdict::Accept : Verdict::Reject;
    case DecisionMode::BPP:
    case DecisionMode::BQP:
    case DecisionMode::MQ2:
      if (p >= 2.0 / 3.0 - tol) return Verdict::Accept;
      if (p <= 1.0 / 3.0 + tol) return Verdict::Reject;
      return Verdict::Inconclusive;
  }
  return Verdict::Inconclusive;
}

struct DecisionReport {
  double probability = 0;
  double raw_probability = 0;
  DecisionMode mode = DecisionMode::MQ2;
  Verdict verdict = Verdict::Inconclusive;
  std::uint64_t applications = 0;
  std::chrono::duration<double, std::milli> elapsed{};
  std::map<Index, double> accepting_mass;
};

inline DecisionReport decide(const MachineSpec& spec, std::string_view x) {
  const auto start = std::chrono::steady_clock::now();
  Evaluation ev = evaluate(spec, x);
  DecisionReport r;
  r.elapsed = std::chrono::steady_clock::now() - start;
  r.probability = ev.probability;
  r.raw_probability = ev.raw_probability;
  r.mode = spec.mode;
  r.verdict = verdict_for(ev.probability, spec.mode);
  r.applications = ev.applications;
  r.accepting_mass = std::move(ev.accepting_mass);
  return r;
}

/// Row-major dense copy of one family member: at(row, col) = entry(col, row, n).
struct DenseMatrix {
  Index dim = 0;
  std::vector<Amplitude> data;

  Amplitude at(Index row, Index col) const { return data[row * dim + col]; }
  Amplitude& at(Index row, Index col) { return data[row * dim + col]; }
};

inline DenseMatrix materialize(const MatrixFamily& family, SizeParam n, Index cap) {
  const Index dim = family.dimension(n);
  if (dim > cap) {
    throw DimensionRefused("materialize: dimension " + std::to_string(dim) + " exceeds cap " +
                           std::to_string(cap));
  }
  DenseMatrix m{dim, std::vector<Amplitude>(dim * dim)};
  for (Index col = 0; col < dim; ++col) {
    for (Index row = 0; row < dim; ++row) m.at(row, col) = family.entry(col, row, n);
  }
  return m;
}

}  // namespace mfm
