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

// Shared domain types: implicit matrix families, sparse state vectors and
// machine specifications.
//
// A family is given entrywise. entry(i, j, n) is the matrix element in row j,
// column i of the member with size parameter n, so i is the source
// configuration and j the destination. A matrix-vector product therefore reads
// out[j] = sum_i entry(i, j, n) * v[i].

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfm/errors.hpp"

namespace mfm {

using Amplitude = std::complex<double>;
using Index = std::uint64_t;
using SizeParam = std::uint64_t;

/// Largest dimension any operation will touch.
inline constexpr Index kMaxDimension = Index{1} << 24;

enum class FamilyKind { Unitary, Stochastic };
enum class Semantics { AmplitudeVector, ProbabilityVector };
enum class DecisionMode { MQ2, BQP, P, NP, PP, BPP };

inline std::string to_string(FamilyKind k) {
  return k == FamilyKind::Unitary ? "Unitary" : "Stochastic";
}

inline std::string to_string(DecisionMode m) {
  switch (m) {
    case DecisionMode::MQ2: return "MQ2";
    case DecisionMode::BQP: return "BQP";
    case DecisionMode::P: return "P";
    case DecisionMode::NP: return "NP";
    case DecisionMode::PP: return "PP";
    case DecisionMode::BPP: return "BPP";
  }
  return "?";
}

inline std::optional<DecisionMode> parse_decision_mode(std::string_view s) {
  for (auto m : {DecisionMode::MQ2, DecisionMode::BQP, DecisionMode::P, DecisionMode::NP,
                 DecisionMode::PP, DecisionMode::BPP}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

/// True for the modes whose acceptance sums squared amplitude norms.
inline bool is_quantum_mode(DecisionMode m) {
  return m == DecisionMode::MQ2 || m == DecisionMode::BQP;
}

struct MatrixFamily {
  using EntryFn = std::function<Amplitude(Index from, Index to, SizeParam n)>;
  using DimensionFn = std::function<Index(SizeParam n)>;
  using SupportFn = std::function<std::vector<Index>(Index from, SizeParam n)>;

  EntryFn entry;
  DimensionFn dimension;
  FamilyKind kind = FamilyKind::Unitary;
  // Optional. Lists, without repeats, every destination that can hold a
  // nonzero entry in column `from`; any superset is allowed. When absent,
  // products scan all rows.
  SupportFn column_support;
  std::string name;
};

/// Sparse vector over configuration indices. Never stores an exact zero.
class StateVector {
 public:
  StateVector() = default;
  StateVector(SizeParam n, Semantics semantics) : size_param_(n), semantics_(semantics) {}

  static StateVector basis(SizeParam n, Index c, Semantics semantics) {
    StateVector v(n, semantics);
    v.set(c, 1.0);
    return v;
  }

  SizeParam size_param() const { return size_param_; }
  Semantics semantics() const { return semantics_; }
  const std::map<Index, Amplitude>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }

  Amplitude at(Index c) const {
    auto it = entries_.find(c);
    return it == entries_.end() ? Amplitude{} : it->second;
  }

  void set(Index c, Amplitude a) {
    if (a == Amplitude{}) {
      entries_.erase(c);
    } else {
      entries_[c] = a;
    }
  }

  void add(Index c, Amplitude a) { set(c, at(c) + a); }

  /// Sum of squared norms.
  double norm_squared() const {
    double s = 0;
    for (const auto& [c, a] : entries_) s += std::norm(a);
    return s;
  }

  /// Sum of real parts; the total probability in probability semantics.
  double total_mass() const {
    double s = 0;
    for (const auto& [c, a] : entries_) s += a.real();
    return s;
  }

 private:
  SizeParam size_param_ = 0;
  Semantics semantics_ = Semantics::AmplitudeVector;
  std::map<Index, Amplitude> entries_;
};

/// A decision procedure: a family applied to I(x) some number of times,
/// then a predicate a(x, c) selects the accepting configurations.
struct MachineSpec {
  MatrixFamily family;
  std::function<StateVector(std::string_view x)> initial_state;
  std::function<bool(std::string_view x, Index c)> accepts;
  std::function<SizeParam(std::string_view x)> size_of;
  std::function<std::uint64_t(SizeParam n)> applications;
  DecisionMode mode = DecisionMode::MQ2;
};

inline Semantics semantics_for(FamilyKind k) {
  return k == FamilyKind::Unitary ? Semantics::AmplitudeVector : Semantics::ProbabilityVector;
}

/// Structural checks on a spec, evaluated for input `x`. Returns one message
/// per violation; empty means the spec may be run on `x`.
inline std::vector<std::string> validate_machine_spec(const MachineSpec& spec,
                                                      std::string_view x = {}) {
  std::vector<std::string> out;
  if (!spec.family.entry || !spec.family.dimension) out.push_back("family: missing entry or dimension");
  if (!spec.initial_state) out.push_back("initial_state: missing");
  if (!spec.accepts) out.push_back("accepts: missing");
  if (!spec.size_of) out.push_back("size_of: missing");
  if (!spec.applications) out.push_back("applications: missing");
  if (!out.empty()) return out;

  const bool want_unitary = is_quantum_mode(spec.mode);
  if (want_unitary != (spec.family.kind == FamilyKind::Unitary)) {
    out.push_back("mode: " + to_string(spec.mode) + " requires a " +
                  (want_unitary ? "Unitary" : "Stochastic") + " family, got " +
                  to_string(spec.family.kind));
  }

  const SizeParam n = spec.size_of(x);
  const std::uint64_t count = spec.applications(n);
  if (count == 0) out.push_back("mode: application count must be positive");
  if (spec.mode == DecisionMode::MQ2 && count != 2) {
    out.push_back("mode: MQ2 applies the family exactly twice, got " + std::to_string(count));
  }

  const Index dim = spec.family.dimension(n);
  if (dim == 0) out.push_back("family: dimension(" + std::to_string(n) + ") is zero");

  const StateVector init = spec.initial_state(x);
  if (init.size_param() != n) {
    out.push_back("initial_state: size parameter " + std::to_string(init.size_param()) +
                  " differs from " + std::to_string(n));
  }
  if (init.semantics() != semantics_for(spec.family.kind)) {
    out.push_back("initial_state: semantics do not match the family kind");
  }
  for (const auto& [c, a] : init.entries()) {
    if (c >= dim) {
      out.push_back("initial_state: index " + std::to_string(c) + " out of range [0, " +
                    std::to_string(dim) + ")");
    }
    if (a == Amplitude{}) out.push_back("initial_state: stored zero at " + std::to_string(c));
    if (init.semantics() == Semantics::ProbabilityVector && (a.imag() != 0 || a.real() < 0)) {
      out.push_back("initial_state: probability entry at " + std::to_string(c) +
                    " is not a nonnegative real");
    }
  }
  return out;
}

}  // namespace mfm
