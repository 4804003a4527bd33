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

// Deutsch-Jozsa as a two-application machine: T = O_f * H^n, so that
// <y|T|x> = 2^{-n/2} (-1)^{f(x)} (-1)^{x.y}. The machine starts in and accepts
// at the all-zero configuration.

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mfm/core.hpp"

namespace mfm::dj {

inline constexpr unsigned kMaxArity = 24;
inline constexpr unsigned kMaxTableArity = 16;

enum class OracleClass { Constant, Balanced, Neither, Unknown };

inline std::string to_string(OracleClass c) {
  switch (c) {
    case OracleClass::Constant: return "Constant";
    case OracleClass::Balanced: return "Balanced";
    case OracleClass::Neither: return "Neither";
    case OracleClass::Unknown: return "Unknown";
  }
  return "?";
}

/// f : {0,1}^arity -> {0,1}; bit b of the argument is input bit b.
struct BooleanOracle {
  unsigned arity = 1;
  std::function<bool(Index)> evaluate;
  OracleClass declared = OracleClass::Unknown;
  std::string name;
};

inline BooleanOracle truth_table_oracle(std::vector<bool> table, std::string name = "table") {
  if (table.empty() || !std::has_single_bit(table.size())) {
    throw ContractError("truth table length " + std::to_string(table.size()) +
                        " is not a positive power of two");
  }
  const auto arity = static_cast<unsigned>(std::countr_zero(table.size()));
  if (arity == 0) throw ContractError("truth table needs at least one input bit");
  auto shared = std::make_shared<const std::vector<bool>>(std::move(table));
  return {arity, [shared](Index k) { return (*shared)[k]; }, OracleClass::Unknown,
          std::move(name)};
}

inline OracleClass classify_oracle(const BooleanOracle& f) {
  if (f.arity > kMaxTableArity) {
    throw ContractError("classify_oracle: arity " + std::to_string(f.arity) + " exceeds " +
                        std::to_string(kMaxTableArity));
  }
  const Index size = Index{1} << f.arity;
  Index ones = 0;
  for (Index k = 0; k < size; ++k) ones += f.evaluate(k) ? 1 : 0;
  if (ones == 0 || ones == size) return OracleClass::Constant;
  if (ones == size / 2) return OracleClass::Balanced;
  return OracleClass::Neither;
}

/// Built-in menu: constant0, constant1, parity, lowbit, neither-demo.
inline BooleanOracle builtin_oracle(std::string_view name, unsigned arity) {
  if (arity == 0 || arity > kMaxArity) {
    throw ContractError("oracle arity must be in [1, " + std::to_string(kMaxArity) + "]");
  }
  const std::string id(name);
  if (name == "constant0") return {arity, [](Index) { return false; }, OracleClass::Constant, id};
  if (name == "constant1") return {arity, [](Index) { return true; }, OracleClass::Constant, id};
  if (name == "parity") {
    return {arity, [](Index k) { return (std::popcount(k) & 1) != 0; }, OracleClass::Balanced, id};
  }
  if (name == "lowbit") return {arity, [](Index k) { return (k & 1) != 0; }, OracleClass::Balanced, id};
  if (name == "neither-demo") {
    if (arity < 2) throw ContractError("neither-demo needs arity >= 2");
    const Index last = (Index{1} << arity) - 1;
    return {arity, [last](Index k) { return k == last; }, OracleClass::Neither, id};
  }
  throw ContractError("unknown builtin oracle '" + id + "'");
}

/// Truth-table text: first line n, second line 2^n characters from {0,1}.
inline BooleanOracle parse_truth_table(std::istream& in, std::string name = "file") {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("truth table: missing arity line");
  unsigned long n = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> n) || (ls >> extra)) throw ParseError("truth table: bad arity line '" + line + "'");
  }
  if (n == 0 || n > kMaxTableArity) {
    throw ParseError("truth table: arity must be in [1, " + std::to_string(kMaxTableArity) + "]");
  }
  if (!std::getline(in, line)) throw ParseError("truth table: missing values line");
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  const std::size_t want = std::size_t{1} << n;
  if (line.size() != want) {
    throw ParseError("truth table: expected " + std::to_string(want) + " values, got " +
                     std::to_string(line.size()));
  }
  std::vector<bool> table(want);
  for (std::size_t k = 0; k < want; ++k) {
    if (line[k] != '0' && line[k] != '1') {
      throw ParseError("truth table: invalid character at position " + std::to_string(k));
    }
    table[k] = line[k] == '1';
  }
  for (std::string rest; std::getline(in, rest);) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError("truth table: trailing content");
    }
  }
  return truth_table_oracle(std::move(table), std::move(name));
}

inline BooleanOracle load_truth_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("truth table: cannot open '" + path + "'");
  return parse_truth_table(in, path);
}

/// 2^{-2n} (sum_k (-1)^{f(k)})^2 by exhaustive summation.
inline double dj_closed_form_probability(const BooleanOracle& f) {
  if (f.arity > kMaxArity) throw ContractError("dj_closed_form_probability: arity too large");
  const Index size = Index{1} << f.arity;
  std::int64_t sum = 0;
  for (Index k = 0; k < size; ++k) sum += f.evaluate(k) ? -1 : 1;
  const double ratio = static_cast<double>(sum) / static_cast<double>(size);
  return ratio * ratio;
}

/// The family O_f H^n. f is tabulated once so entries are table lookups.
inline MatrixFamily dj_family(const BooleanOracle& f) {
  if (f.arity == 0 || f.arity > kMaxArity) {
    throw DimensionRefused("dj: arity " + std::to_string(f.arity) + " outside [1, " +
                           std::to_string(kMaxArity) + "]");
  }
  const Index size = Index{1} << f.arity;
  auto flips = std::make_shared<std::vector<std::uint8_t>>(size);
  for (Index k = 0; k < size; ++k) (*flips)[k] = f.evaluate(k) ? 1 : 0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  const unsigned arity = f.arity;

  MatrixFamily fam;
  fam.name = "dj(" + f.name + ")";
  fam.kind = FamilyKind::Unitary;
  fam.dimension = [](SizeParam n) { return Index{1} << n; };
  fam.entry = [flips = std::shared_ptr<const std::vector<std::uint8_t>>(flips), scale, arity](
                  Index x, Index y, SizeParam n) -> Amplitude {
    if (n != arity) throw ContractError("dj family defined only at n = " + std::to_string(arity));
    const bool odd = (((*flips)[x] + std::popcount(x & y)) & 1) != 0;
    return odd ? -scale : scale;
  };
  return fam;
}

inline MachineSpec build_dj_machine(const BooleanOracle& f) {
  if (f.declared != OracleClass::Unknown && f.arity <= kMaxTableArity &&
      classify_oracle(f) != f.declared) {
    throw ContractError("oracle '" + f.name + "' is not " + to_string(f.declared));
  }
  MachineSpec spec;
  spec.family = dj_family(f);
  const unsigned arity = f.arity;
  spec.size_of = [arity](std::string_view) { return SizeParam{arity}; };
  spec.initial_state = [arity](std::string_view) {
    return StateVector::basis(arity, 0, Semantics::AmplitudeVector);
  };
  spec.accepts = [](std::string_view, Index c) { return c == 0; };
  spec.applications = [](SizeParam) { return std::uint64_t{2}; };
  spec.mode = DecisionMode::MQ2;
  return spec;
}

}  // namespace mfm::dj
