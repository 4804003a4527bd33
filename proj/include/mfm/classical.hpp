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

// Probabilistic Turing machines compiled into stochastic transition families.
//
// A configuration is (state, head, tape) over a window of 2T(n)+1 cells
// centred on the starting head position, where T is the declared time bound.
// Indices enumerate configurations lexicographically by (state, head,
// cell_0 ... cell_{2T}). Moves that would leave the window become self-loops;
// halting configurations (no outgoing transitions) self-loop as well.

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mfm/codec.hpp"
#include "mfm/core.hpp"
#include "mfm/engine.hpp"
#include "mfm/rng.hpp"

namespace mfm::classical {

using Weight = boost::rational<std::int64_t>;

enum class Move { L, R, S };

struct Outcome {
  Weight weight;
  unsigned state = 0;
  unsigned write = 0;
  Move move = Move::S;
};

struct PTMDescription {
  std::string name;
  unsigned num_states = 0;
  unsigned initial_state = 0;
  std::vector<unsigned> accepting;
  unsigned alphabet = 0;
  unsigned blank = 0;
  std::vector<std::uint64_t> time_bound;  // T(n) = sum_k time_bound[k] n^k
  std::vector<std::vector<Outcome>> transitions;  // [state * alphabet + symbol]; empty = halt

  const std::vector<Outcome>& outcomes(unsigned state, unsigned symbol) const {
    return transitions[static_cast<std::size_t>(state) * alphabet + symbol];
  }

  bool is_accepting(unsigned state) const {
    return std::find(accepting.begin(), accepting.end(), state) != accepting.end();
  }

  std::uint64_t time_bound_at(std::uint64_t n) const {
    std::uint64_t t = 0;
    for (std::size_t k = time_bound.size(); k-- > 0;) t = t * n + time_bound[k];
    return t;
  }
};

/// Throws ContractError unless every index is in range and every non-halting
/// distribution sums to exactly 1.
inline void validate(const PTMDescription& d) {
  if (d.num_states == 0 || d.alphabet == 0) throw ContractError("ptm: empty state set or alphabet");
  if (d.initial_state >= d.num_states) throw ContractError("ptm: initial state out of range");
  if (d.blank >= d.alphabet) throw ContractError("ptm: blank symbol out of range");
  for (unsigned a : d.accepting) {
    if (a >= d.num_states) throw ContractError("ptm: accepting state out of range");
  }
  if (d.transitions.size() != static_cast<std::size_t>(d.num_states) * d.alphabet) {
    throw ContractError("ptm: need one transition entry per (state, symbol)");
  }
  for (std::size_t k = 0; k < d.transitions.size(); ++k) {
    const auto& outs = d.transitions[k];
    if (outs.empty()) continue;
    Weight sum = 0;
    for (const auto& o : outs) {
      if (o.weight <= Weight(0)) throw ContractError("ptm: nonpositive weight");
      if (o.state >= d.num_states || o.write >= d.alphabet) {
        throw ContractError("ptm: outcome state or symbol out of range");
      }
      sum += o.weight;
    }
    if (sum != Weight(1)) {  // Weight(1): boost 1.74 recurses on mixed comparisons in C++20
      throw ContractError("ptm: distribution for state " + std::to_string(k / d.alphabet) +
                          ", symbol " + std::to_string(k % d.alphabet) + " sums to " +
                          std::to_string(sum.numerator()) + "/" +
                          std::to_string(sum.denominator()));
    }
  }
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == sep) {
      out.emplace_back(s.substr(start, k - start));
      start = k + 1;
    }
  }
  return out;
}

inline std::uint64_t parse_uint(const std::string& s, int line) {
  std::uint64_t v = 0;
  std::size_t used = 0;
  try {
    if (s.empty() || s[0] == '-' || s[0] == '+') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ParseError("ptm line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
  }
  return v;
}

inline Outcome parse_outcome(const std::string& tok, int line) {
  const auto colon = tok.find(':');
  if (colon == std::string::npos) {
    throw ParseError("ptm line " + std::to_string(line) + ": outcome '" + tok +
                     "' is not weight:state,write,move");
  }
  Outcome o;
  const auto w = split(std::string_view(tok).substr(0, colon), '/');
  if (w.size() > 2) throw ParseError("ptm line " + std::to_string(line) + ": bad weight");
  const auto num = parse_uint(w[0], line);
  const auto den = w.size() == 2 ? parse_uint(w[1], line) : 1;
  if (den == 0) throw ParseError("ptm line " + std::to_string(line) + ": zero denominator");
  constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max());
  if (num > kMax || den > kMax) throw ParseError("ptm line " + std::to_string(line) + ": weight too large");
  o.weight = Weight(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));

  const auto parts = split(std::string_view(tok).substr(colon + 1), ',');
  if (parts.size() != 3) {
    throw ParseError("ptm line " + std::to_string(line) + ": outcome needs state,write,move");
  }
  o.state = static_cast<unsigned>(parse_uint(parts[0], line));
  o.write = static_cast<unsigned>(parse_uint(parts[1], line));
  if (parts[2] == "L") {
    o.move = Move::L;
  } else if (parts[2] == "R") {
    o.move = Move::R;
  } else if (parts[2] == "S") {
    o.move = Move::S;
  } else {
    throw ParseError("ptm line " + std::to_string(line) + ": move must be L, R or S");
  }
  return o;
}

}  // namespace detail

/// Text format:
///
///   states k accepting a1,a2 alphabet m blank b time_bound c0,c1
///
/// followed by k*m transition lines in (state, symbol) order, each either
/// `halt` or whitespace-separated outcomes `num/den:state,write,move`.
/// `accepting -` declares no accepting state. `#` starts a comment.
inline PTMDescription parse_ptm(std::istream& in, std::string name = "ptm") {
  PTMDescription d;
  d.name = std::move(name);
  std::vector<std::pair<int, std::string>> lines;
  std::string raw;
  for (int no = 1; std::getline(in, raw); ++no) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.emplace_back(no, raw);
  }
  if (lines.empty()) throw ParseError("ptm: empty description");

  {
    const auto& [no, header] = lines.front();
    std::istringstream hs(header);
    std::unordered_map<std::string, std::string> fields;
    for (std::string key, value; hs >> key;) {
      if (!(hs >> value)) throw ParseError("ptm line " + std::to_string(no) + ": '" + key + "' has no value");
      if (!fields.emplace(key, value).second) {
        throw ParseError("ptm line " + std::to_string(no) + ": duplicate field '" + key + "'");
      }
    }
    for (const char* key : {"states", "accepting", "alphabet", "blank", "time_bound"}) {
      if (!fields.count(key)) throw ParseError("ptm header: missing field '" + std::string(key) + "'");
    }
    if (fields.size() != 5) throw ParseError("ptm header: unknown field");
    d.num_states = static_cast<unsigned>(detail::parse_uint(fields["states"], no));
    d.alphabet = static_cast<unsigned>(detail::parse_uint(fields["alphabet"], no));
    d.blank = static_cast<unsigned>(detail::parse_uint(fields["blank"], no));
    if (fields["accepting"] != "-") {
      for (const auto& a : detail::split(fields["accepting"], ',')) {
        d.accepting.push_back(static_cast<unsigned>(detail::parse_uint(a, no)));
      }
    }
    for (const auto& c : detail::split(fields["time_bound"], ',')) {
      d.time_bound.push_back(detail::parse_uint(c, no));
    }
  }
  if (d.num_states == 0 || d.alphabet == 0 || d.num_states > 4096 || d.alphabet > 256) {
    throw ParseError("ptm header: states must be in [1, 4096], alphabet in [1, 256]");
  }

  const std::size_t expected = static_cast<std::size_t>(d.num_states) * d.alphabet;
  if (lines.size() - 1 != expected) {
    throw ParseError("ptm: expected " + std::to_string(expected) + " transition lines, got " +
                     std::to_string(lines.size() - 1));
  }
  d.transitions.resize(expected);
  for (std::size_t k = 0; k < expected; ++k) {
    const auto& [no, text] = lines[k + 1];
    std::istringstream ls(text);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.size() == 1 && toks[0] == "halt") continue;
    for (const auto& t : toks) d.transitions[k].push_back(detail::parse_outcome(t, no));
  }
  try {
    validate(d);
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
  return d;
}

inline PTMDescription load_ptm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("ptm: cannot open '" + path + "'");
  return parse_ptm(in, path);
}

struct PTMConfiguration {
  unsigned state = 0;
  std::uint64_t head = 0;        // cell index in [0, 2T]; cell T is position 0
  std::vector<unsigned> tape;    // 2T+1 cells

  friend bool operator==(const PTMConfiguration&, const PTMConfiguration&) = default;
};

/// Configuration indexing for a window of radius `radius`.
class PTMLayout {
 public:
  PTMLayout(const PTMDescription& d, std::uint64_t radius)
      : radius_(radius), codec_(registers(d, radius)) {}

  std::uint64_t radius() const { return radius_; }
  std::uint64_t cells() const { return 2 * radius_ + 1; }
  const ConfigCodec& codec() const { return codec_; }
  Index dimension() const { return codec_.dimension(); }

  Index pack(const PTMConfiguration& c) const {
    std::vector<std::uint64_t> digits;
    digits.reserve(cells() + 2);
    digits.push_back(c.state);
    digits.push_back(c.head);
    for (unsigned s : c.tape) digits.push_back(s);
    return codec_.pack(digits);
  }

  PTMConfiguration unpack(Index idx) const {
    const auto digits = codec_.unpack(idx);
    PTMConfiguration c;
    c.state = static_cast<unsigned>(digits[0]);
    c.head = digits[1];
    c.tape.assign(digits.begin() + 2, digits.end());
    return c;
  }

  /// k * (2T+1) * m^(2T+1), saturating at UINT64_MAX.
  static Index count(const PTMDescription& d, std::uint64_t radius) {
    const std::uint64_t cells = 2 * radius + 1;
    constexpr Index kSat = std::numeric_limits<Index>::max();
    auto mul = [](Index a, Index b) { return (b != 0 && a > kSat / b) ? kSat : a * b; };
    Index dim = mul(d.num_states, cells);
    for (std::uint64_t k = 0; k < cells && dim != kSat; ++k) dim = mul(dim, d.alphabet);
    return dim;
  }

 private:
  static std::vector<ConfigCodec::Register> registers(const PTMDescription& d, std::uint64_t radius) {
    if (count(d, radius) > kMaxDimension) {
      throw DimensionRefused("ptm: window radius " + std::to_string(radius) +
                             " gives more than " + std::to_string(kMaxDimension) +
                             " configurations");
    }
    std::vector<ConfigCodec::Register> regs{{"state", d.num_states}, {"head", 2 * radius + 1}};
    for (std::uint64_t k = 0; k < 2 * radius + 1; ++k) {
      regs.push_back({"cell" + std::to_string(k), d.alphabet});
    }
    return regs;
  }

  std::uint64_t radius_;
  ConfigCodec codec_;
};

/// One-step successors of a configuration with their exact probabilities.
/// Outcomes landing on the same configuration are merged.
inline std::vector<std::pair<PTMConfiguration, Weight>> successors(const PTMDescription& d,
                                                                   const PTMConfiguration& c) {
  const auto& outs = d.outcomes(c.state, c.tape[c.head]);
  std::vector<std::pair<PTMConfiguration, Weight>> result;
  if (outs.empty()) {
    result.emplace_back(c, Weight(1));
    return result;
  }
  const std::uint64_t last = c.tape.size() - 1;
  for (const auto& o : outs) {
    PTMConfiguration next = c;
    const bool off_edge = (o.move == Move::L && c.head == 0) || (o.move == Move::R && c.head == last);
    if (!off_edge) {
      next.state = o.state;
      next.tape[c.head] = o.write;
      if (o.move == Move::L) --next.head;
      if (o.move == Move::R) ++next.head;
    }
    auto it = std::find_if(result.begin(), result.end(), [&](const auto& e) { return e.first == next; });
    if (it == result.end()) {
      result.emplace_back(std::move(next), o.weight);
    } else {
      it->second += o.weight;
    }
  }
  return result;
}

/// Window used for inputs of length n: at least T(n), or `radius` if larger.
inline std::uint64_t window_radius(const PTMDescription& d, std::uint64_t n,
                                   std::optional<std::uint64_t> radius = std::nullopt) {
  return std::max(d.time_bound_at(n), radius.value_or(0));
}

/// Stochastic family for inputs of length n. The family is only defined at
/// that n.
inline MatrixFamily compile_ptm(const PTMDescription& d, std::uint64_t n,
                                std::optional<std::uint64_t> radius = std::nullopt) {
  validate(d);
  const std::uint64_t r = window_radius(d, n, radius);
  if (PTMLayout::count(d, r) > kMaxDimension) {
    throw DimensionRefused("ptm '" + d.name + "': T(" + std::to_string(n) + ") = " +
                           std::to_string(d.time_bound_at(n)) + " (window radius " +
                           std::to_string(r) + ") exceeds the dimension cap " +
                           std::to_string(kMaxDimension));
  }
  auto layout = std::make_shared<const PTMLayout>(d, r);
  auto desc = std::make_shared<const PTMDescription>(d);

  MatrixFamily fam;
  fam.name = "ptm(" + d.name + ")";
  fam.kind = FamilyKind::Stochastic;
  fam.dimension = [desc, radius](SizeParam m) {
    return PTMLayout::count(*desc, window_radius(*desc, m, radius));
  };
  fam.entry = [desc, layout, n](Index from, Index to, SizeParam m) -> Amplitude {
    if (m != n) throw ContractError("ptm family defined only at n = " + std::to_string(n));
    for (const auto& [next, w] : successors(*desc, layout->unpack(from))) {
      if (layout->pack(next) == to) return boost::rational_cast<double>(w);
    }
    return 0.0;
  };
  fam.column_support = [desc, layout](Index from, SizeParam) {
    std::vector<Index> rows;
    for (const auto& [next, w] : successors(*desc, layout->unpack(from))) {
      rows.push_back(layout->pack(next));
    }
    return rows;
  };
  return fam;
}

/// Input symbols are the digits of x, written from the head cell rightwards.
inline std::vector<unsigned> input_symbols(const PTMDescription& d, std::string_view x) {
  std::vector<unsigned> out;
  for (char ch : x) {
    if (ch < '0' || ch > '9' || static_cast<unsigned>(ch - '0') >= d.alphabet) {
      throw ContractError("ptm: input character '" + std::string(1, ch) + "' is not a symbol");
    }
    out.push_back(static_cast<unsigned>(ch - '0'));
  }
  return out;
}

inline PTMConfiguration initial_configuration(const PTMDescription& d, std::string_view x,
                                              std::uint64_t radius) {
  const auto symbols = input_symbols(d, x);
  if (symbols.size() > radius + 1) {
    throw ContractError("ptm: input of length " + std::to_string(symbols.size()) +
                        " does not fit a window of radius " + std::to_string(radius));
  }
  PTMConfiguration c;
  c.state = d.initial_state;
  c.head = radius;
  c.tape.assign(2 * radius + 1, d.blank);
  std::copy(symbols.begin(), symbols.end(), c.tape.begin() + static_cast<std::ptrdiff_t>(radius));
  return c;
}

/// Machine spec running the compiled family T(|x|) times from I(x).
inline MachineSpec ptm_machine(const PTMDescription& d, std::string_view x, DecisionMode mode,
                               std::optional<std::uint64_t> radius = std::nullopt) {
  if (is_quantum_mode(mode)) throw ContractError("ptm machines use P, NP, PP or BPP");
  const std::uint64_t n = x.size();
  MachineSpec spec;
  spec.family = compile_ptm(d, n, radius);
  const std::uint64_t r = window_radius(d, n, radius);
  auto layout = std::make_shared<const PTMLayout>(d, r);
  auto desc = std::make_shared<const PTMDescription>(d);
  spec.size_of = [](std::string_view input) { return SizeParam{input.size()}; };
  spec.initial_state = [desc, layout](std::string_view input) {
    const Index c = layout->pack(initial_configuration(*desc, input, layout->radius()));
    return StateVector::basis(input.size(), c, Semantics::ProbabilityVector);
  };
  spec.accepts = [desc, layout](std::string_view, Index c) {
    return desc->is_accepting(layout->unpack(c).state);
  };
  spec.applications = [desc](SizeParam m) { return desc->time_bound_at(m); };
  spec.mode = mode;
  return spec;
}

inline DecisionReport decide_classical(const PTMDescription& d, std::string_view x,
                                       DecisionMode mode,
                                       std::optional<std::uint64_t> radius = std::nullopt) {
  return decide(ptm_machine(d, x, mode, radius), x);
}

/// Direct simulation on an unbounded tape for T(|x|) steps; trial t draws
/// from stream t of the seed.
inline double monte_carlo_ptm(const PTMDescription& d, std::string_view x, std::uint64_t trials,
                              std::uint64_t seed) {
  if (trials == 0) throw ContractError("monte_carlo_ptm: trials must be >= 1");
  validate(d);
  const auto symbols = input_symbols(d, x);
  const std::uint64_t steps = d.time_bound_at(x.size());
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    std::unordered_map<std::int64_t, unsigned> tape;
    for (std::size_t k = 0; k < symbols.size(); ++k) tape[static_cast<std::int64_t>(k)] = symbols[k];
    std::int64_t head = 0;
    unsigned state = d.initial_state;
    for (std::uint64_t s = 0; s < steps; ++s) {
      auto cell = tape.find(head);
      const unsigned symbol = cell == tape.end() ? d.blank : cell->second;
      const auto& outs = d.outcomes(state, symbol);
      if (outs.empty()) break;
      const double u = rng.uniform();
      double cumulative = 0;
      const Outcome* pick = &outs.back();
      for (const auto& o : outs) {
        cumulative += boost::rational_cast<double>(o.weight);
        if (u < cumulative) {
          pick = &o;
          break;
        }
      }
      tape[head] = pick->write;
      state = pick->state;
      if (pick->move == Move::L) --head;
      if (pick->move == Move::R) ++head;
    }
    if (d.is_accepting(state)) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(trials);
}

}  // namespace mfm::classical
