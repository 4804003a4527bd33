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

// Period finding as a two-application machine over configurations (a, i):
//
//   <a',i'|T|a,i> = q^{-1/2} exp(2 pi i a a' / q) [ (i + i') mod N == x^a mod N ]
//
// which is DFT (on a) times MOD (i -> (x^a - i) mod N). The x and N registers
// are fixed by Kronecker deltas, so only one (x, N) block is simulated.
// Continued-fraction post-processing lives in the acceptance predicate.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfm/codec.hpp"
#include "mfm/core.hpp"
#include "mfm/engine.hpp"

namespace mfm::shor {

/// Convergent denominators are retried at multiples up to this before rejecting.
inline constexpr std::uint64_t kMaxMultiple = 4;

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

/// 2^{2 ceil(log2 N)}.
inline std::uint64_t default_q(std::uint64_t N) {
  const unsigned bits = static_cast<unsigned>(std::bit_width(N - 1));  // ceil(log2 N) for N >= 2
  return std::uint64_t{1} << (2 * bits);
}

struct ShorInstance {
  std::uint64_t N = 0;
  std::uint64_t x = 0;
  std::uint64_t q = 0;
  unsigned target_bit = 0;

  Index dimension() const { return q * N; }
};

inline ShorInstance make_instance(std::uint64_t N, std::uint64_t x, unsigned target_bit = 0,
                                  std::optional<std::uint64_t> q = std::nullopt) {
  if (N < 3 || N >= (std::uint64_t{1} << 31)) {
    throw ContractError("shor: N = " + std::to_string(N) + " outside [3, 2^31)");
  }
  if (x <= 1 || x >= N) throw ContractError("shor: x must satisfy 1 < x < N");
  if (std::gcd(x, N) != 1) {
    throw ContractError("shor: gcd(x, N) = " + std::to_string(std::gcd(x, N)) + ", not coprime");
  }
  if (target_bit >= 64) throw ContractError("shor: target bit must be < 64");
  const std::uint64_t min_q = default_q(N);
  const std::uint64_t qq = q.value_or(min_q);
  if (!std::has_single_bit(qq) || qq < min_q) {
    throw ContractError("shor: q = " + std::to_string(qq) + " must be a power of two >= " +
                        std::to_string(min_q));
  }
  return {N, x, qq, target_bit};
}

struct ShorConfig {
  std::uint64_t a = 0;
  std::uint64_t i = 0;

  friend bool operator==(const ShorConfig&, const ShorConfig&) = default;
};

/// i-major layout: index = i * q + a.
inline ConfigCodec shor_codec(const ShorInstance& inst) {
  return ConfigCodec({{"i", inst.N}, {"a", inst.q}});
}

inline Index pack(const ShorInstance& inst, ShorConfig c) { return c.i * inst.q + c.a; }

inline ShorConfig unpack(const ShorInstance& inst, Index idx) {
  return {idx % inst.q, idx / inst.q};
}

inline Amplitude dft_entry(const ShorInstance& inst, ShorConfig from, ShorConfig to) {
  if (from.i != to.i) return {};
  const std::uint64_t k = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(from.a) * to.a) % inst.q);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(inst.q);
  return std::polar(1.0 / std::sqrt(static_cast<double>(inst.q)), angle);
}

inline Amplitude mod_entry(const ShorInstance& inst, ShorConfig from, ShorConfig to) {
  if (from.a != to.a) return {};
  return (to.i + from.i) % inst.N == pow_mod(inst.x, from.a, inst.N) ? 1.0 : 0.0;
}

/// The combined DFT * MOD block as an implicit family. Powers x^a mod N and
/// the q phases are tabulated up front.
inline MatrixFamily shor_family(const ShorInstance& inst) {
  if (inst.dimension() > kMaxDimension) {
    throw DimensionRefused("shor: dimension q*N = " + std::to_string(inst.dimension()) +
                           " exceeds cap " + std::to_string(kMaxDimension));
  }
  struct Tables {
    std::vector<std::uint64_t> powers;
    std::vector<Amplitude> phases;
  };
  auto t = std::make_shared<Tables>();
  t->powers.resize(inst.q);
  t->phases.resize(inst.q);
  std::uint64_t p = 1 % inst.N;
  const double scale = 1.0 / std::sqrt(static_cast<double>(inst.q));
  for (std::uint64_t a = 0; a < inst.q; ++a) {
    t->powers[a] = p;
    p = static_cast<std::uint64_t>((static_cast<unsigned __int128>(p) * inst.x) % inst.N);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(inst.q);
    t->phases[a] = std::polar(scale, angle);
  }
  std::shared_ptr<const Tables> tables = t;

  MatrixFamily fam;
  fam.name = "shor(N=" + std::to_string(inst.N) + ",x=" + std::to_string(inst.x) +
             ",q=" + std::to_string(inst.q) + ")";
  fam.kind = FamilyKind::Unitary;
  const Index dim = inst.dimension();
  fam.dimension = [dim](SizeParam) { return dim; };
  fam.entry = [inst, tables](Index from, Index to, SizeParam) -> Amplitude {
    const ShorConfig f = unpack(inst, from);
    const ShorConfig g = unpack(inst, to);
    if ((f.i + g.i) % inst.N != tables->powers[f.a]) return {};
    // q <= 2^24 under the dimension cap, and q is a power of two.
    return tables->phases[(f.a * g.a) & (inst.q - 1)];
  };
  fam.column_support = [inst, tables](Index from, SizeParam) {
    const ShorConfig f = unpack(inst, from);
    const std::uint64_t target = (tables->powers[f.a] + inst.N - f.i) % inst.N;
    std::vector<Index> rows(inst.q);
    for (std::uint64_t a = 0; a < inst.q; ++a) rows[a] = pack(inst, {a, target});
    return rows;
  };
  return fam;
}

/// Smallest denominator r <= N of a continued-fraction convergent d/r of
/// a/q with |a/q - d/r| <= 1/(2q).
inline std::optional<std::uint64_t> extract_period_candidate(std::uint64_t a, std::uint64_t q,
                                                             std::uint64_t N) {
  if (a >= q) throw ContractError("extract_period_candidate: a >= q");
  if (a == 0) return std::nullopt;
  // Convergent recurrences h_k = t h_{k-1} + h_{k-2}, k_k likewise.
  std::int64_t h_prev = 1, h_prev2 = 0;
  std::int64_t k_prev = 0, k_prev2 = 1;
  auto num = static_cast<std::int64_t>(a);
  auto den = static_cast<std::int64_t>(q);
  const auto qs = static_cast<std::int64_t>(q);
  const auto as = static_cast<std::int64_t>(a);
  while (den != 0) {
    const std::int64_t t = num / den;
    const std::int64_t h = t * h_prev + h_prev2;
    const std::int64_t k = t * k_prev + k_prev2;
    if (k > static_cast<std::int64_t>(N)) break;
    if (2 * std::abs(as * k - h * qs) <= k) return static_cast<std::uint64_t>(k);
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const std::int64_t rem = num - t * den;
    num = den;
    den = rem;
  }
  return std::nullopt;
}

/// Candidate from a' checked by modular exponentiation, retrying multiples.
inline std::optional<std::uint64_t> verified_period(const ShorInstance& inst,
                                                    std::uint64_t a_prime) {
  const auto r = extract_period_candidate(a_prime, inst.q, inst.N);
  if (!r) return std::nullopt;
  for (std::uint64_t m = 1; m <= kMaxMultiple; ++m) {
    if (pow_mod(inst.x, m * *r, inst.N) == 1) return m * *r;
  }
  return std::nullopt;
}

/// a(x, c): reads only a' from the configuration.
inline bool shor_accepts(const ShorInstance& inst, Index c) {
  if (c >= inst.dimension()) throw ContractError("shor_accepts: configuration out of range");
  const auto period = verified_period(inst, unpack(inst, c).a);
  return period && ((*period >> inst.target_bit) & 1) != 0;
}

inline MachineSpec build_shor_machine(const ShorInstance& inst) {
  MachineSpec spec;
  spec.family = shor_family(inst);
  const auto n = static_cast<SizeParam>(std::bit_width(inst.N));
  spec.size_of = [n](std::string_view) { return n; };
  spec.initial_state = [n](std::string_view) {
    return StateVector::basis(n, 0, Semantics::AmplitudeVector);
  };
  spec.accepts = [inst](std::string_view, Index c) { return shor_accepts(inst, c); };
  spec.applications = [](SizeParam) { return std::uint64_t{2}; };
  spec.mode = DecisionMode::MQ2;
  return spec;
}

inline std::uint64_t brute_force_period(std::uint64_t x, std::uint64_t N) {
  if (N < 2 || N > 1'000'000 || std::gcd(x, N) != 1) {
    throw ContractError("brute_force_period: need gcd(x, N) = 1 and 2 <= N <= 10^6");
  }
  std::uint64_t v = x % N;
  std::uint64_t r = 1;
  while (v != 1) {
    v = v * x % N;
    ++r;
  }
  return r;
}

/// Nontrivial factors from gcd(x^{r/2} -+ 1, N), ascending.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> factor_from_period(
    std::uint64_t x, std::uint64_t N, std::uint64_t r) {
  if (r == 0 || pow_mod(x, r, N) != 1) throw ContractError("factor_from_period: x^r != 1 mod N");
  if (r % 2 != 0) return std::nullopt;
  const std::uint64_t y = pow_mod(x, r / 2, N);
  if (y == N - 1) return std::nullopt;
  for (std::uint64_t g : {std::gcd(y + N - 1, N), std::gcd(y + 1, N)}) {
    if (g != 1 && g != N) {
      const std::uint64_t other = N / g;
      return std::make_pair(std::min(g, other), std::max(g, other));
    }
  }
  return std::nullopt;
}

/// Marginal over a' of squared amplitudes.
inline std::map<std::uint64_t, double> a_prime_marginal(const ShorInstance& inst,
                                                        const StateVector& v) {
  std::map<std::uint64_t, double> out;
  for (const auto& [c, amp] : v.entries()) out[unpack(inst, c).a] += std::norm(amp);
  return out;
}

struct ShorRun {
  ShorInstance instance;
  Evaluation evaluation;
  std::map<std::uint64_t, double> histogram;
  std::optional<std::uint64_t> period;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> factors;
};

/// Runs the machine once and summarises: the reported period is the verified
/// period carrying the most probability (smallest on ties).
inline ShorRun run_shor(const ShorInstance& inst) {
  ShorRun run;
  run.instance = inst;
  run.evaluation = evaluate(build_shor_machine(inst), "");
  run.histogram = a_prime_marginal(inst, run.evaluation.final_state);

  std::map<std::uint64_t, double> by_period;
  for (const auto& [a, p] : run.histogram) {
    if (auto r = verified_period(inst, a)) by_period[*r] += p;
  }
  double best = 0;
  for (const auto& [r, mass] : by_period) {
    if (mass > best) {
      best = mass;
      run.period = r;
    }
  }
  if (run.period) run.factors = factor_from_period(inst.x, inst.N, *run.period);
  return run;
}

}  // namespace mfm::shor
