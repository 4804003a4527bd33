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

#include <sstream>

#include "gtest/gtest.h"

#include "mfm/classical.hpp"
#include "mfm/verifier.hpp"
#include "oracles.hpp"

using namespace mfm;
using namespace mfm::classical;

namespace {

PTMDescription load(const std::string& name) {
  return load_ptm(std::string(MFM_DATA_DIR) + "/ptm/" + name);
}

PTMDescription parse(const std::string& text) {
  std::istringstream in(text);
  return parse_ptm(in);
}

}  // namespace

TEST(ParsePtm, bundled_files) {
  const auto d = load("biased_majority.ptm");
  EXPECT_EQ(d.num_states, 8u);
  EXPECT_EQ(d.alphabet, 2u);
  EXPECT_EQ(d.accepting, std::vector<unsigned>{6});
  EXPECT_EQ(d.time_bound_at(0), 3u);
  EXPECT_EQ(d.outcomes(0, 0).size(), 2u);
  EXPECT_EQ(d.outcomes(0, 0)[0].weight, Weight(4, 5));
  EXPECT_TRUE(d.outcomes(6, 1).empty());

  const auto scan = load("accept_all.ptm");
  EXPECT_EQ(scan.time_bound_at(4), 5u);
  EXPECT_TRUE(load("right_mover.ptm").accepting.empty());
}

TEST(ParsePtm, malformed) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 time_bound 1\n1:0,0,S\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 blank 0 time_bound 1 colour red\n1:0,0,S\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 blank 0 time_bound 1\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 blank 0 time_bound 1\n1/2:0,0,S\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 blank 0 time_bound 1\n1:0,0,U\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 blank 0 time_bound 1\n1/0:0,0,S\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 blank 0 time_bound 1\n1:3,0,S\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 4 alphabet 1 blank 0 time_bound 1\n1:0,0,S\n"), ParseError);
  EXPECT_THROW(parse("states 1 accepting 0 alphabet 1 blank 0 time_bound 1\n0.5:0,0,S 0.5:0,0,L\n"), ParseError);
  EXPECT_THROW(load_ptm("/nonexistent.ptm"), ParseError);
  EXPECT_NO_THROW(parse("# c\nstates 1 accepting 0 alphabet 1 blank 0 time_bound 1  # h\n\n1/3:0,0,S 2/3:0,0,R\n"));
}

TEST(CompilePtm, deterministic_right_mover) {
  const auto d = load("right_mover.ptm");
  const auto f = compile_ptm(d, 0);
  ASSERT_EQ(f.dimension(0), 5u);
  for (Index from = 0; from < 5; ++from) {
    int ones = 0;
    for (Index to = 0; to < 5; ++to) {
      const Amplitude e = f.entry(from, to, 0);
      EXPECT_TRUE(e == Amplitude(0.0) || e == Amplitude(1.0));
      ones += e == Amplitude(1.0);
    }
    EXPECT_EQ(ones, 1);
  }
  // Head at the right edge self-loops.
  EXPECT_EQ(f.entry(4, 4, 0), Amplitude(1.0));
  EXPECT_EQ(f.entry(2, 3, 0), Amplitude(1.0));
}

TEST(CompilePtm, fair_coin_splits_mass) {
  const auto d = load("fair_coin.ptm");
  const auto f = compile_ptm(d, 1);
  const PTMLayout layout(d, 1);
  const Index start = layout.pack(initial_configuration(d, "1", 1));
  const auto rows = f.column_support(start, 1);
  ASSERT_EQ(rows.size(), 2u);
  for (Index r : rows) EXPECT_EQ(f.entry(start, r, 1), Amplitude(0.5));
  EXPECT_EQ(layout.unpack(rows[0]).state, 1u);
  EXPECT_EQ(layout.unpack(rows[1]).state, 2u);
}

TEST(CompilePtm, stochastic_with_zero_tolerance) {
  for (const char* file : {"fair_coin.ptm", "biased_majority.ptm", "accept_all.ptm", "right_mover.ptm"}) {
    const auto f = compile_ptm(load(file), 1);
    const auto r = verify_stochastic(f, 1, 0.0, f.dimension(1));
    EXPECT_TRUE(r.passed) << file;
    EXPECT_EQ(r.max_deviation, 0.0) << file;
  }
}

TEST(CompilePtm, dimension_cap_names_time_bound) {
  const auto d = load("accept_all.ptm");
  try {
    compile_ptm(d, 8);
    FAIL() << "expected DimensionRefused";
  } catch (const DimensionRefused& e) {
    EXPECT_NE(std::string(e.what()).find("T(8) = 9"), std::string::npos) << e.what();
  }
}

TEST(CompilePtm, only_defined_at_compiled_length) {
  const auto f = compile_ptm(load("fair_coin.ptm"), 1);
  EXPECT_THROW(f.entry(0, 0, 2), ContractError);
}

TEST(InitialConfiguration, input_under_head) {
  const auto d = load("accept_all.ptm");
  const auto c = initial_configuration(d, "011", 4);
  EXPECT_EQ(c.head, 4u);
  EXPECT_EQ(c.tape, (std::vector<unsigned>{2, 2, 2, 2, 0, 1, 1, 2, 2}));
  EXPECT_THROW(initial_configuration(d, "0113", 4), ContractError);
  EXPECT_THROW(initial_configuration(d, "01101", 3), ContractError);
}

TEST(DecideClassical, accept_everything_in_p) {
  const auto r = decide_classical(load("accept_all.ptm"), "0110", DecisionMode::P);
  EXPECT_NEAR(r.probability, 1.0, 1e-12);
  EXPECT_EQ(r.verdict, Verdict::Accept);
  EXPECT_EQ(r.applications, 5u);
}

TEST(DecideClassical, fair_coin_in_pp_rejects) {
  const auto r = decide_classical(load("fair_coin.ptm"), "1", DecisionMode::PP);
  EXPECT_EQ(r.probability, 0.5);
  EXPECT_EQ(r.verdict, Verdict::Reject);
  EXPECT_EQ(decide_classical(load("fair_coin.ptm"), "1", DecisionMode::NP).verdict, Verdict::Accept);
  EXPECT_EQ(decide_classical(load("fair_coin.ptm"), "1", DecisionMode::P).verdict, Verdict::Inconclusive);
}

TEST(DecideClassical, biased_majority_in_bpp) {
  const double exact = oracle::binomial_upper_tail(3, 2, 0.8);
  ASSERT_NEAR(exact, 0.896, 1e-15);
  const auto r = decide_classical(load("biased_majority.ptm"), "1", DecisionMode::BPP);
  EXPECT_NEAR(r.probability, exact, 1e-9);
  EXPECT_EQ(r.verdict, Verdict::Accept);
}

TEST(DecideClassical, nothing_accepts_in_np) {
  const auto r = decide_classical(load("right_mover.ptm"), "", DecisionMode::NP);
  EXPECT_EQ(r.probability, 0.0);
  EXPECT_EQ(r.verdict, Verdict::Reject);
}

TEST(DecideClassical, rejects_quantum_modes) {
  EXPECT_THROW(decide_classical(load("fair_coin.ptm"), "1", DecisionMode::MQ2), ContractError);
}

TEST(MonteCarlo, matches_matrix_power) {
  EXPECT_EQ(monte_carlo_ptm(load("accept_all.ptm"), "0110", 1000, 1), 1.0);
  EXPECT_NEAR(monte_carlo_ptm(load("fair_coin.ptm"), "1", 100000, 2), 0.5, 0.01);
  EXPECT_NEAR(monte_carlo_ptm(load("biased_majority.ptm"), "1", 100000, 3), 0.896, 0.01);
}

TEST(MonteCarlo, deterministic_given_seed) {
  const auto d = load("biased_majority.ptm");
  EXPECT_EQ(monte_carlo_ptm(d, "0", 5000, 42), monte_carlo_ptm(d, "0", 5000, 42));
  EXPECT_THROW(monte_carlo_ptm(d, "0", 0, 42), ContractError);
}

TEST(ClassicalProperties, window_monotonicity) {
  struct Case {
    const char* file;
    const char* input;
  };
  for (const auto& c : {Case{"fair_coin.ptm", "1"}, Case{"biased_majority.ptm", "0"}, Case{"accept_all.ptm", "01"}}) {
    const auto d = load(c.file);
    const double base = decide_classical(d, c.input, DecisionMode::BPP).probability;
    const std::uint64_t t = d.time_bound_at(std::string_view(c.input).size());
    for (std::uint64_t extra = 1; extra <= 2; ++extra) {
      const double wider = decide_classical(d, c.input, DecisionMode::BPP, t + extra).probability;
      EXPECT_NEAR(wider, base, 1e-12) << c.file << " radius " << t + extra;
    }
  }
}
