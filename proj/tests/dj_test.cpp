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

#include <algorithm>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

#include "mfm/dj.hpp"
#include "mfm/engine.hpp"
#include "mfm/verifier.hpp"
#include "oracles.hpp"

using namespace mfm;
using namespace mfm::dj;

namespace {

std::vector<bool> random_table(std::mt19937_64& rng, unsigned n) {
  std::vector<bool> t(std::size_t{1} << n);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = (rng() & 1) != 0;
  return t;
}

std::vector<bool> random_balanced(std::mt19937_64& rng, unsigned n) {
  std::vector<bool> t(std::size_t{1} << n);
  std::fill(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), true);
  std::shuffle(t.begin(), t.end(), rng);
  return t;
}

std::vector<bool> complement(std::vector<bool> t) {
  t.flip();
  return t;
}

BooleanOracle parse(const std::string& text) {
  std::istringstream in(text);
  return parse_truth_table(in);
}

}  // namespace

TEST(DjFamily, entries) {
  const auto zero = dj_family(builtin_oracle("constant0", 2));
  EXPECT_DOUBLE_EQ(zero.entry(0, 0, 2).real(), 0.5);
  EXPECT_DOUBLE_EQ(zero.entry(2, 3, 2).real(), -0.5);  // 10 . 11 = 1
  EXPECT_EQ(zero.entry(2, 3, 2).imag(), 0.0);
  const auto one = dj_family(builtin_oracle("constant1", 2));
  for (Index x = 0; x < 4; ++x) {
    for (Index y = 0; y < 4; ++y) EXPECT_EQ(one.entry(x, y, 2), -zero.entry(x, y, 2));
  }
  EXPECT_EQ(zero.dimension(2), 4u);
}

TEST(DjMachine, shape) {
  const auto spec = build_dj_machine(builtin_oracle("parity", 3));
  EXPECT_EQ(spec.mode, DecisionMode::MQ2);
  EXPECT_EQ(spec.applications(3), 2u);
  EXPECT_EQ(spec.size_of("anything"), 3u);
  const auto init = spec.initial_state("");
  ASSERT_EQ(init.support_size(), 1u);
  EXPECT_EQ(init.at(0), Amplitude(1.0));
  EXPECT_TRUE(spec.accepts("", 0));
  for (Index c = 1; c < 8; ++c) EXPECT_FALSE(spec.accepts("", c));
}

TEST(DjMachine, arity_cap) {
  BooleanOracle big{25, [](Index) { return false; }, OracleClass::Unknown, "big"};
  EXPECT_THROW(build_dj_machine(big), DimensionRefused);
}

TEST(DjMachine, declared_class_is_checked) {
  auto f = builtin_oracle("parity", 3);
  f.declared = OracleClass::Constant;
  EXPECT_THROW(build_dj_machine(f), ContractError);
}

TEST(ClosedForm, examples) {
  for (unsigned n = 1; n <= 6; ++n) {
    EXPECT_EQ(dj_closed_form_probability(builtin_oracle("constant0", n)), 1.0);
    EXPECT_EQ(dj_closed_form_probability(builtin_oracle("constant1", n)), 1.0);
    EXPECT_EQ(dj_closed_form_probability(builtin_oracle("parity", n)), 0.0);
  }
  EXPECT_EQ(dj_closed_form_probability(truth_table_oracle({false, false, false, true})), 0.25);
}

TEST(Classify, examples) {
  EXPECT_EQ(classify_oracle(builtin_oracle("constant1", 3)), OracleClass::Constant);
  EXPECT_EQ(classify_oracle(builtin_oracle("lowbit", 3)), OracleClass::Balanced);
  EXPECT_EQ(classify_oracle(truth_table_oracle({false, false, false, true})), OracleClass::Neither);
  EXPECT_EQ(classify_oracle(builtin_oracle("neither-demo", 4)), OracleClass::Neither);
  EXPECT_THROW(classify_oracle(builtin_oracle("parity", 17)), ContractError);
}

TEST(Builtins, menu) {
  EXPECT_THROW(builtin_oracle("majority", 3), ContractError);
  EXPECT_THROW(builtin_oracle("neither-demo", 1), ContractError);
  EXPECT_THROW(builtin_oracle("parity", 0), ContractError);
  EXPECT_EQ(builtin_oracle("parity", 5).declared, OracleClass::Balanced);
}

TEST(TruthTable, parse) {
  const auto f = parse("3\n01101001\n");
  EXPECT_EQ(f.arity, 3u);
  EXPECT_EQ(classify_oracle(f), OracleClass::Balanced);
  EXPECT_TRUE(f.evaluate(1));
  EXPECT_FALSE(f.evaluate(3));
  const auto g = load_truth_table(std::string(MFM_DATA_DIR) + "/oracles/neither2.txt");
  EXPECT_EQ(classify_oracle(g), OracleClass::Neither);
}

TEST(TruthTable, malformed) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("x\n01\n"), ParseError);
  EXPECT_THROW(parse("2\n010\n"), ParseError);
  EXPECT_THROW(parse("2\n01a1\n"), ParseError);
  EXPECT_THROW(parse("17\n0\n"), ParseError);
  EXPECT_THROW(parse("1\n01\nextra\n"), ParseError);
  EXPECT_THROW(load_truth_table(std::string(MFM_DATA_DIR) + "/oracles/bad.txt"), ParseError);
  EXPECT_THROW(load_truth_table("/nonexistent/oracle.txt"), ParseError);
}

TEST(DjProperties, engine_matches_closed_form) {
  std::mt19937_64 rng(53);
  for (unsigned n = 1; n <= 10; ++n) {
    for (int k = 0; k < 3; ++k) {
      const auto table = random_table(rng, n);
      const auto f = truth_table_oracle(table);
      const double engine = acceptance_probability(build_dj_machine(f), "");
      EXPECT_NEAR(engine, dj_closed_form_probability(f), 1e-9) << "n=" << n;
      EXPECT_NEAR(engine, oracle::dj_enumerated_probability(table), 1e-9) << "n=" << n;
    }
  }
}

TEST(DjProperties, promise_separation) {
  std::mt19937_64 rng(59);
  for (unsigned n = 1; n <= 8; ++n) {
    EXPECT_NEAR(acceptance_probability(build_dj_machine(builtin_oracle("constant1", n)), ""), 1.0, 1e-9);
    auto balanced = truth_table_oracle(random_balanced(rng, n));
    balanced.declared = OracleClass::Balanced;
    EXPECT_LE(acceptance_probability(build_dj_machine(balanced), ""), 1e-9);
  }
}

TEST(DjProperties, global_phase_irrelevance) {
  std::mt19937_64 rng(61);
  for (unsigned n = 1; n <= 8; ++n) {
    const auto table = random_table(rng, n);
    const double p = acceptance_probability(build_dj_machine(truth_table_oracle(table)), "");
    const double q = acceptance_probability(build_dj_machine(truth_table_oracle(complement(table))), "");
    EXPECT_NEAR(p, q, 1e-12);
  }
}

TEST(DjProperties, unitary_up_to_n6) {
  std::mt19937_64 rng(67);
  for (unsigned n = 1; n <= 6; ++n) {
    const auto r = verify_unitary_exact(dj_family(truth_table_oracle(random_table(rng, n))), n, 1e-10);
    EXPECT_TRUE(r.passed) << "n=" << n << " dev " << r.max_deviation;
  }
}
