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

// Experiment runner: builds machines, runs decisions and verifications, and
// prints machine-readable results.
//
// Exit codes: 0 success or verification passed, 1 verification failed,
// 2 usage or input error, 3 resource refusal.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mfm/mfm.hpp"
#include "mfm/report_json.hpp"

namespace {

using nlohmann::ordered_json;
using namespace mfm;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kRefused = 3 };

struct Options {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
  bool timing = false;

  // dj
  unsigned n = 0;
  std::string builtin;
  std::string oracle_file;

  // shor
  std::uint64_t N = 0;
  std::uint64_t x = 0;
  unsigned bit = 0;
  std::optional<std::uint64_t> q;

  // classical
  std::string ptm;
  std::string input;
  std::string mode = "BPP";
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> radius;

  // verify
  std::string machine;
  std::string broken_demo;
  bool exact = false;
  std::optional<std::uint64_t> sampled;
  std::optional<double> tol;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to --out, else $MFM_OUTPUT_DIR/<command>.<ext>, else stdout.
void emit(const Options& o, const std::string& command, const std::string& text) {
  std::string path = o.out;
  if (path.empty()) {
    if (const char* dir = std::getenv("MFM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      path = (std::filesystem::path(dir) / (command + "." + o.format)).string();
    }
  }
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

void emit_json(const Options& o, const std::string& command, const ordered_json& j) {
  if (o.format != "json") throw UsageError("--format csv is only available for the shor histogram");
  emit(o, command, j.dump(2) + "\n");
}

dj::BooleanOracle dj_oracle(const Options& o) {
  if (!o.oracle_file.empty() && !o.builtin.empty()) {
    throw UsageError("give either --builtin or --oracle-file, not both");
  }
  if (!o.oracle_file.empty()) {
    auto f = dj::load_truth_table(o.oracle_file);
    if (o.n != 0 && o.n != f.arity) {
      throw UsageError("--n " + std::to_string(o.n) + " disagrees with the file's arity " +
                       std::to_string(f.arity));
    }
    return f;
  }
  if (o.n == 0) throw UsageError("dj needs --n with --builtin");
  return dj::builtin_oracle(o.builtin.empty() ? "parity" : o.builtin, o.n);
}

int run_dj(const Options& o) {
  const auto f = dj_oracle(o);
  const auto report = decide(dj::build_dj_machine(f), "");
  const auto cls = f.arity <= dj::kMaxTableArity ? dj::classify_oracle(f) : f.declared;
  ordered_json j;
  j["n"] = f.arity;
  j["oracle"] = f.name;
  j["oracle_class"] = dj::to_string(cls);
  j["probability"] = round12(report.probability);
  j["closed_form_probability"] = round12(dj::dj_closed_form_probability(f));
  j["verdict"] = to_string(report.verdict);
  j["mode"] = to_string(report.mode);
  j["applications"] = report.applications;
  if (o.timing) j["elapsed_ms"] = round12(report.elapsed.count());
  emit_json(o, "dj", j);
  return kOk;
}

int run_shor(const Options& o) {
  const auto inst = shor::make_instance(o.N, o.x, o.bit, o.q);
  const auto run = shor::run_shor(inst);

  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "a_prime,probability\n";
    for (const auto& [a, p] : run.histogram) {
      if (p > 1e-12) csv << a << ',' << ordered_json(round12(p)).dump() << '\n';
    }
    emit(o, "shor", csv.str());
    return kOk;
  }

  ordered_json j;
  j["N"] = inst.N;
  j["x"] = inst.x;
  j["q"] = inst.q;
  j["bit"] = inst.target_bit;
  j["acceptance_probability"] = round12(run.evaluation.probability);
  j["verdict"] = to_string(verdict_for(run.evaluation.probability, DecisionMode::MQ2));
  j["period_found"] = run.period ? ordered_json(*run.period) : ordered_json(nullptr);
  j["factors"] = run.factors ? ordered_json::array({run.factors->first, run.factors->second})
                             : ordered_json(nullptr);
  auto hist = ordered_json::array();
  for (const auto& [a, p] : run.histogram) {
    if (p > 1e-12) hist.push_back({a, round12(p)});
  }
  j["a_prime_histogram"] = hist;
  emit_json(o, "shor", j);
  return kOk;
}

DecisionMode classical_mode(const std::string& s) {
  const auto m = parse_decision_mode(s);
  if (!m || is_quantum_mode(*m)) throw UsageError("--mode must be one of P, NP, PP, BPP");
  return *m;
}

int run_classical(const Options& o) {
  const auto d = classical::load_ptm(o.ptm);
  const auto mode = classical_mode(o.mode);
  const auto report = classical::decide_classical(d, o.input, mode, o.radius);
  ordered_json j;
  j["ptm"] = std::filesystem::path(o.ptm).filename().string();
  j["input"] = o.input;
  const auto body = to_json(report, o.timing);
  for (const auto& [k, v] : body.items()) j[k] = v;
  if (o.trials > 0) {
    j["monte_carlo"] = {{"trials", o.trials},
                        {"seed", o.seed},
                        {"frequency", round12(classical::monte_carlo_ptm(d, o.input, o.trials, o.seed))}};
  }
  emit_json(o, "classical", j);
  return kOk;
}

MatrixFamily broken_demo(const std::string& name) {
  MatrixFamily f;
  f.name = name;
  if (name == "short-column") {
    // diag(1, 1/2, 1/2, ...)
    f.dimension = [](SizeParam) { return Index{64}; };
    f.entry = [](Index i, Index j, SizeParam) -> Amplitude {
      return i != j ? 0.0 : (i == 0 ? 1.0 : 0.5);
    };
    return f;
  }
  if (name == "zero-row") {
    f.dimension = [](SizeParam) { return Index{8}; };
    f.entry = [](Index i, Index j, SizeParam) -> Amplitude { return (i == j && j != 2) ? 1.0 : 0.0; };
    return f;
  }
  throw UsageError("unknown --broken-demo '" + name + "' (short-column, zero-row)");
}

int run_verify(const Options& o) {
  MatrixFamily family;
  SizeParam n = 0;
  if (!o.broken_demo.empty()) {
    if (!o.machine.empty()) throw UsageError("give either --machine or --broken-demo");
    family = broken_demo(o.broken_demo);
  } else if (o.machine == "dj") {
    const auto f = dj_oracle(o);
    family = dj::dj_family(f);
    n = f.arity;
  } else if (o.machine == "shor") {
    const auto inst = shor::make_instance(o.N, o.x, o.bit, o.q);
    family = shor::shor_family(inst);
  } else if (o.machine == "ptm") {
    if (o.ptm.empty()) throw UsageError("--machine ptm needs --ptm FILE");
    n = o.input.size();
    family = classical::compile_ptm(classical::load_ptm(o.ptm), n, o.radius);
  } else {
    throw UsageError("--machine must be dj, shor or ptm (or use --broken-demo)");
  }

  VerificationReport report;
  if (family.kind == FamilyKind::Stochastic) {
    report = verify_stochastic(family, n, o.tol.value_or(kExactTolerance), o.sampled.value_or(256), o.seed);
  } else {
    const bool exact = o.exact || (!o.sampled && family.dimension(n) <= kExactVerifyCap);
    if (exact && o.sampled) throw UsageError("give either --exact or --sampled");
    report = exact ? verify_unitary_exact(family, n, o.tol.value_or(kExactTolerance))
                   : verify_unitary_sampled(family, n, o.sampled.value_or(100),
                                            o.tol.value_or(kSampledTolerance), o.seed);
  }
  ordered_json j;
  j["family"] = family.name;
  const auto body = to_json(report);
  for (const auto& [k, v] : body.items()) j[k] = v;
  j["tolerance"] = report.tolerance;
  emit_json(o, "verify", j);
  return report.passed ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-family machine laboratory"};
  app.set_config("--config", "", "Read options from a TOML file; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "Output file (default: $MFM_OUTPUT_DIR/<command>.<format>, else stdout)");
  app.add_option("--seed", o.seed, "Seed for sampled checks and Monte-Carlo runs");
  app.add_flag("--timing", o.timing, "Include elapsed_ms (breaks byte-identical reruns)");

  auto* dj_cmd = app.add_subcommand("dj", "Deutsch-Jozsa machine");
  dj_cmd->add_option("--n", o.n, "Number of input bits");
  dj_cmd->add_option("--builtin", o.builtin, "constant0, constant1, parity, lowbit, neither-demo");
  dj_cmd->add_option("--oracle-file", o.oracle_file, "Truth table file");

  auto* shor_cmd = app.add_subcommand("shor", "Period-finding machine");
  shor_cmd->add_option("--N", o.N, "Number to factor")->required();
  shor_cmd->add_option("--x", o.x, "Base coprime to N")->required();
  shor_cmd->add_option("--bit", o.bit, "Bit of the period the language asks about");
  shor_cmd->add_option("--q", o.q, "Fourier dimension (power of two)");

  auto* cl_cmd = app.add_subcommand("classical", "Probabilistic Turing machine decision");
  cl_cmd->add_option("--ptm", o.ptm, "PTM description file")->required();
  cl_cmd->add_option("--input", o.input, "Input string of digit symbols");
  cl_cmd->add_option("--mode", o.mode, "P, NP, PP or BPP");
  cl_cmd->add_option("--trials", o.trials, "Monte-Carlo cross-check trials (0 = off)");
  cl_cmd->add_option("--radius", o.radius, "Tape window radius if larger than T(n)");

  auto* v_cmd = app.add_subcommand("verify", "Unitarity or stochasticity check");
  v_cmd->add_option("--machine", o.machine, "dj, shor or ptm");
  v_cmd->add_option("--broken-demo", o.broken_demo, "short-column or zero-row");
  v_cmd->add_option("--n", o.n, "dj: number of input bits");
  v_cmd->add_option("--builtin", o.builtin, "dj: builtin oracle (default parity)");
  v_cmd->add_option("--oracle-file", o.oracle_file, "dj: truth table file");
  v_cmd->add_option("--N", o.N, "shor: number to factor");
  v_cmd->add_option("--x", o.x, "shor: base");
  v_cmd->add_option("--q", o.q, "shor: Fourier dimension");
  v_cmd->add_option("--ptm", o.ptm, "ptm: description file");
  v_cmd->add_option("--input", o.input, "ptm: input whose length fixes n");
  v_cmd->add_option("--radius", o.radius, "ptm: tape window radius");
  v_cmd->add_flag("--exact", o.exact, "Dense exact check");
  v_cmd->add_option("--sampled", o.sampled, "Number of sampled columns");
  v_cmd->add_option("--tol", o.tol, "Tolerance override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (dj_cmd->parsed()) return run_dj(o);
    if (shor_cmd->parsed()) return run_shor(o);
    if (cl_cmd->parsed()) return run_classical(o);
    if (v_cmd->parsed()) return run_verify(o);
  } catch (const DimensionRefused& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
