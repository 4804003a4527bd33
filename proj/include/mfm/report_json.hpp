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

// JSON forms of engine and verifier reports. Reals are rounded to 12
// significant digits so that reruns diff cleanly.

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"
#include "mfm/engine.hpp"
#include "mfm/verifier.hpp"

namespace mfm {

inline double round12(double v) {
  if (!std::isfinite(v) || v == 0) return v == 0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0 ? 0.0 : r;  // no "-0"
}

inline nlohmann::ordered_json to_json(const DecisionReport& r, bool include_timing = true) {
  nlohmann::ordered_json j;
  j["probability"] = round12(r.probability);
  j["mode"] = to_string(r.mode);
  j["verdict"] = to_string(r.verdict);
  j["applications"] = r.applications;
  if (include_timing) j["elapsed_ms"] = round12(r.elapsed.count());
  return j;
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(r.checked_kind);
  j["method"] = to_string(r.method);
  j["max_deviation"] = round12(r.max_deviation);
  j["samples"] = r.samples;
  j["passed"] = r.passed;
  if (r.witness) {
    j["witness"] = {r.witness->first, r.witness->second};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace mfm
