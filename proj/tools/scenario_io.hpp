// Copyright 2026 The g4vmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "g4vmem/memory.hpp"

// Scenario documents in, report documents out. Keys carry their units;
// complex numbers are [re, im] pairs and matrices nested arrays of them.
namespace g4vmem::io {

using Json = nlohmann::ordered_json;

/// Schema violation; the message starts with the offending field path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ParsedScenario {
  memory::Scenario scenario;
  std::uint64_t seed = 0;
};

/// Strict parse: unknown keys, wrong types and invalid values raise ConfigError.
/// Relative model-file paths resolve against base_dir.
ParsedScenario parse_scenario(const Json& doc, const std::string& base_dir = ".");

/// Environment overrides for solver tolerances (G4VMEM_LANGEVIN_RTOL, G4VMEM_LANGEVIN_ATOL).
void apply_environment(memory::Scenario& s);

/// Frequency-domain integrals and a phenomenological rotation.
void make_fast(memory::Scenario& s);

Json to_json(const Mat2& m);
Json to_json(const qcore::KrausSet& k);
Json to_json(const qcore::ChannelImages& images);

/// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string fingerprint(const Json& doc);

struct RunInfo {
  Json config;
  std::uint64_t seed = 0;
  bool fast = false;
  std::string timestamp;
};

Json report_json(const memory::Report& r, const RunInfo& info);
Json kraus_json(const memory::Report& r, const RunInfo& info);
Json cavity_json(const memory::CavityResult& c, const RunInfo& info);

/// Throws std::runtime_error naming the first non-finite number.
void require_finite(const Json& doc, const std::string& path = "");

extern const char* const kVersion;

}  // namespace g4vmem::io
