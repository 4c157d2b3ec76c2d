// Copyright 2026 The Coordlab Authors
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

#ifndef COORDLAB_CONFIG_H_
#define COORDLAB_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coordlab/exact.h"
#include "coordlab/harness.h"

namespace coordlab {

// Experiment files:
//   {"name": "...",
//    "game": {"builtin": "stochastic2x2", "params": {"fail_p": 0.05}}
//            | {"file": "game.json"},
//    "learner": {"kind": "fp|bayes|bayes_unobs|sfp", "epsilon": 0,
//                "prior": "uniform:1" | [[[..]..]..], "tie_tolerance": 1e-9},
//    "conventions": false, "horizon": 100, "trials": 1000, "seed": 1,
//    "oracle": {"prune_mass": 1e-12, "max_nodes": 1000000},
//    "series": [{"label": "...", "set": {"game.params.fail_p": 0.2}}, ..]}
// Each series entry is the base document with its dotted-path settings
// applied.

struct Override {
  std::string key;  // dotted path or short alias such as "fail_p"
  nlohmann::json value;
};

// Parses "key=value"; the value is read as JSON when it parses, else as a
// plain string.
Override ParseOverride(const std::string& text);

// Maps a short alias onto its dotted path, using the document's builtin game
// to recognize game parameters.
std::string CanonicalKey(const nlohmann::json& doc, const std::string& key);

void SetPath(nlohmann::json& doc, const std::string& dotted,
             const nlohmann::json& value);

struct SeriesConfig {
  std::string label;
  nlohmann::json config;  // fully resolved, no "series"
};

// Expands the series, then applies `seed_override` (environment) and the
// command-line overrides. An override on a key that the series vary keeps
// only the matching series.
std::vector<SeriesConfig> ResolveSeries(
    const nlohmann::json& doc, const std::vector<Override>& overrides,
    std::optional<std::uint64_t> seed_override = std::nullopt);

// Validates a resolved series config; errors name the offending field.
Experiment BuildExperiment(const nlohmann::json& config,
                           const std::string& base_dir = ".");
LearnerConfig ParseLearnerConfig(const nlohmann::json& learner);
ExactOptions ParseExactOptions(const nlohmann::json& config);

// FNV-1a over the canonical dump, as 16 hex digits.
std::string ConfigHash(const nlohmann::json& config);

nlohmann::json LoadJsonFile(const std::string& path);

}  // namespace coordlab

#endif  // COORDLAB_CONFIG_H_
