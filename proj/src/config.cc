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

#include "coordlab/config.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "coordlab/error.h"
#include "coordlab/game_io.h"

namespace coordlab {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {"horizon", "trials", "seed",
                                             "conventions", "name", "game",
                                             "learner", "oracle"};
const std::set<std::string> kLearnerKeys = {"kind", "epsilon", "prior",
                                            "tie_tolerance"};

const json& Require(const json& doc, const std::string& path,
                    const std::string& key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ConfigError(path + key + ": required field is missing");
  }
  return doc.at(key);
}

template <typename T>
T Get(const json& value, const std::string& field) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field + ": wrong type (got " +
                      std::string(value.type_name()) + ")");
  }
}

}  // namespace

Override ParseOverride(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + text + "' is not key=value");
  }
  Override o;
  o.key = text.substr(0, eq);
  std::string raw = text.substr(eq + 1);
  try {
    o.value = json::parse(raw);
  } catch (const json::exception&) {
    o.value = raw;
  }
  return o;
}

std::string CanonicalKey(const json& doc, const std::string& key) {
  if (key.find('.') != std::string::npos) return key;
  if (kTopLevelKeys.contains(key)) return key;
  if (kLearnerKeys.contains(key)) return "learner." + key;
  if (doc.contains("game") && doc["game"].contains("builtin") &&
      doc["game"]["builtin"].is_string()) {
    std::string name = doc["game"]["builtin"];
    for (const auto& info : BuiltinGames()) {
      if (info.name == name && info.defaults.contains(key)) {
        return "game.params." + key;
      }
    }
  }
  throw ConfigError("unknown setting '" + key + "'");
}

void SetPath(json& doc, const std::string& dotted, const json& value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    std::string part = dotted.substr(start, dot - start);
    if (part.empty()) throw ConfigError("malformed setting '" + dotted + "'");
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw ConfigError("setting '" + dotted + "' descends into a non-object");
      }
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::vector<SeriesConfig> ResolveSeries(
    const json& doc, const std::vector<Override>& overrides,
    std::optional<std::uint64_t> seed_override) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  json base = doc;
  base.erase("series");
  std::string name = doc.value("name", std::string("curve"));

  struct Entry {
    std::string label;
    std::vector<std::pair<std::string, json>> sets;
  };
  std::vector<Entry> entries;
  if (doc.contains("series")) {
    const json& series = doc["series"];
    if (!series.is_array() || series.empty()) {
      throw ConfigError("series: expected a non-empty array");
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
      const std::string field = "series[" + std::to_string(s) + "]";
      Entry entry;
      entry.label = Get<std::string>(Require(series[s], field + ".", "label"),
                                     field + ".label");
      if (series[s].contains("set")) {
        for (const auto& [k, v] : series[s]["set"].items()) {
          entry.sets.emplace_back(CanonicalKey(base, k), v);
        }
      }
      entries.push_back(std::move(entry));
    }
  } else {
    entries.push_back({name, {}});
  }

  std::vector<std::pair<std::string, json>> resolved_overrides;
  for (const auto& o : overrides) {
    resolved_overrides.emplace_back(CanonicalKey(base, o.key), o.value);
  }
  for (const auto& [key, value] : resolved_overrides) {
    std::vector<Entry> setting_key, others;
    for (auto& e : entries) {
      bool sets = false;
      // Replacing a parent object also varies the key.
      for (const auto& [k, v] : e.sets) {
        sets |= k == key || key.rfind(k + ".", 0) == 0;
      }
      (sets ? setting_key : others).push_back(std::move(e));
    }
    entries = std::move(others);
    std::vector<Entry> matching;
    for (auto& e : setting_key) {
      for (const auto& [k, v] : e.sets) {
        if (k == key && v == value) {
          matching.push_back(std::move(e));
          break;
        }
      }
    }
    if (!setting_key.empty() && matching.empty()) {
      matching.push_back({key + "=" + value.dump(), {}});
    }
    for (auto& e : matching) entries.push_back(std::move(e));
  }

  std::vector<SeriesConfig> out;
  for (const auto& e : entries) {
    json config = base;
    for (const auto& [k, v] : e.sets) SetPath(config, k, v);
    if (seed_override) config["seed"] = *seed_override;
    for (const auto& [k, v] : resolved_overrides) SetPath(config, k, v);
    out.push_back({e.label, std::move(config)});
  }
  return out;
}

LearnerConfig ParseLearnerConfig(const json& learner) {
  LearnerConfig config;
  if (!learner.is_object()) throw ConfigError("learner: expected an object");
  for (const auto& [k, v] : learner.items()) {
    if (!kLearnerKeys.contains(k)) {
      throw ConfigError("learner." + k + ": unknown field");
    }
  }
  config.kind = ParseLearnerKind(
      Get<std::string>(Require(learner, "learner.", "kind"), "learner.kind"));
  if (learner.contains("epsilon")) {
    config.epsilon = Get<double>(learner["epsilon"], "learner.epsilon");
    if (!(config.epsilon >= 0.0)) {
      throw ConfigError("learner.epsilon: must be >= 0");
    }
  }
  if (learner.contains("tie_tolerance")) {
    config.tie_tolerance =
        Get<double>(learner["tie_tolerance"], "learner.tie_tolerance");
    if (!(config.tie_tolerance >= 0.0)) {
      throw ConfigError("learner.tie_tolerance: must be >= 0");
    }
  }
  if (learner.contains("prior")) {
    const json& prior = learner["prior"];
    if (prior.is_string()) {
      std::string text = prior;
      const std::string tag = "uniform:";
      if (text.rfind(tag, 0) != 0) {
        throw ConfigError("learner.prior: expected \"uniform:<value>\"");
      }
      try {
        std::size_t used = 0;
        config.uniform_prior = std::stod(text.substr(tag.size()), &used);
        if (used != text.size() - tag.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ConfigError("learner.prior: bad uniform value in '" + text + "'");
      }
      if (!(config.uniform_prior > 0.0)) {
        throw ConfigError("learner.prior: uniform value must be positive");
      }
    } else {
      config.prior =
          Get<std::vector<AgentTable>>(prior, "learner.prior");
    }
  }
  return config;
}

ExactOptions ParseExactOptions(const json& config) {
  ExactOptions options;
  if (config.contains("horizon")) {
    options.horizon = Get<int>(config["horizon"], "horizon");
  }
  if (config.contains("oracle")) {
    const json& oracle = config["oracle"];
    if (oracle.contains("prune_mass")) {
      options.prune_mass = Get<double>(oracle["prune_mass"], "oracle.prune_mass");
    }
    if (oracle.contains("max_nodes")) {
      options.max_nodes =
          Get<std::size_t>(oracle["max_nodes"], "oracle.max_nodes");
    }
    if (oracle.contains("quantum")) {
      options.quantum = Get<double>(oracle["quantum"], "oracle.quantum");
    }
  }
  return options;
}

Experiment BuildExperiment(const json& config, const std::string& base_dir) {
  if (!config.is_object()) throw ConfigError("config: expected an object");
  static const std::set<std::string> kKnown = {
      "name", "game", "learner", "conventions", "horizon",
      "trials", "seed", "oracle"};
  for (const auto& [k, v] : config.items()) {
    if (!kKnown.contains(k)) throw ConfigError(k + ": unknown field");
  }
  Experiment experiment;
  const json& game = Require(config, "", "game");
  if (game.contains("builtin")) {
    std::map<std::string, double> params;
    if (game.contains("params")) {
      for (const auto& [k, v] : game["params"].items()) {
        params[k] = Get<double>(v, "game.params." + k);
      }
    }
    const std::string name = Get<std::string>(game["builtin"], "game.builtin");
    try {
      experiment.game =
          std::make_shared<const StateGame>(MakeBuiltinGame(name, params));
    } catch (const Error& e) {
      throw ConfigError("game.params " +
                        game.value("params", json::object()).dump() + ": " +
                        e.what());
    }
  } else if (game.contains("file")) {
    std::filesystem::path path = Get<std::string>(game["file"], "game.file");
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    experiment.game = std::make_shared<const StateGame>(LoadGameFile(path));
  } else {
    throw ConfigError("game: expected 'builtin' or 'file'");
  }
  experiment.learner = ParseLearnerConfig(Require(config, "", "learner"));
  if (config.contains("conventions")) {
    experiment.conventions = Get<bool>(config["conventions"], "conventions");
  }
  if (config.contains("horizon")) {
    experiment.horizon = Get<int>(config["horizon"], "horizon");
  }
  if (experiment.horizon < 1) throw ConfigError("horizon: must be >= 1");
  if (config.contains("trials")) {
    experiment.trials = Get<int>(config["trials"], "trials");
  }
  if (experiment.trials < 1) throw ConfigError("trials: must be >= 1");
  if (config.contains("seed")) {
    experiment.seed = Get<std::uint64_t>(config["seed"], "seed");
  }
  // Surface learner/game mismatches (prior shapes and the like) now.
  try {
    for (int i = 0; i < experiment.game->NumAgents(); ++i) {
      MakeLearner(*experiment.game, i, experiment.learner);
    }
  } catch (const InvalidParameterError& e) {
    throw ConfigError(std::string("learner: ") + e.what());
  }
  experiment.config_hash = ConfigHash(config);
  return experiment;
}

std::string ConfigHash(const json& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : CanonicalDump(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

json LoadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

}  // namespace coordlab
