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

#include "coordlab/game_io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "coordlab/error.h"

namespace coordlab {

using nlohmann::json;

json GameToJson(const StateGame& game) {
  if (!game.IsDense()) {
    throw ResourceLimitError("cannot export a game with " +
                             std::to_string(game.NumJointActions()) +
                             " joint actions");
  }
  json doc;
  doc["agents"] = game.NumAgents();
  doc["actions"] = game.ActionCounts();
  doc["outcomes"] = game.NumOutcomes();
  json rows = json::array();
  for (std::int64_t idx = 0; idx < game.NumJointActions(); ++idx) {
    auto row = game.TransitionRow(idx);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["transitions"] = std::move(rows);
  doc["utilities"] = game.Utilities();
  if (game.ExactUtilities()) {
    json exact = json::array();
    for (const auto& r : *game.ExactUtilities()) exact.push_back(ToString(r));
    doc["rational_utilities"] = std::move(exact);
  }
  return doc;
}

StateGame GameFromJson(const json& doc) {
  auto field = [&](const char* key) -> const json& {
    if (!doc.is_object() || !doc.contains(key)) {
      throw ConfigError(std::string("game: missing field '") + key + "'");
    }
    return doc.at(key);
  };
  try {
    int agents = field("agents").get<int>();
    auto actions = field("actions").get<std::vector<int>>();
    int outcomes = field("outcomes").get<int>();
    auto transitions =
        field("transitions").get<std::vector<std::vector<double>>>();
    auto utilities = field("utilities").get<std::vector<double>>();
    if (static_cast<int>(actions.size()) != agents) {
      throw ConfigError("game: 'actions' must list one count per agent");
    }
    std::optional<std::vector<Rational>> exact;
    if (doc.contains("rational_utilities")) {
      exact.emplace();
      for (const auto& item : doc.at("rational_utilities")) {
        exact->push_back(ParseRational(item.get<std::string>()));
      }
    }
    return StateGame::FromTable(std::move(actions), outcomes,
                                std::move(transitions), std::move(utilities),
                                std::move(exact));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("game: ") + e.what());
  } catch (const InvalidGameError& e) {
    throw ConfigError(std::string("game: ") + e.what());
  } catch (const InvalidParameterError& e) {
    throw ConfigError(std::string("game: ") + e.what());
  }
}

std::string CanonicalDump(const json& doc) { return doc.dump(2) + "\n"; }

StateGame LoadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open game file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("game file '" + path + "': " + e.what());
  }
  return GameFromJson(doc);
}

void SaveGameFile(const StateGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << CanonicalDump(GameToJson(game));
}

const std::vector<BuiltinGameInfo>& BuiltinGames() {
  static const std::vector<BuiltinGameInfo> kGames = {
      {"pure_coordination",
       "n agents with n moves; c if all agree, d otherwise",
       {{"n", 2}, {"c", 1}, {"d", 0}}},
      {"asymmetric2x2",
       "deterministic 2x2; v_coord when matched, 1 for <l,r>, 0 for <r,l>",
       {{"v_coord", 4}}},
      {"stochastic2x2",
       "two agents move left/right, each move fails w.p. fail_p",
       {{"fail_p", 0.1}}},
      {"convention3x3",
       "3 agents x 3 moves, three good and three bad outcome states",
       {{"slip", 0.1}, {"majority_good", 0.15}, {"uniform_noise", 0}}},
      {"twin_oja",
       "2 agents x 3 actions; two optimal joint actions are outcome-identical",
       {{"separation", 0.9}}},
  };
  return kGames;
}

StateGame MakeBuiltinGame(std::string_view name,
                          const std::map<std::string, double>& params) {
  const BuiltinGameInfo* info = nullptr;
  for (const auto& g : BuiltinGames()) {
    if (g.name == name) info = &g;
  }
  if (info == nullptr) {
    throw ConfigError("unknown builtin game '" + std::string(name) + "'");
  }
  auto values = info->defaults;
  for (const auto& [key, value] : params) {
    if (!values.contains(key)) {
      throw ConfigError("game '" + info->name + "' has no parameter '" + key +
                        "'");
    }
    values[key] = value;
  }
  try {
    if (name == "pure_coordination") {
      double n = values["n"];
      if (n != std::floor(n)) {
        throw ConfigError("pure_coordination: n must be an integer");
      }
      return MakePureCoordination(static_cast<int>(n), values["c"],
                                  values["d"]);
    }
    if (name == "asymmetric2x2") return MakeAsymmetric2x2(values["v_coord"]);
    if (name == "stochastic2x2") return MakeStochastic2x2(values["fail_p"]);
    if (name == "convention3x3") {
      return MakeConvention3x3({values["slip"], values["majority_good"],
                                values["uniform_noise"]})
          .game;
    }
    return MakeTwinOjaGame(values["separation"]);
  } catch (const InvalidParameterError& e) {
    throw ConfigError(info->name + ": " + e.what());
  }
}

}  // namespace coordlab
