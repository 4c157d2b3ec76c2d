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

#ifndef COORDLAB_GAME_IO_H_
#define COORDLAB_GAME_IO_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coordlab/game.h"

namespace coordlab {

// Game file format:
//   {"agents": n, "actions": [..], "outcomes": m,
//    "transitions": [[..], ..], "utilities": [..],
//    "rational_utilities": ["p/q", ..]}      (optional)
// Rows are in lexicographic joint-action order.
nlohmann::json GameToJson(const StateGame& game);
StateGame GameFromJson(const nlohmann::json& doc);

// Two-space indented dump with sorted keys and a trailing newline; equal
// documents always serialize to identical bytes.
std::string CanonicalDump(const nlohmann::json& doc);

StateGame LoadGameFile(const std::string& path);
void SaveGameFile(const StateGame& game, const std::string& path);

struct BuiltinGameInfo {
  std::string name;
  std::string summary;
  std::map<std::string, double> defaults;
};

const std::vector<BuiltinGameInfo>& BuiltinGames();

// Unlisted parameters fall back to their defaults; unknown names are a
// ConfigError.
StateGame MakeBuiltinGame(std::string_view name,
                          const std::map<std::string, double>& params = {});

}  // namespace coordlab

#endif  // COORDLAB_GAME_IO_H_
