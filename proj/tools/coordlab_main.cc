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

// coordlab command-line tool: simulate, oracle and games.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coordlab/config.h"
#include "coordlab/conventions.h"
#include "coordlab/error.h"
#include "coordlab/exact.h"
#include "coordlab/game.h"
#include "coordlab/game_io.h"
#include "coordlab/harness.h"
#include "json.hpp"

namespace coordlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kToolVersion[] = "0.1.0";

// Exit-code contract.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitUnsupported = 4;

struct RunFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  bool to_stdout = false;
};

std::optional<std::uint64_t> SeedFromEnvironment() {
  const char* text = std::getenv("COORDLAB_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    unsigned long long seed = std::stoull(text, &used);
    if (text[used] != '\0') throw std::invalid_argument("");
    return seed;
  } catch (const std::exception&) {
    throw ConfigError(std::string("COORDLAB_SEED: not an unsigned integer: '") +
                      text + "'");
  }
}

// File-name friendly version of a series label.
std::string Slug(const std::string& label) {
  std::string out;
  for (char ch : label) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') {
      out += ch;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "curve" : out;
}

std::vector<SeriesConfig> LoadSeries(const RunFlags& flags) {
  if (!fs::exists(flags.config_path)) {
    throw ConfigError("config file not found: '" + flags.config_path + "'");
  }
  json doc = LoadJsonFile(flags.config_path);
  std::vector<Override> overrides;
  for (const auto& text : flags.sets) overrides.push_back(ParseOverride(text));
  return ResolveSeries(doc, overrides, SeedFromEnvironment());
}

fs::path OutputDir(const RunFlags& flags) {
  if (!flags.out_dir.empty()) return flags.out_dir;
  return fs::path("out") / fs::path(flags.config_path).stem();
}

std::string BaseDir(const RunFlags& flags) {
  fs::path parent = fs::path(flags.config_path).parent_path();
  return parent.empty() ? "." : parent.string();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

// Runs one command body and maps library errors onto exit codes.
template <typename Body>
int Guarded(Body body) {
  try {
    return body();
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidGameError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int Simulate(const RunFlags& flags, int workers, const std::string& dump_path) {
  std::vector<SeriesConfig> series = LoadSeries(flags);
  // Validate everything before running anything.
  std::vector<Experiment> experiments;
  for (const auto& s : series) {
    experiments.push_back(BuildExperiment(s.config, BaseDir(flags)));
  }
  fs::path dir = OutputDir(flags);
  if (!flags.to_stdout) fs::create_directories(dir);
  std::unique_ptr<std::ofstream> dump;
  if (!dump_path.empty()) {
    dump = std::make_unique<std::ofstream>(dump_path, std::ios::binary);
    if (!*dump) throw ConfigError("cannot write '" + dump_path + "'");
  }

  json manifest = {{"tool_version", kToolVersion},
                   {"command", "simulate"},
                   {"config_path", flags.config_path},
                   {"series", json::array()}};
  if (!dump_path.empty()) manifest["trials_dump"] = dump_path;
  for (std::size_t k = 0; k < series.size(); ++k) {
    RunOptions options;
    options.workers = workers;
    if (dump) {
      options.trial_sink = [&](const TrialRecord& trial) {
        json line = TrialToJson(trial);
        line["series"] = series[k].label;
        *dump << line.dump() << '\n';
      };
    }
    CurveResult curve = RunExperiment(experiments[k], options);
    std::ostringstream csv;
    WriteCurveCsv(csv, curve);
    json entry = {{"label", series[k].label},
                  {"config", series[k].config},
                  {"config_hash", curve.config_hash},
                  {"seed", curve.seed},
                  {"trials", curve.trials}};
    if (flags.to_stdout) {
      if (series.size() > 1) std::cout << "# " << series[k].label << "\n";
      std::cout << csv.str();
    } else {
      fs::path path = dir / (Slug(series[k].label) + ".csv");
      WriteText(path, csv.str());
      entry["output"] = path.string();
      std::cerr << "wrote " << path.string() << "\n";
    }
    manifest["series"].push_back(std::move(entry));
  }
  if (!flags.to_stdout) {
    fs::path path = dir / "manifest.json";
    WriteText(path, CanonicalDump(manifest));
  }
  return kExitOk;
}

int Oracle(const RunFlags& flags, std::optional<double> prune_mass,
           std::optional<std::size_t> max_nodes) {
  std::vector<SeriesConfig> series = LoadSeries(flags);
  std::vector<Experiment> experiments;
  std::vector<ExactOptions> options;
  for (const auto& s : series) {
    experiments.push_back(BuildExperiment(s.config, BaseDir(flags)));
    ExactOptions o = ParseExactOptions(s.config);
    if (prune_mass) o.prune_mass = *prune_mass;
    if (max_nodes) o.max_nodes = *max_nodes;
    options.push_back(o);
  }
  fs::path dir = OutputDir(flags);
  if (!flags.to_stdout) fs::create_directories(dir);
  json manifest = {{"tool_version", kToolVersion},
                   {"command", "oracle"},
                   {"config_path", flags.config_path},
                   {"series", json::array()}};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Experiment& e = experiments[k];
    if (!e.game->IsDense()) {
      throw UnsupportedError(
          "series '" + series[k].label + "': game has " +
          std::to_string(e.game->NumJointActions()) +
          " joint actions; the exact oracle needs a dense table (at most " +
          std::to_string(kDenseJointActionLimit) + ")");
    }
    ExactCurve curve;
    try {
      curve = ExactFailureCurve(e.game, e.learner, e.conventions, options[k]);
    } catch (const FrontierOverflowError& overflow) {
      std::cerr << "series '" << series[k].label << "': frontier overflow after "
                << overflow.Partial().error.size() << " rounds\n";
      throw;
    }
    std::ostringstream csv;
    WriteExactCsv(csv, curve);
    double max_pruned = 0.0;
    for (double p : curve.pruned_mass) max_pruned = std::max(max_pruned, p);
    json entry = {{"label", series[k].label},
                  {"config", series[k].config},
                  {"config_hash", e.config_hash},
                  {"prune_mass", options[k].prune_mass},
                  {"max_pruned_mass", max_pruned}};
    if (flags.to_stdout) {
      if (series.size() > 1) std::cout << "# " << series[k].label << "\n";
      std::cout << csv.str();
    } else {
      fs::path path = dir / (Slug(series[k].label) + ".exact.csv");
      WriteText(path, csv.str());
      entry["output"] = path.string();
      std::cerr << "wrote " << path.string() << "\n";
    }
    manifest["series"].push_back(std::move(entry));
  }
  if (!flags.to_stdout) {
    WriteText(dir / "oracle_manifest.json", CanonicalDump(manifest));
  }
  return kExitOk;
}

// "--name value" or "--name=value" pairs left over by the parser.
std::map<std::string, double> ParseGameParams(
    const std::vector<std::string>& extras) {
  std::map<std::string, double> params;
  for (std::size_t k = 0; k < extras.size(); ++k) {
    std::string key = extras[k];
    if (key.rfind("--", 0) != 0) {
      throw ConfigError("unexpected argument '" + key + "'");
    }
    key = key.substr(2);
    std::string value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (k + 1 < extras.size()) {
      value = extras[++k];
    } else {
      throw ConfigError("parameter --" + key + " needs a value");
    }
    try {
      std::size_t used = 0;
      params[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("parameter --" + key + ": not a number: '" + value + "'");
    }
  }
  return params;
}

std::string ActionLabel(const StateGame& game, int agent, Action a) {
  if (game.NumActions(agent) == 2) return a == 0 ? "l" : "r";
  return std::to_string(a);
}

std::string JointLabel(const StateGame& game, const JointAction& joint) {
  std::string out = "<";
  for (int i = 0; i < joint.size(); ++i) {
    if (i > 0) out += ",";
    out += ActionLabel(game, i, joint[i]);
  }
  return out + ">";
}

int GamesList() {
  for (const auto& info : BuiltinGames()) {
    std::cout << info.name << "\n  " << info.summary << "\n  defaults:";
    for (const auto& [key, value] : info.defaults) {
      std::cout << " --" << key << " " << FormatValue(value);
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int GamesShow(const StateGame& game, const std::string& title) {
  std::cout << title << "\n";
  std::cout << "agents: " << game.NumAgents() << "\nactions:";
  for (int n : game.ActionCounts()) std::cout << " " << n;
  std::cout << "\noutcomes: " << game.NumOutcomes()
            << "\njoint actions: " << game.NumJointActions() << "\n";
  if (game.IsDense()) {
    std::cout << "strategic form (expected utility):\n";
    PayoffTensor form = ToStrategicForm(game);
    for (std::int64_t k = 0; k < game.NumJointActions(); ++k) {
      std::cout << "  " << JointLabel(game, game.JointFromIndex(k)) << "  "
                << FormatValue(form.values[k]) << "\n";
    }
  } else {
    std::cout << "strategic form: not materialized (closed-form game)\n";
  }
  std::vector<JointAction> ojas = OptimalJointActions(game);
  std::cout << "optimal joint actions:";
  for (const auto& oja : ojas) std::cout << " " << JointLabel(game, oja);
  std::cout << "\n";
  if (game.IsDense() && ojas.size() > 1) {
    for (std::size_t x = 0; x < ojas.size(); ++x) {
      for (std::size_t y = x + 1; y < ojas.size(); ++y) {
        std::vector<JointAction> pair = {ojas[x], ojas[y]};
        if (DetectIndistinguishable(game, pair)) {
          std::cout << "warning: " << JointLabel(game, ojas[x]) << " and "
                    << JointLabel(game, ojas[y])
                    << " share an outcome distribution; conventions cannot "
                       "separate them\n";
        }
      }
    }
  }
  return kExitOk;
}

}  // namespace
}  // namespace coordlab

int main(int argc, char** argv) {
  using namespace coordlab;
  CLI::App app{"Learning coordinated equilibria in repeated state games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RunFlags sim_flags;
  int workers = 0;
  std::string dump_path;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo curves");
  simulate->add_option("config", sim_flags.config_path, "experiment JSON")
      ->required();
  simulate->add_option("--set", sim_flags.sets, "override key=value")
      ->allow_extra_args(false);
  simulate->add_option("--out", sim_flags.out_dir,
                       "output directory (default out/<config stem>)");
  simulate->add_flag("--stdout", sim_flags.to_stdout, "write CSV to stdout");
  simulate->add_option("--workers", workers, "trial workers (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--dump-trials", dump_path,
                       "write every trial record as JSON lines");

  RunFlags oracle_flags;
  std::optional<double> prune_mass;
  std::optional<std::size_t> max_nodes;
  CLI::App* oracle = app.add_subcommand("oracle", "exact failure curves");
  oracle->add_option("config", oracle_flags.config_path, "experiment JSON")
      ->required();
  oracle->add_option("--set", oracle_flags.sets, "override key=value")
      ->allow_extra_args(false);
  oracle->add_option("--out", oracle_flags.out_dir, "output directory");
  oracle->add_flag("--stdout", oracle_flags.to_stdout, "write CSV to stdout");
  oracle->add_option("--prune-mass", prune_mass, "drop lighter branches");
  oracle->add_option("--max-nodes", max_nodes, "frontier size limit");

  CLI::App* games = app.add_subcommand("games", "builtin game constructors");
  games->require_subcommand(1);
  games->add_subcommand("list", "list builtin games");
  std::string show_name;
  std::string show_file;
  CLI::App* show = games->add_subcommand("show", "strategic form and OJAs");
  show->add_option("name", show_name, "builtin game");
  show->add_option("--file", show_file, "game file instead of a builtin");
  show->allow_extras();
  std::string export_name;
  std::string export_path;
  CLI::App* exporter = games->add_subcommand("export", "write a game file");
  exporter->add_option("name", export_name, "builtin game")->required();
  exporter->add_option("path", export_path, "output file")->required();
  exporter->allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*simulate) {
    return Guarded([&] { return Simulate(sim_flags, workers, dump_path); });
  }
  if (*oracle) {
    return Guarded([&] { return Oracle(oracle_flags, prune_mass, max_nodes); });
  }
  if (games->got_subcommand("list")) return GamesList();
  if (*show) {
    return Guarded([&] {
      auto params = ParseGameParams(show->remaining());
      if (!show_file.empty()) {
        if (!show_name.empty() || !params.empty()) {
          throw ConfigError("--file takes no builtin name or parameters");
        }
        return GamesShow(LoadGameFile(show_file), show_file);
      }
      if (show_name.empty()) throw ConfigError("games show needs a name or --file");
      return GamesShow(MakeBuiltinGame(show_name, params), show_name);
    });
  }
  if (*exporter) {
    return Guarded([&] {
      auto params = ParseGameParams(exporter->remaining());
      SaveGameFile(MakeBuiltinGame(export_name, params), export_path);
      std::cerr << "wrote " << export_path << "\n";
      return kExitOk;
    });
  }
  return kExitFailure;
}
