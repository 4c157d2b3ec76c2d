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

#ifndef COORDLAB_HARNESS_H_
#define COORDLAB_HARNESS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "coordlab/game.h"
#include "coordlab/learners.h"
#include "coordlab/random.h"
#include "coordlab/team.h"

namespace coordlab {

struct Experiment {
  std::shared_ptr<const StateGame> game;
  LearnerConfig learner;
  bool conventions = false;
  int horizon = 50;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string config_hash;
};

struct RoundRecord {
  int round = 0;  // 1-based
  JointAction joint;  // original action indices
  int outcome = 0;
  MixedProfile choices;  // original action indices
  // Analytic probability that `choices` produce a non-optimal joint action,
  // computed before sampling.
  double error = 0.0;
  std::vector<JointAction> surviving;  // empty without conventions
  bool frozen = false;  // convention state after this round
};

struct TrialRecord {
  int trial = 0;
  std::vector<RoundRecord> rounds;
  // Round after which the conventions froze; 0 if frozen from the start,
  // -1 if never.
  int frozen_round = -1;
};

enum class OutcomeMode { kSample, kModal };

// Test hooks for replaying a scripted history. Random draws are consumed
// the same way whether or not anything is forced.
struct RoundControl {
  std::optional<JointAction> forced_action;  // original indices
  OutcomeMode outcome_mode = OutcomeMode::kSample;
  std::optional<int> forced_outcome;
};

// One interaction: choice distributions, one draw per agent in ascending
// agent order, one draw for the outcome, then learner and convention updates.
RoundRecord PlayRound(Team& team, CounterRng& rng,
                      const RoundControl& control = {});

// Fully determined by (experiment.seed, trial_index).
TrialRecord RunTrial(const Experiment& experiment, int trial_index);

struct CurveResult {
  std::vector<double> mean_error;
  std::vector<double> standard_error;
  std::vector<double> frozen_fraction;
  std::string config_hash;
  std::uint64_t seed = 0;
  int trials = 0;
};

struct RunOptions {
  int workers = 0;  // 0: hardware concurrency
  // Receives every trial in index order after the run.
  std::function<void(const TrialRecord&)> trial_sink;
};

// Trials run concurrently; the reduction is in trial-index order so the
// result does not depend on the worker count.
CurveResult RunExperiment(const Experiment& experiment,
                          const RunOptions& options = {});

// `%.9g`.
std::string FormatValue(double value);

// Header `round,mean_error,stderr,frozen_fraction`, one row per round.
void WriteCurveCsv(std::ostream& out, const CurveResult& curve);

nlohmann::json TrialToJson(const TrialRecord& trial);

}  // namespace coordlab

#endif  // COORDLAB_HARNESS_H_
