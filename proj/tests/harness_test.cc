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

#include "coordlab/harness.h"

#include <memory>
#include <sstream>

#include <gtest/gtest.h>

#include "coordlab/error.h"
#include "coordlab/game.h"
#include "coordlab/team.h"

namespace coordlab {
namespace {

JointAction J(std::vector<Action> a) { return JointAction{std::move(a)}; }

Experiment Make(StateGame game, LearnerKind kind, bool conventions,
                int horizon, int trials, std::uint64_t seed = 1) {
  Experiment e;
  e.game = std::make_shared<const StateGame>(std::move(game));
  e.learner.kind = kind;
  e.conventions = conventions;
  e.horizon = horizon;
  e.trials = trials;
  e.seed = seed;
  return e;
}

std::string Csv(const CurveResult& curve) {
  std::ostringstream out;
  WriteCurveCsv(out, curve);
  return out.str();
}

TEST(PlayRoundTest, FirstRoundSymmetricBayes) {
  auto game = std::make_shared<const StateGame>(MakePureCoordination(2));
  Team team(game, {.kind = LearnerKind::kBayes}, false);
  CounterRng rng(1, 0);
  RoundRecord record = PlayRound(team, rng);
  EXPECT_DOUBLE_EQ(record.error, 0.5);
  EXPECT_EQ(rng.Draws(), 3u);
  EXPECT_TRUE(record.surviving.empty());
}

TEST(PlayRoundTest, FrozenConventionHasNoError) {
  auto game = std::make_shared<const StateGame>(MakeStochastic2x2(0.1));
  Team team(game, {.kind = LearnerKind::kBayesUnobservable}, true);
  CounterRng rng(1, 0);
  RoundRecord first = PlayRound(
      team, rng, {.forced_action = J({1, 1}), .forced_outcome = kOutcomeLL});
  EXPECT_TRUE(first.frozen);
  EXPECT_EQ(first.surviving, std::vector<JointAction>{J({0, 0})});
  auto learners = team.Learners();
  for (int round = 0; round < 10; ++round) {
    RoundRecord r = PlayRound(team, rng);
    EXPECT_EQ(r.error, 0.0);
    EXPECT_EQ(r.joint, J({0, 0}));
    EXPECT_EQ(std::get<DirichletBelief>(team.Learners()[0].belief).params,
              std::get<DirichletBelief>(learners[0].belief).params);
    EXPECT_EQ(std::get<DirichletBelief>(team.Learners()[1].belief).params,
              std::get<DirichletBelief>(learners[1].belief).params);
  }
  // Forced and sampled rounds consume the same draws.
  EXPECT_EQ(rng.Draws(), 33u);
}

TEST(PlayRoundTest, AsymmetricFirstFiveRoundsMiscoordinate) {
  auto game = std::make_shared<const StateGame>(MakeAsymmetric2x2(4));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Team team(game, {.kind = LearnerKind::kBayes}, false);
    CounterRng rng(seed, 0);
    for (int round = 1; round <= 5; ++round) {
      RoundRecord r = PlayRound(team, rng);
      EXPECT_EQ(r.error, 1.0) << "round " << round;
    }
    EXPECT_EQ(PlayRound(team, rng).error, 0.5);
  }
}

TEST(PlayRoundTest, ModalOutcomesNeverCoordinate) {
  auto game = std::make_shared<const StateGame>(MakeStochastic2x2(0.1));
  Team team(game, {.kind = LearnerKind::kBayesUnobservable}, false);
  CounterRng rng(9, 0);
  RoundRecord first = PlayRound(
      team, rng, {.forced_action = J({0, 1}), .outcome_mode = OutcomeMode::kModal});
  EXPECT_EQ(first.outcome, kOutcomeLR);
  for (int round = 2; round <= 50; ++round) {
    RoundRecord r =
        PlayRound(team, rng, {.outcome_mode = OutcomeMode::kModal});
    for (const auto& s : r.choices.strategies) {
      ASSERT_TRUE(s[0] == 1.0 || s[1] == 1.0) << "round " << round;
    }
    ASSERT_EQ(r.error, 1.0) << "round " << round;
    ASSERT_NE(r.joint[0], r.joint[1]);
  }
}

TEST(PlayRoundTest, RejectsForcedDeletedAction) {
  auto game = std::make_shared<const StateGame>(MakeStochastic2x2(0.1));
  Team team(game, {.kind = LearnerKind::kStochasticFictitiousPlay}, true);
  CounterRng rng(1, 0);
  PlayRound(team, rng, {.forced_action = J({0, 0}), .forced_outcome = kOutcomeRR});
  EXPECT_THROW(PlayRound(team, rng, {.forced_action = J({0, 0})}),
               InvalidActionError);
}

TEST(RunTrialTest, Deterministic) {
  Experiment e = Make(MakeStochastic2x2(0.05), LearnerKind::kStochasticFictitiousPlay,
                      true, 30, 1, 77);
  for (int t = 0; t < 5; ++t) {
    EXPECT_EQ(TrialToJson(RunTrial(e, t)).dump(), TrialToJson(RunTrial(e, t)).dump());
  }
  EXPECT_NE(TrialToJson(RunTrial(e, 0)).dump(), TrialToJson(RunTrial(e, 1)).dump());
}

TEST(RunTrialTest, FictitiousPlayStaysCoordinated) {
  Experiment e = Make(MakePureCoordination(2), LearnerKind::kFictitiousPlay,
                      false, 40, 1);
  int coordinated_trials = 0;
  for (int t = 0; t < 200; ++t) {
    TrialRecord trial = RunTrial(e, t);
    int first = -1;
    for (const auto& r : trial.rounds) {
      if (first < 0 && r.joint[0] == r.joint[1]) first = r.round;
      if (first >= 0 && r.round > first) ASSERT_EQ(r.error, 0.0);
    }
    coordinated_trials += first > 0;
  }
  EXPECT_GT(coordinated_trials, 190);
}

TEST(RunTrialTest, ThreeByThreeConventionsFreezeAfterOneRound) {
  Experiment e = Make(MakeConvention3x3().game,
                      LearnerKind::kStochasticFictitiousPlay, true, 5, 1);
  for (int t = 0; t < 200; ++t) {
    TrialRecord trial = RunTrial(e, t);
    EXPECT_EQ(trial.frozen_round, 1);
    EXPECT_EQ(trial.rounds[0].surviving.size(), 1u);
    for (std::size_t k = 1; k < trial.rounds.size(); ++k) {
      EXPECT_EQ(trial.rounds[k].error, 0.0);
    }
  }
}

TEST(RunTrialTest, RecordsAreInternallyConsistent) {
  std::vector<Experiment> experiments = {
      Make(MakeStochastic2x2(0.1), LearnerKind::kBayesUnobservable, false, 25, 1),
      Make(MakeStochastic2x2(0.05), LearnerKind::kStochasticFictitiousPlay, true,
           25, 1),
      Make(MakeConvention3x3().game, LearnerKind::kBayesUnobservable, false, 10, 1),
      Make(MakeTwinOjaGame(), LearnerKind::kFictitiousPlay, true, 25, 1),
      Make(MakePureCoordination(3), LearnerKind::kBayes, false, 25, 1),
  };
  experiments[0].learner.epsilon = 0.1;
  for (const Experiment& e : experiments) {
    auto targets = OptimalJointActions(*e.game);
    for (int t = 0; t < 20; ++t) {
      TrialRecord trial = RunTrial(e, t);
      ASSERT_EQ(static_cast<int>(trial.rounds.size()), e.horizon);
      for (const auto& r : trial.rounds) {
        EXPECT_EQ(r.error, ProfileErrorProbability(*e.game, r.choices, targets));
        EXPECT_GE(r.error, 0.0);
        EXPECT_LE(r.error, 1.0);
        EXPECT_NO_THROW(ValidateProfile(*e.game, r.choices));
        for (int i = 0; i < r.joint.size(); ++i) {
          EXPECT_GT(r.choices.strategies[i][r.joint[i]], 0.0);
        }
        EXPECT_GT(e.game->TransitionProbability(r.joint, r.outcome), 0.0);
      }
    }
  }
}

TEST(RunExperimentTest, IndependentOfWorkerCount) {
  Experiment e = Make(MakeStochastic2x2(0.05), LearnerKind::kBayesUnobservable,
                      true, 30, 64, 5);
  std::string one = Csv(RunExperiment(e, {.workers = 1}));
  EXPECT_EQ(Csv(RunExperiment(e, {.workers = 3})), one);
  EXPECT_EQ(Csv(RunExperiment(e, {.workers = 8})), one);
  EXPECT_EQ(Csv(RunExperiment(e)), one);
}

TEST(RunExperimentTest, TrialSinkSeesTrialsInOrder) {
  Experiment e = Make(MakePureCoordination(2), LearnerKind::kBayes, false, 5, 16);
  std::vector<int> seen;
  RunExperiment(e, {.workers = 4, .trial_sink = [&](const TrialRecord& t) {
                      seen.push_back(t.trial);
                    }});
  ASSERT_EQ(seen.size(), 16u);
  for (int t = 0; t < 16; ++t) EXPECT_EQ(seen[t], t);
}

TEST(RunExperimentTest, MeanAndStandardError) {
  Experiment e = Make(MakePureCoordination(2), LearnerKind::kBayes, false, 6, 400);
  CurveResult curve = RunExperiment(e);
  ASSERT_EQ(curve.mean_error.size(), 6u);
  EXPECT_DOUBLE_EQ(curve.mean_error[0], 0.5);
  EXPECT_EQ(curve.standard_error[0], 0.0);
  EXPECT_GT(curve.standard_error[2], 0.0);
  for (double f : curve.frozen_fraction) EXPECT_EQ(f, 0.0);
  EXPECT_EQ(curve.trials, 400);
  EXPECT_EQ(curve.seed, 1u);
}

TEST(RunExperimentTest, FrozenFractionIsCumulative) {
  Experiment e = Make(MakeStochastic2x2(0.1), LearnerKind::kStochasticFictitiousPlay,
                      true, 20, 200);
  CurveResult curve = RunExperiment(e);
  for (std::size_t k = 1; k < curve.frozen_fraction.size(); ++k) {
    EXPECT_GE(curve.frozen_fraction[k], curve.frozen_fraction[k - 1]);
  }
  EXPECT_GT(curve.frozen_fraction.back(), 0.9);
}

TEST(RunExperimentTest, RejectsEmptyRuns) {
  Experiment e = Make(MakePureCoordination(2), LearnerKind::kBayes, false, 0, 1);
  EXPECT_THROW(RunExperiment(e), InvalidParameterError);
  e.horizon = 1;
  e.trials = 0;
  EXPECT_THROW(RunExperiment(e), InvalidParameterError);
}

TEST(CsvTest, HeaderAndPrecision) {
  CurveResult curve;
  curve.mean_error = {0.5, 1.0 / 3};
  curve.standard_error = {0.0, 0.01};
  curve.frozen_fraction = {0.0, 0.25};
  EXPECT_EQ(Csv(curve),
            "round,mean_error,stderr,frozen_fraction\n"
            "1,0.5,0,0\n"
            "2,0.333333333,0.01,0.25\n");
}

TEST(TrialJsonTest, Fields) {
  Experiment e = Make(MakeStochastic2x2(0.1), LearnerKind::kStochasticFictitiousPlay,
                      true, 3, 1);
  nlohmann::json doc = TrialToJson(RunTrial(e, 0));
  EXPECT_EQ(doc["trial"], 0);
  ASSERT_EQ(doc["rounds"].size(), 3u);
  for (const char* key : {"round", "joint_action", "outcome", "choices", "error",
                          "surviving", "frozen"}) {
    EXPECT_TRUE(doc["rounds"][0].contains(key)) << key;
  }
  EXPECT_TRUE(doc.contains("frozen_round"));
}

}  // namespace
}  // namespace coordlab
