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

#include "coordlab/conventions.h"

#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "coordlab/game.h"
#include "coordlab/learners.h"
#include "coordlab/team.h"
#include "test_util.h"

namespace coordlab {
namespace {

using ::coordlab::testing::RandomGame;

JointAction J(std::vector<Action> a) { return JointAction{std::move(a)}; }

// Checks the structural invariants tying active actions to survivors.
void ExpectConsistent(const ConventionState& state) {
  ASSERT_FALSE(state.surviving.empty());
  const int n = static_cast<int>(state.active.size());
  std::vector<std::vector<bool>> used(n);
  for (int i = 0; i < n; ++i) used[i].assign(state.active[i].size(), false);
  for (const auto& oja : state.surviving) {
    for (int i = 0; i < n; ++i) {
      EXPECT_TRUE(state.active[i][oja[i]]);
      used[i][oja[i]] = true;
    }
  }
  EXPECT_EQ(used, state.active);
}

TEST(InitialStateTest, AllOjasActive) {
  ConventionState state = InitialConventionState(MakeStochastic2x2(0.1));
  EXPECT_EQ(state.surviving, (std::vector<JointAction>{J({0, 0}), J({1, 1})}));
  EXPECT_FALSE(state.frozen);
  EXPECT_FALSE(state.indistinguishable);
  ExpectConsistent(state);
}

TEST(InitialStateTest, IndistinguishableFromTheStart) {
  // Only the twins are optimal when the third OJA is worse.
  StateGame game = StateGame::FromTable(
      {2, 2}, 3, {{0.5, 0.5, 0}, {0, 0, 1}, {0, 0, 1}, {0.5, 0.5, 0}},
      {1, 1, 0});
  ConventionState state = InitialConventionState(game);
  EXPECT_TRUE(state.indistinguishable);
  EXPECT_TRUE(state.frozen);
  EXPECT_FALSE(state.Converged());
}

TEST(OjaLikelihoodsTest, StochasticBothLeft) {
  StateGame game = MakeStochastic2x2(0.1);
  auto ojas = OptimalJointActions(game);
  auto le = OjaLikelihoods(game, ojas, kOutcomeLL);
  ASSERT_EQ(le.size(), 2u);
  EXPECT_NEAR(le[0], 0.81, 1e-15);
  EXPECT_NEAR(le[1], 0.01, 1e-15);
}

TEST(OjaLikelihoodsTest, GoodStatesPickTheirOja) {
  StateGame game = MakeConvention3x3().game;
  auto ojas = OptimalJointActions(game);
  for (int good = 0; good < 3; ++good) {
    auto le = OjaLikelihoods(game, ojas, good);
    for (int k = 0; k < 3; ++k) {
      if (k != good) EXPECT_GT(le[good], le[k] + 1e-12);
    }
  }
}

TEST(OjaLikelihoodsTest, DuplicatedOjasTie) {
  StateGame game = MakeTwinOjaGame();
  auto ojas = OptimalJointActions(game);
  for (int s = 0; s < game.NumOutcomes(); ++s) {
    auto le = OjaLikelihoods(game, ojas, s);
    EXPECT_EQ(le[0], le[1]);
  }
}

TEST(PruneTest, DominatedOjaRemovedAndFrozen) {
  StateGame game = MakeStochastic2x2(0.1);
  ConventionState state =
      Prune(game, InitialConventionState(game), std::vector<double>{0.81, 0.01});
  EXPECT_EQ(state.surviving, std::vector<JointAction>{J({0, 0})});
  EXPECT_TRUE(state.frozen);
  EXPECT_TRUE(state.Converged());
  EXPECT_EQ(state.active,
            (std::vector<std::vector<bool>>{{true, false}, {true, false}}));
}

TEST(PruneTest, ThirdOjaRejected) {
  StateGame game = MakeConvention3x3().game;
  ConventionState state = Prune(game, InitialConventionState(game),
                                std::vector<double>{0.4, 0.4, 0.1});
  EXPECT_EQ(state.surviving,
            (std::vector<JointAction>{J({0, 0, 0}), J({1, 1, 1})}));
  EXPECT_FALSE(state.frozen);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(state.active[i], (std::vector<bool>{true, true, false}));
  }
  ExpectConsistent(state);
}

TEST(PruneTest, TiesLeaveStateUnchanged) {
  StateGame game = MakeStochastic2x2(0.1);
  ConventionState initial = InitialConventionState(game);
  EXPECT_EQ(Prune(game, initial, std::vector<double>{0.09, 0.09}), initial);
  EXPECT_EQ(Prune(game, initial, std::vector<double>{0.0, 0.0}), initial);
  // Within the tie tolerance.
  EXPECT_EQ(Prune(game, initial, std::vector<double>{0.3, 0.3 + 1e-13}),
            initial);
}

TEST(ObserveOutcomeTest, CountsEvaluationsUntilFrozen) {
  StateGame game = MakeStochastic2x2(0.1);
  ConventionState state = InitialConventionState(game);
  state = ObserveOutcome(game, state, kOutcomeLR);
  EXPECT_EQ(state.likelihood_evaluations, 1);
  EXPECT_EQ(state.surviving.size(), 2u);
  state = ObserveOutcome(game, state, kOutcomeRR);
  EXPECT_EQ(state.surviving, std::vector<JointAction>{J({1, 1})});
  ConventionState frozen = state;
  state = ObserveOutcome(game, state, kOutcomeLL);
  EXPECT_EQ(state, frozen);
}

TEST(ReduceGameTest, DeletesThirdAction) {
  StateGame game = MakeConvention3x3().game;
  std::vector<std::vector<bool>> active(3, {true, true, false});
  ReducedGame reduced = ReduceGame(game, active);
  EXPECT_EQ(reduced.game.ActionCounts(), (std::vector<int>{2, 2, 2}));
  EXPECT_EQ(reduced.game.NumOutcomes(), game.NumOutcomes());
  EXPECT_EQ(reduced.original_action,
            (std::vector<std::vector<Action>>(3, {0, 1})));
  ForEachJointAction(reduced.game.ActionCounts(), [&](const JointAction& a) {
    for (int s = 0; s < 6; ++s) {
      EXPECT_EQ(reduced.game.TransitionProbability(a, s),
                game.TransitionProbability(a, s));
    }
  });
}

TEST(ReduceGameTest, RemapsIndices) {
  StateGame game = MakeConvention3x3().game;
  std::vector<std::vector<bool>> active = {
      {false, true, true}, {true, false, true}, {true, true, true}};
  ReducedGame reduced = ReduceGame(game, active);
  EXPECT_EQ(reduced.original_action[0], (std::vector<Action>{1, 2}));
  EXPECT_EQ(reduced.original_action[1], (std::vector<Action>{0, 2}));
  EXPECT_EQ(reduced.game.TransitionRow(reduced.game.JointIndex(J({1, 1, 2})))[2],
            game.TransitionRow(game.JointIndex(J({2, 2, 2})))[2]);
}

TEST(ReduceGameTest, NothingDeletedIsIdentity) {
  StateGame game = MakeStochastic2x2(0.1);
  ReducedGame reduced = ReduceGame(game, {{true, true}, {true, true}});
  EXPECT_EQ(reduced.game.ActionCounts(), game.ActionCounts());
  for (std::int64_t k = 0; k < 4; ++k) {
    auto a = reduced.game.TransitionRow(k);
    auto b = game.TransitionRow(k);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
  EXPECT_EQ(reduced.game.Utilities(), game.Utilities());
}

TEST(ReduceGameTest, FrozenTwoByTwoIsOneByOne) {
  StateGame game = MakeStochastic2x2(0.1);
  ConventionState state =
      Prune(game, InitialConventionState(game), std::vector<double>{0.81, 0.01});
  ReducedGame reduced = ReduceGame(game, state.active);
  EXPECT_EQ(reduced.game.ActionCounts(), (std::vector<int>{1, 1}));
  EXPECT_NEAR(ExpectedUtility(reduced.game, J({0, 0})), 0.82, 1e-12);
}

TEST(ReduceGameTest, KeepsPureCoordinationClosedForm) {
  StateGame game = MakePureCoordination(10);
  std::vector<std::vector<bool>> active(10, std::vector<bool>(10, false));
  for (auto& row : active) row[3] = row[7] = true;
  ReducedGame reduced = ReduceGame(game, active);
  EXPECT_EQ(reduced.game.NumJointActions(), 1024);
  EXPECT_EQ(OptimalJointActions(reduced.game).size(), 2u);
  EXPECT_DOUBLE_EQ(ExpectedUtility(reduced.game, JointAction(std::vector<Action>(10, 1))),
                   1.0);
}

TEST(RenormalizeBeliefsTest, DropsDeletedCounts) {
  FrequencyBelief b{0, AgentTable{{}, {5, 3, 2}}};
  FrequencyBelief r = RenormalizeBeliefs(b, {{true, true, true}, {true, true, false}});
  EXPECT_EQ(r.counts[1], (std::vector<double>{5, 3}));
  EXPECT_EQ(FpPredict(r).strategies[1], (std::vector<double>{0.625, 0.375}));
}

TEST(RenormalizeBeliefsTest, NothingDeleted) {
  FrequencyBelief b{0, AgentTable{{}, {5, 3, 2}}};
  EXPECT_EQ(RenormalizeBeliefs(b, {{true, true, true}, {true, true, true}}).counts,
            b.counts);
}

TEST(RenormalizeBeliefsTest, MassOnDeletedAction) {
  DirichletBelief b{0, AgentTable{{}, {0.1, 0.1, 9.8}}};
  DirichletBelief r =
      RenormalizeBeliefs(b, {{true, true, true}, {true, true, false}});
  EXPECT_EQ(BayesExpectation(r).strategies[1], (std::vector<double>{0.5, 0.5}));
}

TEST(RenormalizeBeliefsTest, EmptyRowIsAnInternalError) {
  FrequencyBelief b{0, AgentTable{{}, {1, 1}}};
  EXPECT_THROW(RenormalizeBeliefs(b, {{true, true}, {false, false}}),
               std::logic_error);
}

TEST(RenormalizeBeliefsTest, NoResidualCountsFallBackToUniform) {
  FrequencyBelief z{0, AgentTable{{}, {0, 0, 4}}};
  FrequencyBelief r = RenormalizeBeliefs(z, {{true, true, true}, {true, true, false}});
  EXPECT_EQ(FpPredict(r).strategies[1], (std::vector<double>{0.5, 0.5}));
}

TEST(DetectIndistinguishableTest, Cases) {
  StateGame twins = MakeTwinOjaGame();
  auto ojas = OptimalJointActions(twins);
  EXPECT_TRUE(DetectIndistinguishable(twins, std::span(ojas).first(2)));
  EXPECT_FALSE(DetectIndistinguishable(twins, ojas));
  StateGame stochastic = MakeStochastic2x2(0.1);
  auto pair = OptimalJointActions(stochastic);
  EXPECT_FALSE(DetectIndistinguishable(stochastic, pair));
  EXPECT_TRUE(DetectIndistinguishable(stochastic, std::span(pair).first(1)));
}

TEST(ConventionPropertyTest, CommonKnowledge) {
  // Agents with different learners, priors and private actions still hold
  // the same convention state after the same public outcomes.
  auto game = std::make_shared<const StateGame>(MakeConvention3x3().game);
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    Team a(game, {.kind = LearnerKind::kStochasticFictitiousPlay}, true);
    Team b(game, {.kind = LearnerKind::kBayesUnobservable, .epsilon = 0.1},
           true);
    for (int round = 0; round < 10 && !a.Settled(); ++round) {
      int outcome = static_cast<int>(rng() % 6);
      auto pick = [&](const Team& t) {
        JointAction joint;
        for (int i = 0; i < 3; ++i) {
          joint.actions.push_back(
              static_cast<Action>(rng() % t.Current().NumActions(i)));
        }
        return joint;
      };
      JointAction ja = pick(a);
      JointAction jb = pick(b);
      // Only observations the learners consider possible.
      if (a.Current().TransitionProbability(ja, outcome) == 0.0 ||
          b.Current().TransitionProbability(jb, outcome) == 0.0) {
        continue;
      }
      a.Observe(ja, outcome);
      b.Observe(jb, outcome);
      ASSERT_EQ(*a.Conventions(), *b.Conventions());
    }
  }
}

TEST(ConventionPropertyTest, MonotoneAndConsistent) {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 200; ++rep) {
    StateGame game = rep % 3 == 0 ? MakeConvention3x3().game
                     : rep % 3 == 1 ? MakeTwinOjaGame(0.8)
                                    : RandomGame(rng, {2, 2, 2}, 2);
    ConventionState state = InitialConventionState(game);
    ExpectConsistent(state);
    for (int round = 0; round < 20; ++round) {
      ConventionState next =
          ObserveOutcome(game, state, static_cast<int>(rng() % game.NumOutcomes()));
      ExpectConsistent(next);
      EXPECT_LE(next.surviving.size(), state.surviving.size());
      for (const auto& oja : next.surviving) {
        EXPECT_NE(std::find(state.surviving.begin(), state.surviving.end(), oja),
                  state.surviving.end());
      }
      for (std::size_t i = 0; i < state.active.size(); ++i) {
        for (std::size_t a = 0; a < state.active[i].size(); ++a) {
          EXPECT_TRUE(state.active[i][a] || !next.active[i][a]);
        }
      }
      EXPECT_TRUE(!state.frozen || next == state);
      state = next;
    }
  }
}

TEST(ConventionPropertyTest, PruningIsSoundOnEveryOutcome) {
  std::vector<StateGame> games = {MakeStochastic2x2(0.1),
                                  MakeConvention3x3().game};
  for (const StateGame& game : games) {
    ConventionState initial = InitialConventionState(game);
    for (int s = 0; s < game.NumOutcomes(); ++s) {
      auto le = OjaLikelihoods(game, initial.surviving, s);
      double best = *std::max_element(le.begin(), le.end());
      ConventionState next = ObserveOutcome(game, initial, s);
      for (std::size_t k = 0; k < initial.surviving.size(); ++k) {
        bool kept = std::find(next.surviving.begin(), next.surviving.end(),
                              initial.surviving[k]) != next.surviving.end();
        bool is_mle = le[k] >= best - 1e-12;
        EXPECT_EQ(kept, is_mle) << "outcome " << s << " oja " << k;
      }
    }
  }
}

TEST(ConventionPropertyTest, ConventionOverridesHistory) {
  auto game = std::make_shared<const StateGame>(MakeStochastic2x2(0.1));
  for (LearnerKind kind : {LearnerKind::kBayesUnobservable,
                           LearnerKind::kStochasticFictitiousPlay}) {
    Team team(game, {.kind = kind}, true);
    // Both went right, but the outcome favors <l,l>.
    team.Observe(J({1, 1}), kOutcomeLL);
    ASSERT_TRUE(team.Settled());
    auto choices = team.CurrentChoices();
    EXPECT_EQ(choices, (std::vector<std::vector<double>>{{1.0}, {1.0}}));
    MixedProfile original = team.ToOriginal(choices);
    EXPECT_EQ(original.strategies,
              (std::vector<std::vector<double>>{{1, 0}, {1, 0}}));
    EXPECT_EQ(team.ErrorProbability(original), 0.0);
    // The learners keep whatever they believed when the convention formed.
    auto before = team.Learners();
    team.Observe(J({0, 0}), kOutcomeRR);
    EXPECT_EQ(team.Learners()[0].belief.index(), before[0].belief.index());
    if (kind == LearnerKind::kBayesUnobservable) {
      EXPECT_EQ(std::get<DirichletBelief>(team.Learners()[0].belief).params,
                std::get<DirichletBelief>(before[0].belief).params);
    }
  }
}

TEST(ConventionPropertyTest, IndistinguishableRemainderStopsLikelihoods) {
  auto game = std::make_shared<const StateGame>(MakeTwinOjaGame(0.9));
  Team team(game, {.kind = LearnerKind::kStochasticFictitiousPlay}, true);
  // good_a favors the twins over <2,2>.
  team.Observe(J({0, 0}), 0);
  const ConventionState& state = *team.Conventions();
  EXPECT_EQ(state.surviving, (std::vector<JointAction>{J({0, 0}), J({1, 1})}));
  EXPECT_TRUE(state.indistinguishable);
  EXPECT_TRUE(state.frozen);
  EXPECT_FALSE(team.Settled());
  EXPECT_EQ(state.likelihood_evaluations, 1);
  EXPECT_EQ(team.Current().ActionCounts(), (std::vector<int>{2, 2}));
  for (int round = 0; round < 5; ++round) team.Observe(J({0, 1}), 2);
  EXPECT_EQ(team.Conventions()->likelihood_evaluations, 1);
  EXPECT_EQ(team.Conventions()->surviving.size(), 2u);
}

}  // namespace
}  // namespace coordlab
