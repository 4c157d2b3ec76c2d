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

#include "coordlab/team.h"

#include "coordlab/error.h"

namespace coordlab {

Team::Team(std::shared_ptr<const StateGame> game, const LearnerConfig& learner,
           bool conventions)
    : original_(std::move(game)) {
  targets_ = std::make_shared<const std::vector<JointAction>>(
      OptimalJointActions(*original_, learner.tie_tolerance));
  std::vector<std::vector<bool>> all(original_->NumAgents());
  for (int i = 0; i < original_->NumAgents(); ++i) {
    all[i].assign(original_->NumActions(i), true);
  }
  current_ = std::make_shared<const ReducedGame>(ReduceGame(*original_, all));
  for (int i = 0; i < original_->NumAgents(); ++i) {
    learners_.push_back(MakeLearner(*original_, i, learner));
  }
  if (conventions) {
    conventions_ = InitialConventionState(*original_, learner.tie_tolerance);
    if (conventions_->active != all) {
      // Actions outside every OJA are gone before the first round.
      std::vector<std::vector<bool>> keep = conventions_->active;
      for (auto& state : learners_) {
        std::visit([&](auto& belief) { belief = RenormalizeBeliefs(belief, keep); },
                   state.belief);
      }
      current_ = std::make_shared<const ReducedGame>(
          ReduceGame(*original_, conventions_->active));
    }
  }
}

std::vector<std::vector<double>> Team::CurrentChoices(bool exact_ties) const {
  const StateGame& game = Current();
  std::vector<std::vector<double>> choices(game.NumAgents());
  for (int i = 0; i < game.NumAgents(); ++i) {
    if (Settled()) {
      choices[i] = {1.0};
      continue;
    }
    const LearnerState& state = learners_[i];
    std::optional<std::vector<Action>> eligible;
    if (exact_ties && ObservesActions(state.kind)) {
      eligible = EligibleActionsExact(game, state);
    }
    if (!eligible) eligible = EligibleActions(game, state);
    choices[i] = UniformOver(*eligible, game.NumActions(i));
  }
  return choices;
}

MixedProfile Team::ToOriginal(
    const std::vector<std::vector<double>>& current) const {
  MixedProfile profile;
  profile.strategies.resize(original_->NumAgents());
  for (int i = 0; i < original_->NumAgents(); ++i) {
    profile.strategies[i].assign(original_->NumActions(i), 0.0);
    for (std::size_t a = 0; a < current[i].size(); ++a) {
      profile.strategies[i][current_->original_action[i][a]] = current[i][a];
    }
  }
  return profile;
}

JointAction Team::ToOriginal(const JointAction& current) const {
  Current().CheckJointAction(current);
  JointAction original;
  for (int i = 0; i < current.size(); ++i) {
    original.actions.push_back(current_->original_action[i][current[i]]);
  }
  return original;
}

JointAction Team::ToCurrent(const JointAction& original) const {
  original_->CheckJointAction(original);
  JointAction current;
  for (int i = 0; i < original.size(); ++i) {
    const auto& map = current_->original_action[i];
    int found = -1;
    for (std::size_t a = 0; a < map.size(); ++a) {
      if (map[a] == original[i]) found = static_cast<int>(a);
    }
    if (found < 0) {
      throw InvalidActionError("action " + std::to_string(original[i]) +
                               " of agent " + std::to_string(i) +
                               " was deleted by the convention layer");
    }
    current.actions.push_back(found);
  }
  return current;
}

double Team::ErrorProbability(const MixedProfile& original_profile) const {
  return ProfileErrorProbability(*original_, original_profile, *targets_);
}

void Team::Observe(const JointAction& current_joint, int outcome) {
  if (Settled()) return;
  const StateGame& game = Current();
  for (auto& state : learners_) {
    coordlab::Observe(state, game, current_joint, outcome);
  }
  if (!conventions_ || conventions_->frozen) return;
  auto before = conventions_->active;
  conventions_ = ObserveOutcome(*original_, std::move(*conventions_), outcome);
  if (conventions_->active == before) return;

  const auto& map = current_->original_action;
  std::vector<std::vector<bool>> keep(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (Action a : map[i]) keep[i].push_back(conventions_->active[i][a]);
  }
  for (auto& state : learners_) {
    std::visit([&](auto& belief) { belief = RenormalizeBeliefs(belief, keep); },
               state.belief);
    if (state.last_action) {
      int mapped = -1;
      for (int a = 0, k = 0; a < static_cast<int>(keep[state.agent].size());
           ++a) {
        if (!keep[state.agent][a]) continue;
        if (a == *state.last_action) mapped = k;
        ++k;
      }
      state.last_action = mapped >= 0 ? std::optional<Action>(mapped)
                                      : std::nullopt;
    }
  }
  current_ = std::make_shared<const ReducedGame>(
      ReduceGame(*original_, conventions_->active));
}

}  // namespace coordlab
