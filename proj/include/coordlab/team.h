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

#ifndef COORDLAB_TEAM_H_
#define COORDLAB_TEAM_H_

#include <memory>
#include <optional>
#include <vector>

#include "coordlab/conventions.h"
#include "coordlab/game.h"
#include "coordlab/learners.h"

namespace coordlab {

// The learners of one trial together with the optional convention layer and
// the game restricted to the actions the conventions still allow. Copies are
// cheap and independent, which the exact enumerator relies on.
class Team {
 public:
  Team(std::shared_ptr<const StateGame> game, const LearnerConfig& learner,
       bool conventions);

  const StateGame& Original() const { return *original_; }
  const StateGame& Current() const { return current_->game; }
  const std::vector<std::vector<Action>>& OriginalActions() const {
    return current_->original_action;
  }
  const std::vector<LearnerState>& Learners() const { return learners_; }
  const std::optional<ConventionState>& Conventions() const {
    return conventions_;
  }
  // Coordination targets, i.e. the optimal joint actions of the full game.
  const std::vector<JointAction>& Targets() const { return *targets_; }

  // True once a single convention remains; beliefs are then left alone.
  bool Settled() const { return conventions_ && conventions_->Converged(); }
  bool Frozen() const { return conventions_ && conventions_->frozen; }

  // Per-agent choice distributions over the current (reduced) actions.
  // With `exact_ties`, observable learners break ties in exact arithmetic
  // when the game allows it.
  std::vector<std::vector<double>> CurrentChoices(bool exact_ties = false) const;

  MixedProfile ToOriginal(const std::vector<std::vector<double>>& current) const;
  JointAction ToOriginal(const JointAction& current) const;
  // Throws InvalidActionError if `original` uses a deleted action.
  JointAction ToCurrent(const JointAction& original) const;

  double ErrorProbability(const MixedProfile& original_profile) const;

  // Feeds one round's joint action (current indices) and outcome to the
  // learners, then to the convention layer.
  void Observe(const JointAction& current_joint, int outcome);

 private:
  std::shared_ptr<const StateGame> original_;
  std::shared_ptr<const ReducedGame> current_;
  std::shared_ptr<const std::vector<JointAction>> targets_;
  std::vector<LearnerState> learners_;
  std::optional<ConventionState> conventions_;
};

}  // namespace coordlab

#endif  // COORDLAB_TEAM_H_
