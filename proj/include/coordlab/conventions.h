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

#ifndef COORDLAB_CONVENTIONS_H_
#define COORDLAB_CONVENTIONS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "coordlab/game.h"
#include "coordlab/learners.h"

namespace coordlab {

// Common-knowledge convention state. Everything here is a function of the
// game and the public outcome history only.
struct ConventionState {
  // active[i][a]: agent i's action a (original index) is still allowed.
  std::vector<std::vector<bool>> active;
  // Surviving optimal joint actions, original indices, lexicographic order.
  std::vector<JointAction> surviving;
  // No further likelihood estimates are computed once set.
  bool frozen = false;
  // Survivors can never be separated by any outcome.
  bool indistinguishable = false;
  std::int64_t likelihood_evaluations = 0;

  // A single convention remains; learning and deliberation stop.
  bool Converged() const { return surviving.size() == 1; }
  bool operator==(const ConventionState&) const = default;
};

// Starts from every optimal joint action of `game` with all of their
// component actions active.
ConventionState InitialConventionState(const StateGame& game,
                                       double tol = kTieTolerance);

// LE(a) = Pr^a(outcome) for each survivor; no agent-private input.
std::vector<double> OjaLikelihoods(const StateGame& game,
                                   std::span<const JointAction> surviving,
                                   int outcome);

// Keeps the survivors whose likelihood is within 1e-12 of the maximum,
// recomputes the active actions, and freezes on a singleton or an
// indistinguishable remainder.
ConventionState Prune(const StateGame& game, ConventionState state,
                      std::span<const double> likelihoods);

// One round of the convention layer: a no-op once frozen, otherwise
// likelihoods followed by Prune.
ConventionState ObserveOutcome(const StateGame& game, ConventionState state,
                               int outcome);

// True iff every pair of survivors has the same outcome distribution.
bool DetectIndistinguishable(const StateGame& game,
                             std::span<const JointAction> surviving);

struct ReducedGame {
  StateGame game;
  // original_action[i][a] is the original index of reduced action a.
  std::vector<std::vector<Action>> original_action;
};

// Restriction of `game` to the active actions. Outcomes and utilities keep
// their original indices.
ReducedGame ReduceGame(const StateGame& game,
                       const std::vector<std::vector<bool>>& active);

// Drops the entries of deleted actions; `keep` is indexed like the belief
// rows. Throws std::logic_error if some other agent would keep nothing.
FrequencyBelief RenormalizeBeliefs(const FrequencyBelief& belief,
                                   const std::vector<std::vector<bool>>& keep);
DirichletBelief RenormalizeBeliefs(const DirichletBelief& belief,
                                   const std::vector<std::vector<bool>>& keep);

}  // namespace coordlab

#endif  // COORDLAB_CONVENTIONS_H_
