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

#ifndef COORDLAB_LEARNERS_H_
#define COORDLAB_LEARNERS_H_

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "coordlab/game.h"
#include "coordlab/random.h"

namespace coordlab {

enum class LearnerKind {
  kFictitiousPlay,            // "fp": counts of observed actions
  kBayes,                     // "bayes": Dirichlet, observed actions
  kBayesUnobservable,         // "bayes_unobs": Dirichlet, outcome only
  kStochasticFictitiousPlay,  // "sfp": counts from outcome likelihoods
};

std::string_view ToString(LearnerKind kind);
LearnerKind ParseLearnerKind(std::string_view name);
bool ObservesActions(LearnerKind kind);

// Indexed [other agent][action]; the owner's own row stays empty.
using AgentTable = std::vector<std::vector<double>>;

struct FrequencyBelief {
  int owner = 0;
  AgentTable counts;
};

struct DirichletBelief {
  int owner = 0;
  AgentTable params;
};

using Belief = std::variant<FrequencyBelief, DirichletBelief>;

struct LearnerConfig {
  LearnerKind kind = LearnerKind::kBayes;
  double epsilon = 0.0;
  double tie_tolerance = kTieTolerance;
  double uniform_prior = 1.0;
  // prior[owner][other][action]; empty means every entry is uniform_prior.
  std::vector<AgentTable> prior;
};

struct LearnerState {
  int agent = 0;
  LearnerKind kind = LearnerKind::kBayes;
  Belief belief;
  double epsilon = 0.0;
  double tie_tolerance = kTieTolerance;
  std::optional<Action> last_action;
};

LearnerState MakeLearner(const StateGame& game, int agent,
                         const LearnerConfig& config);

// Relative frequencies. Throws UninitializedBeliefError if some other
// agent's counts sum to zero.
MixedProfile FpPredict(const FrequencyBelief& belief);
MixedProfile BayesExpectation(const DirichletBelief& belief);
MixedProfile Predict(const LearnerState& state);

// Actions within epsilon (plus the tie tolerance) of the best expected
// utility against the predicted reduced profile.
std::vector<Action> EligibleActions(const StateGame& game,
                                    const LearnerState& state);
// Exact-arithmetic variant for games with an exact strategic form; nullopt
// when the game or the belief has no small rational representation.
std::optional<std::vector<Action>> EligibleActionsExact(
    const StateGame& game, const LearnerState& state);

// Uniform over `eligible`, as a distribution over all of the agent's actions.
std::vector<double> UniformOver(const std::vector<Action>& eligible,
                                int num_actions);
std::vector<double> ChoiceDistribution(const StateGame& game,
                                       const LearnerState& state);

// Consumes exactly one draw from `rng`.
Action ChooseAction(const LearnerState& state, const StateGame& game,
                    CounterRng& rng);

FrequencyBelief FpUpdateObservable(FrequencyBelief belief,
                                   const JointAction& observed);
DirichletBelief BayesUpdateObservable(DirichletBelief belief,
                                      const JointAction& observed);

// Pr(a[j] = x | own action, outcome) for every other agent j, with the
// remaining agents marginalized under the owner's expectations.
AgentTable ActionPosterior(const StateGame& game,
                           const DirichletBelief& belief, Action own_action,
                           int outcome);
DirichletBelief BayesUpdateUnobservable(DirichletBelief belief,
                                        const AgentTable& posterior);

// Normalized Pr^a(outcome) over joint actions a with a[owner] = own_action.
struct JointLikelihoods {
  int owner = 0;
  std::vector<JointAction> joints;
  std::vector<double> likelihood;
};

JointLikelihoods SfpJointLikelihoods(const StateGame& game, int owner,
                                     Action own_action, int outcome);
std::vector<double> SfpIndividualLikelihood(const JointLikelihoods& joint,
                                            int other, int num_actions);
FrequencyBelief SfpUpdate(FrequencyBelief belief,
                          const AgentTable& likelihoods);

// Applies the kind-specific update for one round: observable kinds read the
// others' components of `played`, the others use only the owner's own
// component and `outcome`.
void Observe(LearnerState& state, const StateGame& game,
             const JointAction& played, int outcome);

}  // namespace coordlab

#endif  // COORDLAB_LEARNERS_H_
