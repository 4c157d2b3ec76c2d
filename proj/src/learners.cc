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

#include "coordlab/learners.h"

#include <algorithm>
#include <string>

#include "coordlab/error.h"

namespace coordlab {
namespace {

void CheckObserved(const AgentTable& table, int owner,
                   const JointAction& observed) {
  if (observed.size() != static_cast<int>(table.size())) {
    throw InvalidActionError("observed joint action has the wrong size");
  }
  for (int j = 0; j < observed.size(); ++j) {
    if (j == owner) continue;
    if (observed[j] < 0 ||
        observed[j] >= static_cast<int>(table[j].size())) {
      throw InvalidActionError("observed action of agent " +
                               std::to_string(j) + " out of range");
    }
  }
}

MixedProfile Normalize(const AgentTable& table, int owner) {
  MixedProfile profile;
  profile.strategies.resize(table.size());
  for (int j = 0; j < static_cast<int>(table.size()); ++j) {
    if (j == owner) continue;
    double total = 0.0;
    for (double c : table[j]) total += c;
    if (!(total > 0.0)) {
      throw UninitializedBeliefError("belief about agent " +
                                     std::to_string(j) + " has zero mass");
    }
    auto& dist = profile.strategies[j];
    dist.reserve(table[j].size());
    for (double c : table[j]) dist.push_back(c / total);
  }
  return profile;
}

void AddTable(AgentTable& target, const AgentTable& increment, int owner) {
  if (increment.size() != target.size()) {
    throw InvalidParameterError("increment table has the wrong shape");
  }
  for (int j = 0; j < static_cast<int>(target.size()); ++j) {
    if (j == owner) continue;
    if (increment[j].size() != target[j].size()) {
      throw InvalidParameterError("increment row has the wrong length");
    }
    for (std::size_t a = 0; a < target[j].size(); ++a) {
      target[j][a] += increment[j][a];
    }
  }
}

void RequireEnumerable(const StateGame& game) {
  if (game.NumJointActions() > kDenseJointActionLimit) {
    throw ResourceLimitError(
        "outcome-based updates need an enumerable joint action space");
  }
}

}  // namespace

std::string_view ToString(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kFictitiousPlay:
      return "fp";
    case LearnerKind::kBayes:
      return "bayes";
    case LearnerKind::kBayesUnobservable:
      return "bayes_unobs";
    case LearnerKind::kStochasticFictitiousPlay:
      return "sfp";
  }
  return "?";
}

LearnerKind ParseLearnerKind(std::string_view name) {
  for (auto kind : {LearnerKind::kFictitiousPlay, LearnerKind::kBayes,
                    LearnerKind::kBayesUnobservable,
                    LearnerKind::kStochasticFictitiousPlay}) {
    if (ToString(kind) == name) return kind;
  }
  throw ConfigError("unknown learner kind '" + std::string(name) +
                    "' (expected fp, bayes, bayes_unobs or sfp)");
}

bool ObservesActions(LearnerKind kind) {
  return kind == LearnerKind::kFictitiousPlay || kind == LearnerKind::kBayes;
}

LearnerState MakeLearner(const StateGame& game, int agent,
                         const LearnerConfig& config) {
  if (agent < 0 || agent >= game.NumAgents()) {
    throw InvalidParameterError("agent index out of range");
  }
  if (!(config.epsilon >= 0.0)) {
    throw InvalidParameterError("epsilon must be >= 0");
  }
  if (!(config.tie_tolerance >= 0.0)) {
    throw InvalidParameterError("tie tolerance must be >= 0");
  }
  AgentTable table(game.NumAgents());
  if (config.prior.empty()) {
    if (!(config.uniform_prior > 0.0)) {
      throw InvalidParameterError("uniform prior must be positive");
    }
    for (int j = 0; j < game.NumAgents(); ++j) {
      if (j != agent) table[j].assign(game.NumActions(j), config.uniform_prior);
    }
  } else {
    if (static_cast<int>(config.prior.size()) != game.NumAgents()) {
      throw InvalidParameterError("prior must list one table per agent");
    }
    const AgentTable& given = config.prior[agent];
    if (static_cast<int>(given.size()) != game.NumAgents()) {
      throw InvalidParameterError("prior table of agent " +
                                  std::to_string(agent) +
                                  " must have one row per agent");
    }
    for (int j = 0; j < game.NumAgents(); ++j) {
      if (j == agent) continue;
      if (static_cast<int>(given[j].size()) != game.NumActions(j)) {
        throw InvalidParameterError("prior row for agent " +
                                    std::to_string(j) + " has wrong length");
      }
      double total = 0.0;
      for (double c : given[j]) {
        if (!(c >= 0.0)) throw InvalidParameterError("negative prior count");
        total += c;
      }
      if (!(total > 0.0)) throw InvalidParameterError("prior row has no mass");
      table[j] = given[j];
    }
  }

  LearnerState state;
  state.agent = agent;
  state.kind = config.kind;
  state.epsilon = config.epsilon;
  state.tie_tolerance = config.tie_tolerance;
  if (config.kind == LearnerKind::kBayes ||
      config.kind == LearnerKind::kBayesUnobservable) {
    for (int j = 0; j < game.NumAgents(); ++j) {
      for (double p : table[j]) {
        if (!(p > 0.0)) {
          throw InvalidParameterError("Dirichlet parameters must be positive");
        }
      }
    }
    state.belief = DirichletBelief{agent, std::move(table)};
  } else {
    state.belief = FrequencyBelief{agent, std::move(table)};
  }
  return state;
}

MixedProfile FpPredict(const FrequencyBelief& belief) {
  return Normalize(belief.counts, belief.owner);
}

MixedProfile BayesExpectation(const DirichletBelief& belief) {
  for (int j = 0; j < static_cast<int>(belief.params.size()); ++j) {
    for (double p : belief.params[j]) {
      if (!(p > 0.0)) {
        throw InvalidParameterError("Dirichlet parameters must be positive");
      }
    }
  }
  return Normalize(belief.params, belief.owner);
}

MixedProfile Predict(const LearnerState& state) {
  return std::visit(
      [](const auto& belief) {
        using T = std::decay_t<decltype(belief)>;
        if constexpr (std::is_same_v<T, FrequencyBelief>) {
          return FpPredict(belief);
        } else {
          return BayesExpectation(belief);
        }
      },
      state.belief);
}

namespace {

const AgentTable& BeliefTable(const LearnerState& state) {
  return std::visit(
      [](const auto& belief) -> const AgentTable& {
        using T = std::decay_t<decltype(belief)>;
        if constexpr (std::is_same_v<T, FrequencyBelief>) {
          return belief.counts;
        } else {
          return belief.params;
        }
      },
      state.belief);
}

}  // namespace

std::vector<Action> EligibleActions(const StateGame& game,
                                    const LearnerState& state) {
  auto values = ActionValues(game, state.agent, Predict(state));
  double best = *std::max_element(values.begin(), values.end());
  std::vector<Action> eligible;
  for (int a = 0; a < static_cast<int>(values.size()); ++a) {
    if (values[a] >= best - state.epsilon - state.tie_tolerance) {
      eligible.push_back(a);
    }
  }
  return eligible;
}

std::optional<std::vector<Action>> EligibleActionsExact(
    const StateGame& game, const LearnerState& state) {
  if (!game.ExactPayoffs()) return std::nullopt;
  auto epsilon = RationalFromDouble(state.epsilon);
  if (!epsilon) return std::nullopt;
  const AgentTable& table = BeliefTable(state);
  std::vector<std::vector<Rational>> weights(table.size());
  Rational scale(1);
  try {
    for (int j = 0; j < static_cast<int>(table.size()); ++j) {
      if (j == state.agent) continue;
      Rational total(0);
      for (double c : table[j]) {
        auto r = RationalFromDouble(c);
        if (!r) return std::nullopt;
        weights[j].push_back(*r);
        total += *r;
      }
      scale *= total;
    }
    auto values = ExactActionValues(game, state.agent, weights);
    Rational best = *std::max_element(values.begin(), values.end());
    Rational threshold = best - *epsilon * scale;
    std::vector<Action> eligible;
    for (int a = 0; a < static_cast<int>(values.size()); ++a) {
      if (values[a] >= threshold) eligible.push_back(a);
    }
    return eligible;
  } catch (const boost::bad_rational&) {
    return std::nullopt;
  }
}

std::vector<double> UniformOver(const std::vector<Action>& eligible,
                                int num_actions) {
  std::vector<double> dist(num_actions, 0.0);
  for (Action a : eligible) dist[a] = 1.0 / static_cast<double>(eligible.size());
  return dist;
}

std::vector<double> ChoiceDistribution(const StateGame& game,
                                       const LearnerState& state) {
  return UniformOver(EligibleActions(game, state),
                     game.NumActions(state.agent));
}

Action ChooseAction(const LearnerState& state, const StateGame& game,
                    CounterRng& rng) {
  auto eligible = EligibleActions(game, state);
  double u = rng.Uniform();
  auto pick = static_cast<std::size_t>(u * static_cast<double>(eligible.size()));
  return eligible[std::min(pick, eligible.size() - 1)];
}

FrequencyBelief FpUpdateObservable(FrequencyBelief belief,
                                   const JointAction& observed) {
  CheckObserved(belief.counts, belief.owner, observed);
  for (int j = 0; j < observed.size(); ++j) {
    if (j != belief.owner) belief.counts[j][observed[j]] += 1.0;
  }
  return belief;
}

DirichletBelief BayesUpdateObservable(DirichletBelief belief,
                                      const JointAction& observed) {
  CheckObserved(belief.params, belief.owner, observed);
  for (int j = 0; j < observed.size(); ++j) {
    if (j != belief.owner) belief.params[j][observed[j]] += 1.0;
  }
  return belief;
}

AgentTable ActionPosterior(const StateGame& game,
                           const DirichletBelief& belief, Action own_action,
                           int outcome) {
  RequireEnumerable(game);
  const int owner = belief.owner;
  if (own_action < 0 || own_action >= game.NumActions(owner)) {
    throw InvalidActionError("own action out of range");
  }
  MixedProfile expected = BayesExpectation(belief);
  const int n = game.NumAgents();
  AgentTable posterior(n);
  for (int j = 0; j < n; ++j) {
    if (j != owner) posterior[j].assign(game.NumActions(j), 0.0);
  }
  // Each consistent joint action contributes
  // prod_{k != owner} P_k(a_k) * Pr^a(outcome) to the mass of a_j, for every j.
  double total = 0.0;
  ForEachJointAction(game.ActionCounts(), [&](const JointAction& joint) {
    if (joint[owner] != own_action) return;
    double weight = game.TransitionProbability(joint, outcome);
    for (int k = 0; k < n && weight > 0.0; ++k) {
      if (k != owner) weight *= expected.strategies[k][joint[k]];
    }
    if (weight <= 0.0) return;
    total += weight;
    for (int j = 0; j < n; ++j) {
      if (j != owner) posterior[j][joint[j]] += weight;
    }
  });
  if (!(total > 0.0)) {
    throw ImpossibleObservationError(
        "outcome " + std::to_string(outcome) +
        " has zero probability given own action " +
        std::to_string(own_action));
  }
  for (int j = 0; j < n; ++j) {
    for (double& p : posterior[j]) p /= total;
  }
  return posterior;
}

DirichletBelief BayesUpdateUnobservable(DirichletBelief belief,
                                        const AgentTable& posterior) {
  AddTable(belief.params, posterior, belief.owner);
  return belief;
}

JointLikelihoods SfpJointLikelihoods(const StateGame& game, int owner,
                                     Action own_action, int outcome) {
  RequireEnumerable(game);
  if (owner < 0 || owner >= game.NumAgents()) {
    throw InvalidParameterError("agent index out of range");
  }
  if (own_action < 0 || own_action >= game.NumActions(owner)) {
    throw InvalidActionError("own action out of range");
  }
  JointLikelihoods result;
  result.owner = owner;
  double total = 0.0;
  ForEachJointAction(game.ActionCounts(), [&](const JointAction& joint) {
    if (joint[owner] != own_action) return;
    double p = game.TransitionProbability(joint, outcome);
    result.joints.push_back(joint);
    result.likelihood.push_back(p);
    total += p;
  });
  if (!(total > 0.0)) {
    throw ImpossibleObservationError(
        "no joint action with own action " + std::to_string(own_action) +
        " reaches outcome " + std::to_string(outcome));
  }
  for (double& p : result.likelihood) p /= total;
  return result;
}

std::vector<double> SfpIndividualLikelihood(const JointLikelihoods& joint,
                                            int other, int num_actions) {
  std::vector<double> marginal(num_actions, 0.0);
  for (std::size_t k = 0; k < joint.joints.size(); ++k) {
    Action a = joint.joints[k][other];
    if (a < 0 || a >= num_actions) {
      throw InvalidActionError("likelihood table disagrees on action count");
    }
    marginal[a] += joint.likelihood[k];
  }
  return marginal;
}

FrequencyBelief SfpUpdate(FrequencyBelief belief,
                          const AgentTable& likelihoods) {
  AddTable(belief.counts, likelihoods, belief.owner);
  return belief;
}

void Observe(LearnerState& state, const StateGame& game,
             const JointAction& played, int outcome) {
  game.CheckJointAction(played);
  const Action own = played[state.agent];
  switch (state.kind) {
    case LearnerKind::kFictitiousPlay:
      state.belief =
          FpUpdateObservable(std::get<FrequencyBelief>(state.belief), played);
      break;
    case LearnerKind::kBayes:
      state.belief =
          BayesUpdateObservable(std::get<DirichletBelief>(state.belief), played);
      break;
    case LearnerKind::kBayesUnobservable: {
      auto& belief = std::get<DirichletBelief>(state.belief);
      auto posterior = ActionPosterior(game, belief, own, outcome);
      state.belief = BayesUpdateUnobservable(std::move(belief), posterior);
      break;
    }
    case LearnerKind::kStochasticFictitiousPlay: {
      auto joint = SfpJointLikelihoods(game, state.agent, own, outcome);
      AgentTable increments(game.NumAgents());
      for (int j = 0; j < game.NumAgents(); ++j) {
        if (j != state.agent) {
          increments[j] = SfpIndividualLikelihood(joint, j, game.NumActions(j));
        }
      }
      state.belief = SfpUpdate(std::move(std::get<FrequencyBelief>(state.belief)),
                               increments);
      break;
    }
  }
  state.last_action = own;
}

}  // namespace coordlab
