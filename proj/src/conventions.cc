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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coordlab/error.h"

namespace coordlab {
namespace {

constexpr double kLikelihoodTieTolerance = 1e-12;

std::vector<std::vector<bool>> ActiveFrom(const StateGame& game,
                                          std::span<const JointAction> ojas) {
  std::vector<std::vector<bool>> active(game.NumAgents());
  for (int i = 0; i < game.NumAgents(); ++i) {
    active[i].assign(game.NumActions(i), false);
  }
  for (const auto& joint : ojas) {
    for (int i = 0; i < game.NumAgents(); ++i) active[i][joint[i]] = true;
  }
  return active;
}

bool SameDistribution(const StateGame& game, const JointAction& x,
                      const JointAction& y) {
  auto ox = game.Outcomes(x);
  auto oy = game.Outcomes(y);
  // Sparse rows; compare on the union of supports.
  std::size_t p = 0, q = 0;
  while (p < ox.size() || q < oy.size()) {
    if (q == oy.size() || (p < ox.size() && ox[p].outcome < oy[q].outcome)) {
      if (ox[p].probability > kProbabilityTolerance) return false;
      ++p;
    } else if (p == ox.size() || oy[q].outcome < ox[p].outcome) {
      if (oy[q].probability > kProbabilityTolerance) return false;
      ++q;
    } else {
      if (std::fabs(ox[p].probability - oy[q].probability) >
          kProbabilityTolerance) {
        return false;
      }
      ++p;
      ++q;
    }
  }
  return true;
}

template <typename Table>
Table Restrict(const Table& table, int owner,
               const std::vector<std::vector<bool>>& keep) {
  if (keep.size() != table.size()) {
    throw std::logic_error("keep mask has the wrong number of agents");
  }
  Table out(table.size());
  for (int j = 0; j < static_cast<int>(table.size()); ++j) {
    if (j == owner) continue;
    if (keep[j].size() != table[j].size()) {
      throw std::logic_error("keep mask row has the wrong length");
    }
    for (std::size_t a = 0; a < table[j].size(); ++a) {
      if (keep[j][a]) out[j].push_back(table[j][a]);
    }
    if (out[j].empty()) {
      throw std::logic_error("convention state left agent " +
                             std::to_string(j) + " without actions");
    }
  }
  return out;
}

}  // namespace

ConventionState InitialConventionState(const StateGame& game, double tol) {
  ConventionState state;
  state.surviving = OptimalJointActions(game, tol);
  state.active = ActiveFrom(game, state.surviving);
  state.frozen = state.surviving.size() == 1;
  if (!state.frozen && DetectIndistinguishable(game, state.surviving)) {
    state.frozen = true;
    state.indistinguishable = true;
  }
  return state;
}

std::vector<double> OjaLikelihoods(const StateGame& game,
                                   std::span<const JointAction> surviving,
                                   int outcome) {
  std::vector<double> likelihoods;
  likelihoods.reserve(surviving.size());
  for (const auto& joint : surviving) {
    likelihoods.push_back(game.TransitionProbability(joint, outcome));
  }
  return likelihoods;
}

ConventionState Prune(const StateGame& game, ConventionState state,
                      std::span<const double> likelihoods) {
  if (likelihoods.size() != state.surviving.size()) {
    throw InvalidParameterError("one likelihood per surviving OJA expected");
  }
  if (state.surviving.empty()) {
    throw std::logic_error("convention state has no surviving OJA");
  }
  double best = *std::max_element(likelihoods.begin(), likelihoods.end());
  std::vector<JointAction> kept;
  for (std::size_t k = 0; k < likelihoods.size(); ++k) {
    if (likelihoods[k] >= best - kLikelihoodTieTolerance) {
      kept.push_back(std::move(state.surviving[k]));
    }
  }
  state.surviving = std::move(kept);
  state.active = ActiveFrom(game, state.surviving);
  if (state.surviving.size() == 1) {
    state.frozen = true;
  } else if (DetectIndistinguishable(game, state.surviving)) {
    state.frozen = true;
    state.indistinguishable = true;
  }
  return state;
}

ConventionState ObserveOutcome(const StateGame& game, ConventionState state,
                               int outcome) {
  if (state.frozen) return state;
  auto likelihoods = OjaLikelihoods(game, state.surviving, outcome);
  ++state.likelihood_evaluations;
  return Prune(game, std::move(state), likelihoods);
}

bool DetectIndistinguishable(const StateGame& game,
                             std::span<const JointAction> surviving) {
  for (std::size_t k = 1; k < surviving.size(); ++k) {
    if (!SameDistribution(game, surviving[0], surviving[k])) return false;
  }
  return true;
}

ReducedGame ReduceGame(const StateGame& game,
                       const std::vector<std::vector<bool>>& active) {
  if (static_cast<int>(active.size()) != game.NumAgents()) {
    throw InvalidParameterError("active set per agent expected");
  }
  ReducedGame reduced{game, {}};
  reduced.original_action.resize(game.NumAgents());
  bool all_active = true;
  std::vector<int> counts;
  for (int i = 0; i < game.NumAgents(); ++i) {
    if (static_cast<int>(active[i].size()) != game.NumActions(i)) {
      throw InvalidParameterError("active mask has the wrong length");
    }
    for (int a = 0; a < game.NumActions(i); ++a) {
      if (active[i][a]) {
        reduced.original_action[i].push_back(a);
      } else {
        all_active = false;
      }
    }
    if (reduced.original_action[i].empty()) {
      throw InvalidParameterError("agent " + std::to_string(i) +
                                  " has no active action");
    }
    counts.push_back(static_cast<int>(reduced.original_action[i].size()));
  }
  if (all_active) return reduced;

  if (game.PureCoordinationStructure() && !game.IsDense()) {
    PureCoordination pc = *game.PureCoordinationStructure();
    for (int i = 0; i < game.NumAgents(); ++i) {
      std::vector<int> labels;
      for (Action a : reduced.original_action[i]) {
        labels.push_back(pc.moves[i][a]);
      }
      pc.moves[i] = std::move(labels);
    }
    reduced.game = StateGame::FromPureCoordination(std::move(pc));
    return reduced;
  }

  std::vector<std::vector<double>> rows;
  JointAction original;
  original.actions.resize(game.NumAgents());
  ForEachJointAction(counts, [&](const JointAction& joint) {
    for (int i = 0; i < game.NumAgents(); ++i) {
      original.actions[i] = reduced.original_action[i][joint[i]];
    }
    auto row = game.TransitionRow(game.JointIndex(original));
    rows.emplace_back(row.begin(), row.end());
  });
  reduced.game = StateGame::FromTable(std::move(counts), game.NumOutcomes(),
                                      std::move(rows), game.Utilities(),
                                      game.ExactUtilities());
  return reduced;
}

FrequencyBelief RenormalizeBeliefs(const FrequencyBelief& belief,
                                   const std::vector<std::vector<bool>>& keep) {
  FrequencyBelief out{belief.owner, Restrict(belief.counts, belief.owner, keep)};
  // Zero prior counts can leave no evidence on the surviving actions; fall
  // back to unit counts so predictions stay defined.
  for (int j = 0; j < static_cast<int>(out.counts.size()); ++j) {
    if (j == out.owner) continue;
    double total = 0.0;
    for (double c : out.counts[j]) total += c;
    if (total == 0.0) std::fill(out.counts[j].begin(), out.counts[j].end(), 1.0);
  }
  return out;
}

DirichletBelief RenormalizeBeliefs(const DirichletBelief& belief,
                                   const std::vector<std::vector<bool>>& keep) {
  return {belief.owner, Restrict(belief.params, belief.owner, keep)};
}

}  // namespace coordlab
