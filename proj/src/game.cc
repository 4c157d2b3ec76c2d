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

#include "coordlab/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coordlab/error.h"

namespace coordlab {
namespace {

std::int64_t CheckedJointCount(std::span<const int> action_counts) {
  std::int64_t total = 1;
  for (int count : action_counts) {
    if (count < 1) throw InvalidGameError("every agent needs an action");
    if (total > std::numeric_limits<std::int64_t>::max() / count) {
      throw ResourceLimitError("joint action space overflows 64 bits");
    }
    total *= count;
  }
  return total;
}

void CheckDistribution(std::span<const double> row, const std::string& what) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidGameError(what + " has an entry outside [0,1]");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kProbabilityTolerance) {
    throw InvalidGameError(what + " sums to " + std::to_string(sum));
  }
}

}  // namespace

std::string ToString(const JointAction& joint) {
  std::string out = "<";
  for (int i = 0; i < joint.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(joint[i]);
  }
  return out + ">";
}

void StateGame::InitShape(std::vector<int> action_counts) {
  if (action_counts.empty()) throw InvalidGameError("game has no agents");
  num_joint_actions_ = CheckedJointCount(action_counts);
  action_counts_ = std::move(action_counts);
  strides_.assign(action_counts_.size(), 1);
  for (int i = NumAgents() - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * action_counts_[i + 1];
  }
}

StateGame StateGame::FromTable(
    std::vector<int> action_counts, int num_outcomes,
    std::vector<std::vector<double>> transitions,
    std::vector<double> utilities,
    std::optional<std::vector<Rational>> exact_utilities) {
  StateGame game;
  game.InitShape(std::move(action_counts));
  if (game.num_joint_actions_ > kDenseJointActionLimit) {
    throw ResourceLimitError("dense table requested for " +
                             std::to_string(game.num_joint_actions_) +
                             " joint actions");
  }
  if (num_outcomes < 1) throw InvalidGameError("game has no outcomes");
  game.num_outcomes_ = num_outcomes;
  if (static_cast<std::int64_t>(transitions.size()) !=
      game.num_joint_actions_) {
    throw InvalidGameError("expected " +
                           std::to_string(game.num_joint_actions_) +
                           " transition rows, got " +
                           std::to_string(transitions.size()));
  }
  if (static_cast<int>(utilities.size()) != num_outcomes) {
    throw InvalidGameError("utility vector length differs from outcome count");
  }
  for (double u : utilities) {
    if (!std::isfinite(u)) throw InvalidGameError("utility is not finite");
  }
  game.transitions_.reserve(game.num_joint_actions_ * num_outcomes);
  for (std::size_t r = 0; r < transitions.size(); ++r) {
    const auto& row = transitions[r];
    if (static_cast<int>(row.size()) != num_outcomes) {
      throw InvalidGameError("transition row " + std::to_string(r) +
                             " has the wrong length");
    }
    CheckDistribution(row, "transition row " + std::to_string(r));
    game.transitions_.insert(game.transitions_.end(), row.begin(), row.end());
  }
  if (exact_utilities) {
    if (static_cast<int>(exact_utilities->size()) != num_outcomes) {
      throw InvalidGameError("rational utility vector has the wrong length");
    }
    for (int s = 0; s < num_outcomes; ++s) {
      if (std::fabs(ToDouble((*exact_utilities)[s]) - utilities[s]) >
          1e-9 * std::max(1.0, std::fabs(utilities[s]))) {
        throw InvalidGameError("rational utility " + std::to_string(s) +
                               " disagrees with its decimal value");
      }
    }
  }
  game.utilities_ = std::move(utilities);
  game.exact_utilities_ = std::move(exact_utilities);
  game.ComputePayoffs();
  return game;
}

StateGame StateGame::FromPureCoordination(PureCoordination structure) {
  if (structure.num_moves < 1) {
    throw InvalidParameterError("pure coordination needs at least one move");
  }
  if (structure.moves.empty()) {
    throw InvalidParameterError("pure coordination needs agents");
  }
  std::vector<int> counts;
  for (const auto& labels : structure.moves) {
    for (int m : labels) {
      if (m < 0 || m >= structure.num_moves) {
        throw InvalidParameterError("move label out of range");
      }
    }
    counts.push_back(static_cast<int>(labels.size()));
  }
  StateGame game;
  game.InitShape(std::move(counts));
  game.num_outcomes_ = structure.num_moves + 1;
  game.utilities_.assign(structure.num_moves, structure.coordinated_value);
  game.utilities_.push_back(structure.uncoordinated_value);
  game.pure_coordination_ = std::move(structure);
  if (game.num_joint_actions_ <= kDenseJointActionLimit) {
    game.transitions_.assign(game.num_joint_actions_ * game.num_outcomes_,
                             0.0);
    for (std::int64_t idx = 0; idx < game.num_joint_actions_; ++idx) {
      int s = game.CoordinatedMove(game.JointFromIndex(idx));
      game.transitions_[idx * game.num_outcomes_ + s] = 1.0;
    }
    game.ComputePayoffs();
  }
  return game;
}

void StateGame::ComputePayoffs() {
  payoffs_.assign(num_joint_actions_, 0.0);
  for (std::int64_t idx = 0; idx < num_joint_actions_; ++idx) {
    auto row = TransitionRow(idx);
    double value = 0.0;
    for (int s = 0; s < num_outcomes_; ++s) value += row[s] * utilities_[s];
    payoffs_[idx] = value;
  }

  std::vector<Rational> exact_u;
  if (exact_utilities_) {
    exact_u = *exact_utilities_;
  } else {
    for (double u : utilities_) {
      auto r = RationalFromDouble(u);
      if (!r) return;
      exact_u.push_back(*r);
    }
  }
  std::vector<Rational> exact(num_joint_actions_);
  try {
    for (std::int64_t idx = 0; idx < num_joint_actions_; ++idx) {
      auto row = TransitionRow(idx);
      Rational value = 0;
      for (int s = 0; s < num_outcomes_; ++s) {
        if (row[s] == 0.0) continue;
        auto p = RationalFromDouble(row[s]);
        if (!p) return;
        value += *p * exact_u[s];
      }
      exact[idx] = value;
    }
  } catch (const boost::bad_rational&) {
    return;
  }
  exact_payoffs_ = std::move(exact);
}

void StateGame::CheckJointAction(const JointAction& joint) const {
  if (joint.size() != NumAgents()) {
    throw InvalidActionError("joint action " + ToString(joint) + " has " +
                             std::to_string(joint.size()) +
                             " components, game has " +
                             std::to_string(NumAgents()) + " agents");
  }
  for (int i = 0; i < NumAgents(); ++i) {
    if (joint[i] < 0 || joint[i] >= action_counts_[i]) {
      throw InvalidActionError("action " + std::to_string(joint[i]) +
                               " of agent " + std::to_string(i) +
                               " out of range");
    }
  }
}

std::int64_t StateGame::JointIndex(const JointAction& joint) const {
  CheckJointAction(joint);
  std::int64_t idx = 0;
  for (int i = 0; i < NumAgents(); ++i) idx += joint[i] * strides_[i];
  return idx;
}

JointAction StateGame::JointFromIndex(std::int64_t index) const {
  if (index < 0 || index >= num_joint_actions_) {
    throw InvalidActionError("joint action index out of range");
  }
  JointAction joint;
  joint.actions.resize(NumAgents());
  for (int i = 0; i < NumAgents(); ++i) {
    joint.actions[i] = static_cast<Action>(index / strides_[i]);
    index %= strides_[i];
  }
  return joint;
}

std::span<const double> StateGame::TransitionRow(std::int64_t index) const {
  if (!IsDense()) {
    throw ResourceLimitError("game has no dense transition table");
  }
  return {transitions_.data() + index * num_outcomes_,
          static_cast<std::size_t>(num_outcomes_)};
}

std::vector<OutcomeProbability> StateGame::Outcomes(
    const JointAction& joint) const {
  CheckJointAction(joint);
  std::vector<OutcomeProbability> out;
  if (IsDense()) {
    auto row = TransitionRow(JointIndex(joint));
    for (int s = 0; s < num_outcomes_; ++s) {
      if (row[s] > 0.0) out.push_back({s, row[s]});
    }
    return out;
  }
  out.push_back({CoordinatedMove(joint), 1.0});
  return out;
}

int StateGame::CoordinatedMove(const JointAction& joint) const {
  const auto& pc = *pure_coordination_;
  int move = pc.moves[0][joint[0]];
  for (int i = 1; i < NumAgents(); ++i) {
    if (pc.moves[i][joint[i]] != move) return pc.num_moves;
  }
  return move;
}

double StateGame::TransitionProbability(const JointAction& joint,
                                        int outcome) const {
  if (outcome < 0 || outcome >= num_outcomes_) {
    throw InvalidParameterError("outcome index out of range");
  }
  if (IsDense()) return TransitionRow(JointIndex(joint))[outcome];
  for (const auto& [s, p] : Outcomes(joint)) {
    if (s == outcome) return p;
  }
  return 0.0;
}

void ForEachJointAction(std::span<const int> action_counts,
                        const std::function<void(const JointAction&)>& visit) {
  JointAction joint;
  joint.actions.assign(action_counts.size(), 0);
  const int n = static_cast<int>(action_counts.size());
  while (true) {
    visit(joint);
    int i = n - 1;
    while (i >= 0 && ++joint.actions[i] == action_counts[i]) {
      joint.actions[i] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

double ExpectedUtility(const StateGame& game, const JointAction& joint) {
  game.CheckJointAction(joint);
  if (game.IsDense()) return game.Payoff(game.JointIndex(joint));
  double value = 0.0;
  for (const auto& [s, p] : game.Outcomes(joint)) {
    value += p * game.Utilities()[s];
  }
  return value;
}

PayoffTensor ToStrategicForm(const StateGame& game) {
  if (!game.IsDense()) {
    throw ResourceLimitError("strategic form of " +
                             std::to_string(game.NumJointActions()) +
                             " joint actions is not materialized");
  }
  PayoffTensor tensor;
  tensor.action_counts = game.ActionCounts();
  tensor.values.resize(game.NumJointActions());
  for (std::int64_t idx = 0; idx < game.NumJointActions(); ++idx) {
    tensor.values[idx] = game.Payoff(idx);
  }
  return tensor;
}

std::vector<JointAction> OptimalJointActions(const StateGame& game,
                                             double tol) {
  if (tol < 0.0) throw InvalidParameterError("tolerance must be >= 0");
  std::vector<JointAction> result;
  if (!game.IsDense()) {
    const auto& pc = *game.PureCoordinationStructure();
    // Moves every agent can still play.
    std::vector<std::vector<int>> index_of(
        game.NumAgents(), std::vector<int>(pc.num_moves, -1));
    for (int i = 0; i < game.NumAgents(); ++i) {
      for (int a = 0; a < game.NumActions(i); ++a) {
        index_of[i][pc.moves[i][a]] = a;
      }
    }
    for (int m = 0; m < pc.num_moves; ++m) {
      JointAction joint;
      bool complete = true;
      for (int i = 0; i < game.NumAgents() && complete; ++i) {
        complete = index_of[i][m] >= 0;
        joint.actions.push_back(index_of[i][m]);
      }
      if (complete) result.push_back(std::move(joint));
    }
    bool coordinated_best = pc.coordinated_value > pc.uncoordinated_value + tol;
    if (result.empty() || !coordinated_best) {
      throw ResourceLimitError(
          "optimal set of an implicit game is not the coordinated moves");
    }
    std::sort(result.begin(), result.end());
    return result;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t idx = 0; idx < game.NumJointActions(); ++idx) {
    best = std::max(best, game.Payoff(idx));
  }
  for (std::int64_t idx = 0; idx < game.NumJointActions(); ++idx) {
    if (game.Payoff(idx) >= best - tol) {
      result.push_back(game.JointFromIndex(idx));
    }
  }
  return result;
}

void ValidateProfile(const StateGame& game, const MixedProfile& profile,
                     std::optional<int> excluded) {
  if (static_cast<int>(profile.strategies.size()) != game.NumAgents()) {
    throw InvalidParameterError("profile has the wrong number of agents");
  }
  for (int i = 0; i < game.NumAgents(); ++i) {
    const auto& dist = profile.strategies[i];
    if (excluded && *excluded == i) {
      if (!dist.empty()) {
        throw InvalidParameterError("reduced profile includes its owner");
      }
      continue;
    }
    if (static_cast<int>(dist.size()) != game.NumActions(i)) {
      throw InvalidParameterError("strategy of agent " + std::to_string(i) +
                                  " has the wrong length");
    }
    double sum = 0.0;
    for (double p : dist) {
      if (!(p >= 0.0)) {
        throw InvalidParameterError("negative probability in profile");
      }
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kProbabilityTolerance) {
      throw InvalidParameterError("strategy of agent " + std::to_string(i) +
                                  " sums to " + std::to_string(sum));
    }
  }
}

std::vector<double> ActionValues(const StateGame& game, int agent,
                                 const MixedProfile& others) {
  if (agent < 0 || agent >= game.NumAgents()) {
    throw InvalidParameterError("agent index out of range");
  }
  const int n = game.NumAgents();
  std::vector<double> values(game.NumActions(agent), 0.0);
  if (!game.IsDense()) {
    // Closed form: U(m) = d + (c - d) * prod_j P_j(move m).
    const auto& pc = *game.PureCoordinationStructure();
    std::vector<double> all_match(pc.num_moves, 1.0);
    for (int j = 0; j < n; ++j) {
      if (j == agent) continue;
      std::vector<double> by_move(pc.num_moves, 0.0);
      for (int a = 0; a < game.NumActions(j); ++a) {
        by_move[pc.moves[j][a]] += others.strategies[j][a];
      }
      for (int m = 0; m < pc.num_moves; ++m) all_match[m] *= by_move[m];
    }
    for (int a = 0; a < game.NumActions(agent); ++a) {
      double match = all_match[pc.moves[agent][a]];
      values[a] = pc.uncoordinated_value +
                  (pc.coordinated_value - pc.uncoordinated_value) * match;
    }
    return values;
  }
  std::int64_t idx = 0;
  ForEachJointAction(game.ActionCounts(), [&](const JointAction& joint) {
    double weight = 1.0;
    for (int j = 0; j < n && weight > 0.0; ++j) {
      if (j != agent) weight *= others.strategies[j][joint[j]];
    }
    if (weight > 0.0) values[joint[agent]] += weight * game.Payoff(idx);
    ++idx;
  });
  return values;
}

std::vector<Rational> ExactActionValues(
    const StateGame& game, int agent,
    const std::vector<std::vector<Rational>>& other_weights) {
  if (!game.ExactPayoffs()) {
    throw UnsupportedError("game has no exact strategic form");
  }
  const auto& payoffs = *game.ExactPayoffs();
  const int n = game.NumAgents();
  std::vector<Rational> values(game.NumActions(agent), Rational(0));
  std::int64_t idx = 0;
  ForEachJointAction(game.ActionCounts(), [&](const JointAction& joint) {
    Rational weight(1);
    for (int j = 0; j < n && weight != Rational(0); ++j) {
      if (j != agent) weight *= other_weights[j][joint[j]];
    }
    if (weight != Rational(0)) values[joint[agent]] += weight * payoffs[idx];
    ++idx;
  });
  return values;
}

std::vector<Action> BestResponses(const StateGame& game, int agent,
                                  const MixedProfile& others, double tol) {
  auto values = ActionValues(game, agent, others);
  double best = *std::max_element(values.begin(), values.end());
  std::vector<Action> result;
  for (int a = 0; a < static_cast<int>(values.size()); ++a) {
    if (values[a] >= best - tol) result.push_back(a);
  }
  return result;
}

double ProfileErrorProbability(const StateGame& game,
                               const MixedProfile& profile,
                               std::span<const JointAction> ojas) {
  double coordinated = 0.0;
  for (const auto& joint : ojas) {
    game.CheckJointAction(joint);
    double p = 1.0;
    for (int i = 0; i < game.NumAgents() && p > 0.0; ++i) {
      p *= profile.strategies[i][joint[i]];
    }
    coordinated += p;
  }
  return std::clamp(1.0 - coordinated, 0.0, 1.0);
}

StateGame MakePureCoordination(int n, double coordinated_value,
                               double uncoordinated_value) {
  if (n < 2) throw InvalidParameterError("pure coordination needs n >= 2");
  if (!(coordinated_value > uncoordinated_value)) {
    throw InvalidParameterError(
        "coordinated value must exceed the uncoordinated value");
  }
  PureCoordination pc;
  pc.num_moves = n;
  pc.coordinated_value = coordinated_value;
  pc.uncoordinated_value = uncoordinated_value;
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  pc.moves.assign(n, labels);
  return StateGame::FromPureCoordination(std::move(pc));
}

StateGame MakeAsymmetric2x2(double coordinated_value) {
  if (!(coordinated_value > 1.0)) {
    throw InvalidParameterError(
        "coordinated value must exceed 1 for coordination to be optimal");
  }
  std::vector<std::vector<double>> rows = {
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  return StateGame::FromTable({2, 2}, 4, std::move(rows),
                              {coordinated_value, 1.0, 0.0,
                               coordinated_value});
}

StateGame MakeStochastic2x2(double fail_p) {
  if (!(fail_p >= 0.0 && fail_p < 0.5)) {
    throw InvalidParameterError("failure probability must lie in [0, 0.5)");
  }
  std::vector<std::vector<double>> rows;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::vector<double> row(4, 0.0);
      for (int loc_a = 0; loc_a < 2; ++loc_a) {
        for (int loc_b = 0; loc_b < 2; ++loc_b) {
          double pa = loc_a == a ? 1.0 - fail_p : fail_p;
          double pb = loc_b == b ? 1.0 - fail_p : fail_p;
          row[2 * loc_a + loc_b] = pa * pb;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return StateGame::FromTable({2, 2}, 4, std::move(rows), {1, 0, 0, 1});
}

Convention3x3Game MakeConvention3x3(const Convention3x3Params& params) {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(params.slip) || !in_unit(params.majority_good) ||
      !in_unit(params.uniform_noise)) {
    throw InvalidParameterError("3x3 convention parameters must lie in [0,1]");
  }
  constexpr int kMoves = 3;
  constexpr int kOutcomes = 6;
  std::vector<std::vector<double>> rows;
  ForEachJointAction(std::vector<int>{3, 3, 3}, [&](const JointAction& joint) {
    std::vector<int> tally(kMoves, 0);
    for (Action a : joint.actions) ++tally[a];
    std::vector<double> row(kOutcomes, 0.0);
    auto majority = std::max_element(tally.begin(), tally.end());
    int move = static_cast<int>(majority - tally.begin());
    if (*majority == 3) {
      row[move] = 1.0 - params.slip;
      row[kMoves + move] = params.slip;
    } else if (*majority == 2) {
      row[move] = params.majority_good;
      row[kMoves + move] = 1.0 - params.majority_good;
    } else {
      for (int m = 0; m < kMoves; ++m) row[kMoves + m] = 1.0 / kMoves;
    }
    for (double& p : row) {
      p = (1.0 - params.uniform_noise) * p + params.uniform_noise / kOutcomes;
    }
    rows.push_back(std::move(row));
  });
  Convention3x3Game result{
      StateGame::FromTable({3, 3, 3}, kOutcomes, std::move(rows),
                           {1, 1, 1, 0, 0, 0}),
      false};
  auto ojas = OptimalJointActions(result.game);
  for (std::size_t x = 0; x < ojas.size(); ++x) {
    for (std::size_t y = x + 1; y < ojas.size(); ++y) {
      auto rx = result.game.TransitionRow(result.game.JointIndex(ojas[x]));
      auto ry = result.game.TransitionRow(result.game.JointIndex(ojas[y]));
      bool same = true;
      for (int s = 0; s < kOutcomes && same; ++s) {
        same = std::fabs(rx[s] - ry[s]) <= kProbabilityTolerance;
      }
      result.ojas_indistinguishable |= same;
    }
  }
  return result;
}

StateGame MakeTwinOjaGame(double separation) {
  if (!(separation > 0.5 && separation <= 1.0)) {
    throw InvalidParameterError("separation must lie in (0.5, 1]");
  }
  // Outcomes: good_a, good_b, bad.
  std::vector<std::vector<double>> rows;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b) {
        rows.push_back({0, 0, 1});
      } else if (a < 2) {
        rows.push_back({separation, 1.0 - separation, 0});
      } else {
        rows.push_back({1.0 - separation, separation, 0});
      }
    }
  }
  return StateGame::FromTable({3, 3}, 3, std::move(rows), {1, 1, 0});
}

}  // namespace coordlab
