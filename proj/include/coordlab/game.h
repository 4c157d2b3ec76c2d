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

#ifndef COORDLAB_GAME_H_
#define COORDLAB_GAME_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coordlab/rational.h"

namespace coordlab {

using Action = int;

// Absolute margin under which two expected utilities count as tied.
inline constexpr double kTieTolerance = 1e-9;
// Probability vectors must sum to one within this.
inline constexpr double kProbabilityTolerance = 1e-12;
// Games with more joint actions than this keep no dense transition table.
inline constexpr std::int64_t kDenseJointActionLimit = 100'000;

struct JointAction {
  std::vector<Action> actions;

  Action operator[](int agent) const { return actions[agent]; }
  int size() const { return static_cast<int>(actions.size()); }
  auto operator<=>(const JointAction&) const = default;
};

std::string ToString(const JointAction& joint);

// One distribution per agent over that agent's actions. A reduced profile
// (the view agent i holds of everybody else) leaves entry i empty.
struct MixedProfile {
  std::vector<std::vector<double>> strategies;
};

// Expected utility of every joint action, lexicographic joint order.
struct PayoffTensor {
  std::vector<int> action_counts;
  std::vector<double> values;
};

struct OutcomeProbability {
  int outcome = 0;
  double probability = 0.0;
};

// Closed form of an n-agent pure coordination game: every agent picking the
// same move m reaches outcome m (utility `coordinated_value`); anything else
// reaches outcome `num_moves` (utility `uncoordinated_value`). `moves[i][a]`
// is the move label of agent i's a-th action, which lets a game restricted to
// a subset of actions keep its closed form.
struct PureCoordination {
  int num_moves = 0;
  double coordinated_value = 1.0;
  double uncoordinated_value = 0.0;
  std::vector<std::vector<int>> moves;
};

// A fully cooperative single-stage state game. Immutable once built.
class StateGame {
 public:
  // Dense game. `transitions` has one row per joint action in lexicographic
  // order (last agent varies fastest), each a distribution over outcomes.
  static StateGame FromTable(
      std::vector<int> action_counts, int num_outcomes,
      std::vector<std::vector<double>> transitions,
      std::vector<double> utilities,
      std::optional<std::vector<Rational>> exact_utilities = std::nullopt);

  // Pure coordination game; the dense table is materialized only when the
  // joint action count is within kDenseJointActionLimit.
  static StateGame FromPureCoordination(PureCoordination structure);

  int NumAgents() const { return static_cast<int>(action_counts_.size()); }
  int NumActions(int agent) const { return action_counts_[agent]; }
  const std::vector<int>& ActionCounts() const { return action_counts_; }
  int NumOutcomes() const { return num_outcomes_; }
  std::int64_t NumJointActions() const { return num_joint_actions_; }
  bool IsDense() const { return !transitions_.empty(); }

  const std::vector<double>& Utilities() const { return utilities_; }
  const std::optional<std::vector<Rational>>& ExactUtilities() const {
    return exact_utilities_;
  }
  const std::optional<PureCoordination>& PureCoordinationStructure() const {
    return pure_coordination_;
  }

  // Throws InvalidActionError unless `joint` names one action per agent,
  // each in range.
  void CheckJointAction(const JointAction& joint) const;
  std::int64_t JointIndex(const JointAction& joint) const;
  JointAction JointFromIndex(std::int64_t index) const;

  // Positive-probability outcomes of `joint`, ascending by outcome.
  std::vector<OutcomeProbability> Outcomes(const JointAction& joint) const;
  double TransitionProbability(const JointAction& joint, int outcome) const;

  // Dense games only.
  std::span<const double> TransitionRow(std::int64_t index) const;
  double Payoff(std::int64_t index) const { return payoffs_[index]; }
  // Strategic form in exact arithmetic, present when every utility and
  // transition probability has a small-denominator rational form.
  const std::optional<std::vector<Rational>>& ExactPayoffs() const {
    return exact_payoffs_;
  }

 private:
  StateGame() = default;
  void InitShape(std::vector<int> action_counts);
  void ComputePayoffs();
  // Outcome index reached by `joint` in a pure coordination game.
  int CoordinatedMove(const JointAction& joint) const;

  std::vector<int> action_counts_;
  std::vector<std::int64_t> strides_;
  std::int64_t num_joint_actions_ = 0;
  int num_outcomes_ = 0;
  std::vector<double> transitions_;  // row-major, NumJointActions x outcomes
  std::vector<double> utilities_;
  std::optional<std::vector<Rational>> exact_utilities_;
  std::vector<double> payoffs_;
  std::optional<std::vector<Rational>> exact_payoffs_;
  std::optional<PureCoordination> pure_coordination_;
};

// Visits every joint action of `action_counts` in lexicographic order.
void ForEachJointAction(std::span<const int> action_counts,
                        const std::function<void(const JointAction&)>& visit);

double ExpectedUtility(const StateGame& game, const JointAction& joint);

// Throws ResourceLimitError for games without a dense table.
PayoffTensor ToStrategicForm(const StateGame& game);

// Joint actions whose expected utility is within `tol` of the maximum,
// in lexicographic order.
std::vector<JointAction> OptimalJointActions(const StateGame& game,
                                             double tol = kTieTolerance);

// Expected utility of each of `agent`'s actions when every other agent j
// independently plays others.strategies[j]. Entry `agent` is ignored.
std::vector<double> ActionValues(const StateGame& game, int agent,
                                 const MixedProfile& others);

// Same in exact arithmetic, with unnormalized nonnegative weights for the
// other agents; the result is scaled by the product of their weight sums.
// Requires a game with ExactPayoffs().
std::vector<Rational> ExactActionValues(
    const StateGame& game, int agent,
    const std::vector<std::vector<Rational>>& other_weights);

std::vector<Action> BestResponses(const StateGame& game, int agent,
                                  const MixedProfile& others,
                                  double tol = kTieTolerance);

// Probability that independent sampling from `profile` yields a joint action
// outside `ojas`.
double ProfileErrorProbability(const StateGame& game,
                               const MixedProfile& profile,
                               std::span<const JointAction> ojas);

// Checks shape and normalization. With `excluded` set, that agent's entry
// must be empty (a reduced profile).
void ValidateProfile(const StateGame& game, const MixedProfile& profile,
                     std::optional<int> excluded = std::nullopt);

// n agents with n actions each.
StateGame MakePureCoordination(int n, double coordinated_value = 1.0,
                               double uncoordinated_value = 0.0);

// Deterministic 2x2, utilities v on <l,l> and <r,r>, 1 on <l,r>, 0 on <r,l>.
StateGame MakeAsymmetric2x2(double coordinated_value);

// Two agents move left or right and each lands on the intended side with
// probability 1 - fail_p. Outcomes are the location pairs ll, lr, rl, rr.
StateGame MakeStochastic2x2(double fail_p);

inline constexpr int kOutcomeLL = 0;
inline constexpr int kOutcomeLR = 1;
inline constexpr int kOutcomeRL = 2;
inline constexpr int kOutcomeRR = 3;

// Three agents, three moves, outcomes good_0..good_2 (utility 1) followed by
// bad_0..bad_2 (utility 0).
//  - all agents on m: good_m w.p. 1 - slip, else bad_m;
//  - two agents on m: good_m w.p. majority_good, else bad_m;
//  - no majority: a uniformly chosen bad state.
// With probability `uniform_noise` the outcome is instead uniform over all six
// states.
struct Convention3x3Params {
  double slip = 0.1;
  double majority_good = 0.15;
  double uniform_noise = 0.0;
};

struct Convention3x3Game {
  StateGame game;
  // Set when two optimal joint actions share an outcome distribution, so
  // likelihood pruning can never separate them.
  bool ojas_indistinguishable = false;
};

Convention3x3Game MakeConvention3x3(const Convention3x3Params& params = {});

// Two agents, three actions. <0,0> and <1,1> reach good_a w.p. `separation`
// and good_b otherwise; <2,2> reverses the two; mismatches reach a bad
// state. The first two optimal joint actions are outcome-identical.
StateGame MakeTwinOjaGame(double separation = 0.9);

}  // namespace coordlab

#endif  // COORDLAB_GAME_H_
