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

#include "coordlab/exact.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "coordlab/harness.h"
#include "coordlab/team.h"

namespace coordlab {
namespace {

using NodeKey = std::vector<std::int64_t>;

struct Node {
  Team team;
  double mass;
};

void AppendBeliefKey(const LearnerState& state, double quantum,
                     NodeKey& key) {
  const AgentTable& table = std::visit(
      [](const auto& belief) -> const AgentTable& {
        using T = std::decay_t<decltype(belief)>;
        if constexpr (std::is_same_v<T, FrequencyBelief>) {
          return belief.counts;
        } else {
          return belief.params;
        }
      },
      state.belief);
  const bool exact = ObservesActions(state.kind);
  for (const auto& row : table) {
    key.push_back(-1 - static_cast<std::int64_t>(row.size()));
    for (double value : row) {
      if (exact) {
        if (auto r = RationalFromDouble(value)) {
          key.push_back(r->numerator());
          key.push_back(r->denominator());
          continue;
        }
      }
      key.push_back(std::llround(value / quantum));
      key.push_back(0);
    }
  }
}

NodeKey KeyOf(const Team& team, double quantum) {
  NodeKey key;
  if (const auto& conv = team.Conventions()) {
    // Survivors as positions in the initial target list.
    const auto& targets = team.Targets();
    std::size_t pos = 0;
    for (const auto& joint : conv->surviving) {
      while (pos < targets.size() && targets[pos] != joint) ++pos;
      key.push_back(static_cast<std::int64_t>(pos));
    }
    key.push_back(conv->frozen ? -2 : -3);
  }
  if (team.Settled()) return key;
  for (const auto& state : team.Learners()) {
    AppendBeliefKey(state, quantum, key);
  }
  return key;
}

}  // namespace

ExactCurve ExactFailureCurve(std::shared_ptr<const StateGame> game,
                             const LearnerConfig& learner, bool conventions,
                             const ExactOptions& options) {
  if (!game->IsDense()) {
    throw UnsupportedError(
        "exact analysis enumerates joint actions; this game has " +
        std::to_string(game->NumJointActions()) +
        " and no dense transition table");
  }
  if (options.horizon < 1) throw InvalidParameterError("horizon must be >= 1");
  if (!(options.prune_mass >= 0.0)) {
    throw InvalidParameterError("prune mass must be >= 0");
  }

  ExactCurve curve;
  std::vector<Node> frontier;
  frontier.push_back({Team(game, learner, conventions), 1.0});
  double dropped = 0.0;

  for (int round = 1; round <= options.horizon; ++round) {
    double error = 0.0;
    double randomizing = 0.0;
    std::vector<std::vector<std::vector<double>>> choices;
    choices.reserve(frontier.size());
    for (const auto& node : frontier) {
      auto dist = node.team.CurrentChoices(/*exact_ties=*/true);
      error += node.mass * node.team.ErrorProbability(node.team.ToOriginal(dist));
      for (const auto& d : dist) {
        int support = 0;
        for (double p : d) support += p > 0.0;
        if (support > 1) {
          randomizing += node.mass;
          break;
        }
      }
      choices.push_back(std::move(dist));
    }
    curve.error.push_back(std::clamp(error, 0.0, 1.0));
    curve.pruned_mass.push_back(dropped);
    curve.randomizing_mass.push_back(randomizing);
    curve.frontier_size.push_back(frontier.size());

    std::map<NodeKey, std::size_t> index;
    std::vector<Node> next;
    double frozen = 0.0;
    for (std::size_t n = 0; n < frontier.size(); ++n) {
      const Node& node = frontier[n];
      const auto& dist = choices[n];
      std::vector<std::vector<Action>> support(dist.size());
      std::vector<int> sizes;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        for (int a = 0; a < static_cast<int>(dist[i].size()); ++a) {
          if (dist[i][a] > 0.0) support[i].push_back(a);
        }
        sizes.push_back(static_cast<int>(support[i].size()));
      }
      ForEachJointAction(sizes, [&](const JointAction& pick) {
        JointAction current;
        double p_joint = node.mass;
        for (std::size_t i = 0; i < dist.size(); ++i) {
          Action a = support[i][pick[static_cast<int>(i)]];
          current.actions.push_back(a);
          p_joint *= dist[i][a];
        }
        JointAction original = node.team.ToOriginal(current);
        for (const auto& [outcome, p] : node.team.Original().Outcomes(original)) {
          double mass = p_joint * p;
          if (mass < options.prune_mass) {
            dropped += mass;
            continue;
          }
          Team child = node.team;
          child.Observe(current, outcome);
          NodeKey key = KeyOf(child, options.quantum);
          auto [it, inserted] = index.try_emplace(std::move(key), next.size());
          if (inserted) {
            if (child.Frozen()) frozen += mass;
            next.push_back({std::move(child), mass});
          } else {
            if (next[it->second].team.Frozen()) frozen += mass;
            next[it->second].mass += mass;
          }
          if (next.size() > options.max_nodes) {
            curve.frozen_fraction.push_back(frozen);
            throw FrontierOverflowError(
                "exact frontier exceeded " + std::to_string(options.max_nodes) +
                    " nodes in round " + std::to_string(round),
                curve);
          }
        }
      });
    }
    curve.frozen_fraction.push_back(frozen);
    frontier = std::move(next);
  }
  return curve;
}

std::vector<int> RandomizationRounds(const ExactCurve& curve) {
  std::vector<int> rounds;
  for (std::size_t k = 0; k < curve.randomizing_mass.size(); ++k) {
    if (curve.randomizing_mass[k] > 0.0) rounds.push_back(static_cast<int>(k) + 1);
  }
  return rounds;
}

void WriteExactCsv(std::ostream& out, const ExactCurve& curve) {
  out << "round,mean_error,stderr,frozen_fraction,pruned_mass\n";
  for (std::size_t k = 0; k < curve.error.size(); ++k) {
    out << (k + 1) << ',' << FormatValue(curve.error[k]) << ",0,"
        << FormatValue(curve.frozen_fraction[k]) << ','
        << FormatValue(curve.pruned_mass[k]) << '\n';
  }
}

double PlateauPrediction::ErrorAt(int round) const {
  return std::ldexp(1.0, -static_cast<int>((round + 1) / period));
}

double PlateauPrediction::FailureBefore(int round) const {
  return std::ldexp(1.0, -static_cast<int>(round / period));
}

PlateauPrediction PredictPlateau(const Rational& a, const Rational& b,
                                 const Rational& c, int horizon) {
  if (a <= b || a <= c) {
    throw InvalidParameterError(
        "coordinated utility must exceed both uncoordinated utilities");
  }
  // Over a common denominator the gaps are integers; their gcd g fixes the
  // reduced indifference fraction (a - c) / ((a - b) + (a - c)).
  const Rational gap_b = a - b;
  const Rational gap_c = a - c;
  const std::int64_t common =
      std::lcm(gap_b.denominator(), gap_c.denominator());
  const std::int64_t int_b = gap_b.numerator() * (common / gap_b.denominator());
  const std::int64_t int_c = gap_c.numerator() * (common / gap_c.denominator());
  const std::int64_t g = std::gcd(int_b, int_c);

  PlateauPrediction prediction;
  prediction.period = (int_b + int_c) / g;
  prediction.first_randomization_round =
      static_cast<int>(prediction.period) - 1;
  for (int k = 1; k <= horizon; ++k) {
    prediction.schedule.push_back(prediction.ErrorAt(k));
  }
  return prediction;
}

}  // namespace coordlab
