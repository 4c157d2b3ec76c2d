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

#ifndef COORDLAB_EXACT_H_
#define COORDLAB_EXACT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "coordlab/error.h"
#include "coordlab/game.h"
#include "coordlab/learners.h"
#include "coordlab/rational.h"

namespace coordlab {

struct ExactOptions {
  int horizon = 50;
  // Branches lighter than this are dropped and their mass reported.
  double prune_mass = 1e-12;
  std::size_t max_nodes = 1'000'000;
  // Merge grid for fractional (outcome-driven) beliefs.
  double quantum = 1e-9;
};

// Per-round results of the forward recursion over the joint belief chain.
// All vectors are indexed by round - 1.
struct ExactCurve {
  std::vector<double> error;
  // Mass dropped before the round was evaluated; error[k] is low by at most
  // this much.
  std::vector<double> pruned_mass;
  // Mass whose conventions are frozen after the round.
  std::vector<double> frozen_fraction;
  // Mass of nodes where at least one agent randomizes in the round.
  std::vector<double> randomizing_mass;
  std::vector<std::size_t> frontier_size;
};

class FrontierOverflowError : public ResourceLimitError {
 public:
  FrontierOverflowError(const std::string& what, ExactCurve partial)
      : ResourceLimitError(what), partial_(std::move(partial)) {}
  const ExactCurve& Partial() const { return partial_; }

 private:
  ExactCurve partial_;
};

// Exact error probability per round: from every belief node, branch over each
// joint action in the support of the agents' choices and each reachable
// outcome, merging nodes with equal keys. Observable learners are keyed
// exactly and break ties in rational arithmetic. Throws UnsupportedError for
// games without a dense table and FrontierOverflowError when the frontier
// exceeds options.max_nodes.
ExactCurve ExactFailureCurve(std::shared_ptr<const StateGame> game,
                             const LearnerConfig& learner, bool conventions,
                             const ExactOptions& options = {});

// Rounds (1-based) in which some positive mass randomizes.
std::vector<int> RandomizationRounds(const ExactCurve& curve);

// Header `round,mean_error,stderr,frozen_fraction,pruned_mass`.
void WriteExactCsv(std::ostream& out, const ExactCurve& curve);

// Plateau law of Bayesian learners with <1,1> priors in a deterministic 2x2
// coordination game with coordinated utility a and uncoordinated utilities b
// (<l,r>) and c (<r,l>).
//
// Beliefs can only reach the indifference point
//   P(other plays r) = (a - c) / ((a - b) + (a - c))
// when the observation count is a multiple of that fraction's reduced
// denominator p = ((a - b) + (a - c)) / g, g = gcd(a - b, a - c). With
// integer updates starting from <1,1> the first such round is p - 1, and
// each later one comes p rounds after the previous. Each gives coordination
// probability 1/2.
struct PlateauPrediction {
  std::int64_t period = 0;
  int first_randomization_round = 0;
  // schedule[k - 1]: probability the round-k joint action is uncoordinated.
  std::vector<double> schedule;

  // (1/2)^floor((k + 1) / p).
  double ErrorAt(int round) const;
  // (1/2)^floor(k / p): probability that no coordinated joint action has been
  // played before round k.
  double FailureBefore(int round) const;
};

PlateauPrediction PredictPlateau(const Rational& a, const Rational& b,
                                 const Rational& c, int horizon);

}  // namespace coordlab

#endif  // COORDLAB_EXACT_H_
