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

#include "coordlab/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "coordlab/error.h"

namespace coordlab {

RoundRecord PlayRound(Team& team, CounterRng& rng,
                      const RoundControl& control) {
  RoundRecord record;
  auto choices = team.CurrentChoices();
  record.choices = team.ToOriginal(choices);
  record.error = team.ErrorProbability(record.choices);

  JointAction current;
  for (const auto& dist : choices) {
    current.actions.push_back(SampleIndex(dist, rng.Uniform()));
  }
  if (control.forced_action) current = team.ToCurrent(*control.forced_action);
  record.joint = team.ToOriginal(current);

  double u = rng.Uniform();
  auto outcomes = team.Original().Outcomes(record.joint);
  if (control.forced_outcome) {
    record.outcome = *control.forced_outcome;
  } else if (control.outcome_mode == OutcomeMode::kModal) {
    auto modal = std::max_element(
        outcomes.begin(), outcomes.end(),
        [](const auto& x, const auto& y) { return x.probability < y.probability; });
    record.outcome = modal->outcome;
  } else {
    std::vector<double> weights;
    for (const auto& o : outcomes) weights.push_back(o.probability);
    record.outcome = outcomes[SampleIndex(weights, u)].outcome;
  }

  team.Observe(current, record.outcome);
  if (team.Conventions()) {
    record.surviving = team.Conventions()->surviving;
    record.frozen = team.Conventions()->frozen;
  }
  return record;
}

TrialRecord RunTrial(const Experiment& experiment, int trial_index) {
  if (experiment.horizon < 1) {
    throw InvalidParameterError("horizon must be >= 1");
  }
  Team team(experiment.game, experiment.learner, experiment.conventions);
  CounterRng rng(experiment.seed, static_cast<std::uint64_t>(trial_index));
  TrialRecord trial;
  trial.trial = trial_index;
  if (team.Frozen()) trial.frozen_round = 0;
  for (int round = 1; round <= experiment.horizon; ++round) {
    RoundRecord record = PlayRound(team, rng);
    record.round = round;
    if (record.frozen && trial.frozen_round < 0) trial.frozen_round = round;
    trial.rounds.push_back(std::move(record));
  }
  return trial;
}

CurveResult RunExperiment(const Experiment& experiment,
                          const RunOptions& options) {
  if (experiment.trials < 1) throw InvalidParameterError("trials must be >= 1");
  if (experiment.horizon < 1) {
    throw InvalidParameterError("horizon must be >= 1");
  }
  const int trials = experiment.trials;
  const int horizon = experiment.horizon;
  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, trials);

  std::vector<std::vector<double>> errors(trials);
  std::vector<int> frozen_round(trials, -1);
  std::vector<TrialRecord> kept(options.trial_sink ? trials : 0);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int t = next++; t < trials; t = next++) {
      try {
        TrialRecord record = RunTrial(experiment, t);
        errors[t].reserve(horizon);
        for (const auto& r : record.rounds) errors[t].push_back(r.error);
        frozen_round[t] = record.frozen_round;
        if (options.trial_sink) kept[t] = std::move(record);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  CurveResult curve;
  curve.config_hash = experiment.config_hash;
  curve.seed = experiment.seed;
  curve.trials = trials;
  for (int k = 0; k < horizon; ++k) {
    double sum = 0.0;
    int frozen = 0;
    for (int t = 0; t < trials; ++t) {
      sum += errors[t][k];
      if (frozen_round[t] >= 0 && frozen_round[t] <= k + 1) ++frozen;
    }
    double mean = sum / trials;
    double sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      double d = errors[t][k] - mean;
      sq += d * d;
    }
    double se = trials > 1 ? std::sqrt(sq / (trials - 1) / trials) : 0.0;
    curve.mean_error.push_back(std::clamp(mean, 0.0, 1.0));
    curve.standard_error.push_back(se);
    curve.frozen_fraction.push_back(static_cast<double>(frozen) / trials);
  }
  if (options.trial_sink) {
    for (const auto& record : kept) options.trial_sink(record);
  }
  return curve;
}

std::string FormatValue(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void WriteCurveCsv(std::ostream& out, const CurveResult& curve) {
  out << "round,mean_error,stderr,frozen_fraction\n";
  for (std::size_t k = 0; k < curve.mean_error.size(); ++k) {
    out << (k + 1) << ',' << FormatValue(curve.mean_error[k]) << ','
        << FormatValue(curve.standard_error[k]) << ','
        << FormatValue(curve.frozen_fraction[k]) << '\n';
  }
}

nlohmann::json TrialToJson(const TrialRecord& trial) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : trial.rounds) {
    nlohmann::json survivors = nlohmann::json::array();
    for (const auto& joint : r.surviving) survivors.push_back(joint.actions);
    rounds.push_back({{"round", r.round},
                      {"joint_action", r.joint.actions},
                      {"outcome", r.outcome},
                      {"choices", r.choices.strategies},
                      {"error", r.error},
                      {"surviving", std::move(survivors)},
                      {"frozen", r.frozen}});
  }
  return {{"trial", trial.trial},
          {"frozen_round", trial.frozen_round},
          {"rounds", std::move(rounds)}};
}

}  // namespace coordlab
