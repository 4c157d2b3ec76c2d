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

#ifndef COORDLAB_RANDOM_H_
#define COORDLAB_RANDOM_H_

#include <cstdint>
#include <span>

namespace coordlab {

// Counter-based stream: draw k of stream (seed, stream_id) is a pure function
// of (seed, stream_id, k), so trials reproduce regardless of scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  std::uint64_t Draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Inverse-CDF sample: smallest index whose cumulative weight exceeds
// u * total. Zero-weight entries are never returned.
int SampleIndex(std::span<const double> weights, double u);

}  // namespace coordlab

#endif  // COORDLAB_RANDOM_H_
