// Copyright 2026 The LAWNSec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LAWNSEC_REPLAY_BUFFER_H_
#define LAWNSEC_REPLAY_BUFFER_H_

#include <random>
#include <span>

#include <Eigen/Core>

namespace lawnsec {

struct Batch {
  Eigen::MatrixXd obs;       // obs_dim x n
  Eigen::MatrixXd action;    // act_dim x n
  Eigen::VectorXd reward;    // n
  Eigen::MatrixXd next_obs;  // obs_dim x n
  Eigen::VectorXd done;      // n, 1.0 for terminal transitions

  int size() const { return static_cast<int>(reward.size()); }
};

// Fixed-capacity ring of transitions; once full, each Add overwrites the
// oldest entry. Sampling is uniform with replacement.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int obs_dim, int act_dim);

  // Throws InputError on non-finite values, wrong sizes, or actions outside
  // the [-1, 1] box.
  void Add(std::span<const double> obs, std::span<const double> action,
           double reward, std::span<const double> next_obs, bool terminal);

  // Requires 1 <= n <= size().
  Batch Sample(int n, std::mt19937_64& rng) const;
  // Row i of the batch is slot indices[i].
  Batch Gather(std::span<const int> indices) const;

  int size() const { return size_; }
  int capacity() const { return capacity_; }
  // Slot that the next Add writes.
  int head() const { return head_; }
  double RewardAt(int slot) const { return reward_[slot]; }

 private:
  int capacity_;
  int obs_dim_;
  int act_dim_;
  int size_ = 0;
  int head_ = 0;
  Eigen::MatrixXd obs_;
  Eigen::MatrixXd action_;
  Eigen::VectorXd reward_;
  Eigen::MatrixXd next_obs_;
  Eigen::VectorXd done_;
};

}  // namespace lawnsec

#endif  // LAWNSEC_REPLAY_BUFFER_H_
