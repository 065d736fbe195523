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

#include "lawnsec/replay_buffer.h"

#include <cmath>
#include <string>

#include "lawnsec/errors.h"

namespace lawnsec {
namespace {

void CheckVector(std::span<const double> v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim) {
    throw InputError(std::string(what) + " has the wrong dimension");
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string(what) + " not finite");
  }
}

}  // namespace

ReplayBuffer::ReplayBuffer(int capacity, int obs_dim, int act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
  if (capacity < 1 || obs_dim < 1 || act_dim < 1) {
    throw InputError("replay buffer dimensions must be >= 1");
  }
  obs_.resize(obs_dim, capacity);
  action_.resize(act_dim, capacity);
  reward_.resize(capacity);
  next_obs_.resize(obs_dim, capacity);
  done_.resize(capacity);
}

void ReplayBuffer::Add(std::span<const double> obs,
                       std::span<const double> action, double reward,
                       std::span<const double> next_obs, bool terminal) {
  CheckVector(obs, obs_dim_, "obs");
  CheckVector(action, act_dim_, "action");
  CheckVector(next_obs, obs_dim_, "next_obs");
  if (!std::isfinite(reward)) throw InputError("reward not finite");
  for (double a : action) {
    if (a < -1.0 || a > 1.0) throw InputError("action outside [-1, 1]");
  }
  for (int i = 0; i < obs_dim_; ++i) {
    obs_(i, head_) = obs[i];
    next_obs_(i, head_) = next_obs[i];
  }
  for (int i = 0; i < act_dim_; ++i) action_(i, head_) = action[i];
  reward_[head_] = reward;
  done_[head_] = terminal ? 1.0 : 0.0;
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

Batch ReplayBuffer::Gather(std::span<const int> indices) const {
  const int n = static_cast<int>(indices.size());
  Batch b;
  b.obs.resize(obs_dim_, n);
  b.action.resize(act_dim_, n);
  b.reward.resize(n);
  b.next_obs.resize(obs_dim_, n);
  b.done.resize(n);
  for (int k = 0; k < n; ++k) {
    const int i = indices[k];
    if (i < 0 || i >= size_) throw InputError("replay index out of range");
    b.obs.col(k) = obs_.col(i);
    b.action.col(k) = action_.col(i);
    b.reward[k] = reward_[i];
    b.next_obs.col(k) = next_obs_.col(i);
    b.done[k] = done_[i];
  }
  return b;
}

Batch ReplayBuffer::Sample(int n, std::mt19937_64& rng) const {
  if (n < 1 || n > size_) {
    throw UsageError("sample of " + std::to_string(n) + " from a buffer of " +
                     std::to_string(size_));
  }
  std::uniform_int_distribution<int> pick(0, size_ - 1);
  std::vector<int> idx(n);
  for (int& i : idx) i = pick(rng);
  return Gather(idx);
}

}  // namespace lawnsec
