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

#ifndef LAWNSEC_AUGMENTATION_SPEC_H_
#define LAWNSEC_AUGMENTATION_SPEC_H_

#include <string>
#include <vector>

#include "lawnsec/dsl.h"

namespace lawnsec {

inline constexpr int kMaxAugmentedFeatures = 8;

struct FeatureExpr {
  std::string name;
  std::string text;
  dsl::Expr expr;
};

struct IntrinsicReward {
  std::string text;
  dsl::Expr expr;
  double weight = 0.0;
};

// Validated LLM output: extra observation features and one weighted
// intrinsic-reward term, both over the environment's base variables.
struct AugmentationSpec {
  std::vector<FeatureExpr> features;
  IntrinsicReward intrinsic;
};

}  // namespace lawnsec

#endif  // LAWNSEC_AUGMENTATION_SPEC_H_
