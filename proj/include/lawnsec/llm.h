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

// LLM-driven state and reward augmentation: prompt construction, a
// chat-completions client (remote, with disk cache) or fixture replay
// (mock), and validation of the reply into an AugmentationSpec.

#ifndef LAWNSEC_LLM_H_
#define LAWNSEC_LLM_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lawnsec/augmentation_spec.h"
#include "lawnsec/dsl.h"
#include "lawnsec/env.h"

namespace lawnsec {

inline constexpr int kPromptTemplateVersion = 1;
inline constexpr const char* kObjective =
    "maximize the sum secrecy channel capacity while reaching the destination";

enum class ProviderMode { kRemote, kMock };

struct ProviderConfig {
  ProviderMode mode = ProviderMode::kMock;
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4-1106-preview";
  double temperature = 0.0;
  int max_retries = 3;          // total attempts per request
  double backoff_seconds = 1.0; // doubled after each failed attempt
  double timeout_seconds = 120.0;
  std::string cache_dir = ".lawnsec_cache";
  std::string fixture_path;     // mock mode
  std::string api_key_env = "LLM_API_KEY";

  // Throws ConfigError.
  void Validate() const;
};

nlohmann::json ProviderConfigToJson(const ProviderConfig& config);
ProviderConfig ProviderConfigFromJson(const nlohmann::json& j);

struct PromptBundle {
  std::string system;
  std::string user;
};

PromptBundle BuildPrompt(const EnvConfig& config, const dsl::VarSchema& schema);

// Hex SHA-256 over the prompt, model and temperature.
std::string CacheKey(const PromptBundle& prompt, const std::string& model,
                     double temperature);

// Reply texts stored as <dir>/<key>.txt, written via temp file + rename.
class ReplyCache {
 public:
  explicit ReplyCache(std::string dir) : dir_(std::move(dir)) {}
  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, const std::string& text) const;
  std::string PathFor(const std::string& key) const;

 private:
  std::string dir_;
};

struct ProviderStats {
  bool cache_hit = false;
  int network_attempts = 0;
};

// Mock mode returns the fixture file's content. Remote mode requires the
// credential environment variable, consults the cache, then POSTs
// {model, messages, temperature} with up to max_retries attempts and
// exponential backoff on transport errors, 429 and 5xx. Throws
// ProviderError.
std::string RequestAugmentation(const PromptBundle& prompt,
                                const ProviderConfig& provider,
                                ProviderStats* stats = nullptr);

// Text of the first balanced JSON object in `reply` that parses.
std::optional<nlohmann::json> ExtractFirstJsonObject(std::string_view reply);

// Reply contract: {"features": [{"name", "expr"}...],
//                  "intrinsic": {"expr", "weight"}}.
// Invalid or excess features are dropped and the weight is clamped to
// [-1, 1], each with a diagnostic. Throws AugmentationError when no JSON
// object is found, the intrinsic reward is missing or fails validation, or
// every proposed feature was dropped and the weight is zero.
AugmentationSpec ParseAugmentation(std::string_view reply,
                                   const dsl::VarSchema& schema,
                                   std::vector<std::string>* diagnostics =
                                       nullptr);

// Inverse of the reply contract; ParseAugmentation(dump) restores the spec.
nlohmann::json AugmentationToJson(const AugmentationSpec& spec);

}  // namespace lawnsec

#endif  // LAWNSEC_LLM_H_
