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

#include "lawnsec/llm.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "lawnsec/errors.h"

namespace lawnsec {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string Xy(const Pose& p) { return "(" + Num(p.x) + ", " + Num(p.y) + ")"; }
std::string Xyz(const Pose& p) {
  return "(" + Num(p.x) + ", " + Num(p.y) + ", " + Num(p.z) + ")";
}

const std::map<std::string, std::string>& VariableDescriptions() {
  static const std::map<std::string, std::string> d = {
      {"aav_x", "AAV x position / area diagonal"},
      {"aav_y", "AAV y position / area diagonal"},
      {"aav_z", "AAV altitude / area diagonal"},
      {"dest_dx", "(destination x - AAV x) / area diagonal"},
      {"dest_dy", "(destination y - AAV y) / area diagonal"},
      {"dist_jam", "3-D distance AAV to jammer / area diagonal"},
      {"dist_eve", "3-D distance AAV to eavesdropper / area diagonal"},
      {"dist_bs", "3-D distance AAV to base station / area diagonal"},
      {"c_sec_prev", "secrecy rate achieved in the previous step (bits/s/Hz)"},
      {"c_legit_prev", "AAV link capacity in the previous step (bits/s/Hz)"},
      {"c_eve_prev",
       "eavesdropper link capacity in the previous step (bits/s/Hz)"},
      {"t_frac", "elapsed steps / horizon, in [0, 1]"},
      {"dest_x", "destination x / area diagonal"},
      {"dest_y", "destination y / area diagonal"},
      {"bs_x", "base station x / area diagonal"},
      {"bs_y", "base station y / area diagonal"},
      {"bs_z", "base station height / area diagonal"},
      {"jam_x", "jammer x / area diagonal"},
      {"jam_y", "jammer y / area diagonal"},
      {"jam_z", "jammer height / area diagonal"},
      {"eve_x", "eavesdropper x / area diagonal"},
      {"eve_y", "eavesdropper y / area diagonal"},
      {"eve_z", "eavesdropper altitude / area diagonal"},
      {"aav_pos", "AAV position (x, y, z) / area diagonal"},
      {"dest_pos", "destination position (x, y, z) / area diagonal"},
      {"bs_pos", "base station position (x, y, z) / area diagonal"},
      {"jam_pos", "jammer position (x, y, z) / area diagonal"},
      {"eve_pos", "eavesdropper position (x, y, z) / area diagonal"},
  };
  return d;
}

std::string Describe(const std::string& name) {
  const auto& d = VariableDescriptions();
  const auto it = d.find(name);
  return it == d.end() ? "(undocumented)" : it->second;
}

std::string SlotName(dsl::SlotKind k) {
  return k == dsl::SlotKind::kVector ? "vector" : "scalar";
}

struct Url {
  std::string scheme_host_port;
  std::string path;
};

Url SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("provider endpoint must be an absolute URL");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string Sha256Hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw ProviderError("sha256 failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProviderError("cannot read fixture '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string RemoteCall(const PromptBundle& prompt,
                       const ProviderConfig& provider,
                       const std::string& api_key, ProviderStats* stats) {
  const Url url = SplitUrl(provider.endpoint);
  const json body = {
      {"model", provider.model},
      {"messages",
       json::array({{{"role", "system"}, {"content", prompt.system}},
                    {{"role", "user"}, {"content", prompt.user}}})},
      {"temperature", provider.temperature},
  };
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};

  std::string last_error;
  double delay = provider.backoff_seconds;
  for (int attempt = 1; attempt <= provider.max_retries; ++attempt) {
    if (stats != nullptr) ++stats->network_attempts;
    httplib::Client client(url.scheme_host_port);
    const auto timeout = std::chrono::duration<double>(provider.timeout_seconds);
    client.set_connection_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    const auto res =
        client.Post(url.path, headers, payload, "application/json");
    bool retryable = true;
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      json envelope;
      try {
        envelope = json::parse(res->body);
        return envelope.at("choices").at(0).at("message").at("content")
            .get<std::string>();
      } catch (const json::exception& e) {
        throw ProviderError(
            std::string("malformed provider envelope: ") + e.what(), attempt);
      }
    } else {
      last_error = "HTTP status " + std::to_string(res->status);
      retryable = res->status == 429 || res->status >= 500;
    }
    if (!retryable) {
      throw ProviderError("provider request failed: " + last_error +
                              " (attempt " + std::to_string(attempt) + ")",
                          attempt);
    }
    if (attempt < provider.max_retries && delay > 0.0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      delay *= 2.0;
    }
  }
  throw ProviderError("provider request failed after " +
                          std::to_string(provider.max_retries) +
                          " attempts: " + last_error,
                      provider.max_retries);
}

}  // namespace

void ProviderConfig::Validate() const {
  if (mode == ProviderMode::kRemote) {
    if (endpoint.empty()) throw ConfigError("provider.endpoint is required");
    SplitUrl(endpoint);
    if (model.empty()) throw ConfigError("provider.model is required");
  }
  if (mode == ProviderMode::kMock && fixture_path.empty()) {
    throw ConfigError("provider.fixture_path is required in mock mode");
  }
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("provider.temperature must be >= 0");
  }
  if (max_retries < 1) throw ConfigError("provider.max_retries must be >= 1");
  if (!(backoff_seconds >= 0.0) || !(timeout_seconds > 0.0)) {
    throw ConfigError("provider timing values out of range");
  }
}

json ProviderConfigToJson(const ProviderConfig& c) {
  return json{
      {"mode", c.mode == ProviderMode::kRemote ? "remote" : "mock"},
      {"endpoint", c.endpoint},
      {"model", c.model},
      {"temperature", c.temperature},
      {"max_retries", c.max_retries},
      {"backoff_seconds", c.backoff_seconds},
      {"timeout_seconds", c.timeout_seconds},
      {"cache_dir", c.cache_dir},
      {"fixture_path", c.fixture_path},
      {"api_key_env", c.api_key_env},
  };
}

ProviderConfig ProviderConfigFromJson(const json& j) {
  ProviderConfig c;
  try {
    if (j.contains("mode")) {
      const auto mode = j.at("mode").get<std::string>();
      if (mode == "remote") {
        c.mode = ProviderMode::kRemote;
      } else if (mode == "mock") {
        c.mode = ProviderMode::kMock;
      } else {
        throw ConfigError("provider.mode must be remote or mock");
      }
    }
    auto read = [&j](const char* key, auto& field) {
      if (j.contains(key)) {
        field = j.at(key).get<std::decay_t<decltype(field)>>();
      }
    };
    read("endpoint", c.endpoint);
    read("model", c.model);
    read("temperature", c.temperature);
    read("max_retries", c.max_retries);
    read("backoff_seconds", c.backoff_seconds);
    read("timeout_seconds", c.timeout_seconds);
    read("cache_dir", c.cache_dir);
    read("fixture_path", c.fixture_path);
    read("api_key_env", c.api_key_env);
    if (j.contains("api_key")) {
      throw ConfigError(
          "provider credentials must come from the environment, not the "
          "config file");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("provider config: ") + e.what());
  }
  return c;
}

PromptBundle BuildPrompt(const EnvConfig& c, const dsl::VarSchema& schema) {
  PromptBundle p;
  p.system =
      "You are a wireless-security and reinforcement-learning expert. You "
      "design semantic state features and an intrinsic reward for a deep "
      "reinforcement learning agent. Every feature and the intrinsic reward "
      "must be written in the expression language described by the user. "
      "Answer with one strict JSON object and nothing else.\n"
      "Prompt template version: " +
      std::to_string(kPromptTemplateVersion) + "\n";

  std::ostringstream u;
  u << "## Scenario\n"
    << "A ground base station with a uniform linear array of "
    << c.radio.num_antennas
    << " antennas (axis along +x, half-wavelength spacing) sends confidential "
       "control signals to an aerial autonomous vehicle (AAV) by "
       "beamforming. An aerial eavesdropper tries to intercept the signal and "
       "a ground jammer interferes with every receiver. Links follow the "
       "free-space path loss model.\n"
    << "- Area: " << Num(c.area_width) << " m x " << Num(c.area_height)
    << " m. AAV altitude " << Num(c.aav_altitude) << " m, maximum speed "
    << Num(c.v_max) << " m/s, step " << Num(c.dt) << " s, horizon "
    << c.horizon << " steps.\n"
    << "- Start " << Xy(c.start) << ", destination " << Xy(c.destination)
    << ", arrival radius " << Num(c.arrival_radius) << " m.\n"
    << "- Base station " << Xyz(c.bs) << ", transmit power budget "
    << Num(c.radio.p_max) << " W, noise power " << Num(c.radio.noise_power)
    << " W.\n"
    << "- Jammer " << Xyz(c.jammer) << " transmitting "
    << Num(c.radio.jammer_power) << " W; eavesdropper " << Xyz(c.eve)
    << ".\n"
    << "- The agent controls the AAV velocity and the beamforming vector each "
       "step. Base reward per step: "
    << Num(c.reward.w_sec) << " * secrecy rate + " << Num(c.reward.w_prog)
    << " * progress toward the destination (in units of one full-speed step) "
       "+ "
    << Num(c.reward.arrival_bonus) << " on arrival. The episode ends on "
       "arrival or at the horizon.\n\n";

  u << "## Objective\n" << kObjective << "\n\n";

  u << "## State variables\n"
    << "| name | kind | meaning |\n|---|---|---|\n";
  for (const auto& name : schema.scalars()) {
    u << "| " << name << " | scalar | " << Describe(name) << " |\n";
  }
  for (const auto& [name, dim] : schema.vectors()) {
    u << "| " << name << " | vector[" << dim << "] | " << Describe(name)
      << " |\n";
  }
  u << "\n";

  u << "## Expression language\n"
    << "Prefix function calls only: name(arg, ...). Variables are bare "
       "names from the table above; numbers are decimal literals. No infix "
       "operators, conditionals or user-defined functions. Every expression "
       "must evaluate to a scalar; vector variables may appear only as "
       "direct arguments of dot, norm, dist and angle_between. At most "
    << dsl::kMaxNodes << " nodes and nesting depth " << dsl::kMaxDepth
    << ". Division by ~0, log of x <= 0 and sqrt of x < 0 are errors.\n"
    << "Functions:\n";
  for (const auto& info : dsl::Builtins()) {
    u << "- " << info.name << "(";
    for (int i = 0; i < info.arity; ++i) {
      if (i > 0) u << ", ";
      u << SlotName(info.slots[i]);
    }
    u << ")\n";
  }
  u << "Angles are in radians.\n\n";

  u << "## Task\n"
    << "1. Propose up to " << kMaxAugmentedFeatures
    << " additional state features that capture mission-relevant concepts "
       "the handcrafted variables miss (for example the angle between the AAV "
       "and the jammer). Each needs a new unique name matching "
       "[a-z][a-z0-9_]* that does not collide with a state variable. Features "
       "may reference only the state variables above.\n"
    << "2. Propose one intrinsic reward expression over the same variables, "
       "evaluated after every step and added to the base reward with a weight "
       "in [-1, 1].\n\n"
    << "Reply with strict JSON only, exactly in this shape:\n"
    << "{\"features\": [{\"name\": \"...\", \"expr\": \"...\"}], "
       "\"intrinsic\": {\"expr\": \"...\", \"weight\": 0.0}}\n";
  p.user = u.str();
  return p;
}

std::string CacheKey(const PromptBundle& prompt, const std::string& model,
                     double temperature) {
  char temp[64];
  std::snprintf(temp, sizeof(temp), "%.17g", temperature);
  return Sha256Hex("lawnsec-cache-v1\n" + model + "\n" + temp + "\n" +
                   prompt.system + "\n\x1e\n" + prompt.user);
}

std::string ReplyCache::PathFor(const std::string& key) const {
  return (fs::path(dir_) / (key + ".txt")).string();
}

std::optional<std::string> ReplyCache::Get(const std::string& key) const {
  std::ifstream in(PathFor(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ReplyCache::Put(const std::string& key, const std::string& text) const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw ProviderError("cannot create cache dir '" + dir_ + "'");
  std::random_device rd;
  const std::string tmp =
      PathFor(key) + ".tmp" + std::to_string(rd()) + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    if (!out) throw ProviderError("cannot write cache file '" + tmp + "'");
  }
  fs::rename(tmp, PathFor(key), ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ProviderError("cannot move cache file into place");
  }
}

std::string RequestAugmentation(const PromptBundle& prompt,
                                const ProviderConfig& provider,
                                ProviderStats* stats) {
  provider.Validate();
  if (provider.mode == ProviderMode::kMock) {
    return ReadFile(provider.fixture_path);
  }
  const char* key = std::getenv(provider.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ProviderError("credential environment variable " +
                        provider.api_key_env + " is not set");
  }
  const ReplyCache cache(provider.cache_dir);
  const std::string cache_key =
      CacheKey(prompt, provider.model, provider.temperature);
  if (auto hit = cache.Get(cache_key)) {
    if (stats != nullptr) stats->cache_hit = true;
    return *hit;
  }
  std::string reply = RemoteCall(prompt, provider, key, stats);
  cache.Put(cache_key, reply);
  return reply;
}

std::optional<json> ExtractFirstJsonObject(std::string_view reply) {
  for (std::size_t start = reply.find('{'); start != std::string_view::npos;
       start = reply.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < reply.size(); ++i) {
      const char c = reply[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        try {
          json j = json::parse(reply.substr(start, i - start + 1));
          if (j.is_object()) return j;
        } catch (const json::exception&) {
        }
        break;
      }
    }
  }
  return std::nullopt;
}

AugmentationSpec ParseAugmentation(std::string_view reply,
                                   const dsl::VarSchema& schema,
                                   std::vector<std::string>* diagnostics) {
  std::vector<std::string> local;
  std::vector<std::string>& diag = diagnostics ? *diagnostics : local;
  const auto root = ExtractFirstJsonObject(reply);
  if (!root) throw AugmentationError("no JSON object found in reply");

  auto compile = [&schema](const std::string& text) -> dsl::Expr {
    dsl::Expr e = dsl::Parse(text);
    const auto issues = dsl::Validate(e, schema);
    if (!issues.empty()) {
      throw dsl::ExprError(issues.front().kind, issues.front().message);
    }
    return e;
  };

  AugmentationSpec spec;
  int proposed = 0;
  if (root->contains("features")) {
    const json& feats = root->at("features");
    if (!feats.is_array()) {
      throw AugmentationError("'features' must be an array");
    }
    for (const json& f : feats) {
      ++proposed;
      if (!f.is_object() || !f.contains("name") || !f.contains("expr") ||
          !f.at("name").is_string() || !f.at("expr").is_string()) {
        diag.push_back("dropped feature #" + std::to_string(proposed) +
                       ": needs string 'name' and 'expr'");
        continue;
      }
      const std::string name = f.at("name").get<std::string>();
      const std::string text = f.at("expr").get<std::string>();
      if (static_cast<int>(spec.features.size()) >= kMaxAugmentedFeatures) {
        diag.push_back("dropped feature '" + name + "': more than " +
                       std::to_string(kMaxAugmentedFeatures) + " features");
        continue;
      }
      if (!dsl::IsValidName(name)) {
        diag.push_back("dropped feature '" + name + "': invalid name");
        continue;
      }
      if (schema.Contains(name)) {
        diag.push_back("dropped feature '" + name +
                       "': collides with a state variable");
        continue;
      }
      if (std::any_of(spec.features.begin(), spec.features.end(),
                      [&](const FeatureExpr& g) { return g.name == name; })) {
        diag.push_back("dropped feature '" + name + "': duplicate name");
        continue;
      }
      try {
        spec.features.push_back({name, text, compile(text)});
      } catch (const dsl::ExprError& e) {
        diag.push_back("dropped feature '" + name + "': " + e.what());
      }
    }
  }

  if (!root->contains("intrinsic") || !root->at("intrinsic").is_object()) {
    throw AugmentationError("reply has no 'intrinsic' object");
  }
  const json& in = root->at("intrinsic");
  if (!in.contains("expr") || !in.at("expr").is_string()) {
    throw AugmentationError("intrinsic reward needs a string 'expr'");
  }
  if (!in.contains("weight") || !in.at("weight").is_number()) {
    throw AugmentationError("intrinsic reward needs a numeric 'weight'");
  }
  spec.intrinsic.text = in.at("expr").get<std::string>();
  try {
    spec.intrinsic.expr = compile(spec.intrinsic.text);
  } catch (const dsl::ExprError& e) {
    throw AugmentationError(std::string("invalid intrinsic reward: ") +
                            e.what());
  }
  double weight = in.at("weight").get<double>();
  if (!std::isfinite(weight)) {
    throw AugmentationError("intrinsic weight must be finite");
  }
  if (std::abs(weight) > 1.0) {
    const double clamped = std::clamp(weight, -1.0, 1.0);
    diag.push_back("intrinsic weight " + Num(weight) + " clamped to " +
                   Num(clamped));
    weight = clamped;
  }
  spec.intrinsic.weight = weight;

  if (proposed > 0 && spec.features.empty() && weight == 0.0) {
    throw AugmentationError(
        "no usable augmentation: every feature was dropped and the intrinsic "
        "weight is zero");
  }
  return spec;
}

json AugmentationToJson(const AugmentationSpec& spec) {
  json feats = json::array();
  for (const auto& f : spec.features) {
    feats.push_back({{"name", f.name}, {"expr", f.text}});
  }
  return json{{"features", feats},
              {"intrinsic",
               {{"expr", spec.intrinsic.text},
                {"weight", spec.intrinsic.weight}}}};
}

}  // namespace lawnsec
