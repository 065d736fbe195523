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

#include <gtest/gtest.h>
#include <stdlib.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "lawnsec/errors.h"
#include "lawnsec/llm.h"
// After Eigen: glibc's resolv.h defines a _res macro.
#include "httplib.h"

namespace lawnsec {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lawnsec_llm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(PromptTest, DeterministicAndListsSchema) {
  const EnvConfig config;
  const PromptBundle a = BuildPrompt(config, BaseSchema());
  const PromptBundle b = BuildPrompt(config, BaseSchema());
  EXPECT_EQ(a.system, b.system);
  EXPECT_EQ(a.user, b.user);
  EXPECT_NE(a.user.find("| aav_x |"), std::string::npos);
  EXPECT_NE(a.user.find(kObjective), std::string::npos);
  EXPECT_NE(a.user.find("\"features\""), std::string::npos);
  EXPECT_NE(a.user.find("\"intrinsic\""), std::string::npos);
}

// Set LAWNSEC_UPDATE_GOLDEN=1 to rewrite the file after an intended change.
TEST(PromptTest, MatchesGoldenFile) {
  const PromptBundle p = BuildPrompt(EnvConfig{}, BaseSchema());
  const std::string text =
      "=== system ===\n" + p.system + "\n=== user ===\n" + p.user + "\n";
  const fs::path golden =
      fs::path(LAWNSEC_SOURCE_DIR) / "tests/golden/prompt_default.txt";
  if (getenv("LAWNSEC_UPDATE_GOLDEN")) {
    std::ofstream(golden, std::ios::binary) << text;
  }
  EXPECT_EQ(Slurp(golden), text);
}

TEST(PromptTest, CacheKeyDependsOnEveryInput) {
  const PromptBundle p = BuildPrompt(EnvConfig{}, BaseSchema());
  const std::string k = CacheKey(p, "m", 0.0);
  EXPECT_EQ(k.size(), 64u);
  EXPECT_EQ(k, CacheKey(p, "m", 0.0));
  EXPECT_NE(k, CacheKey(p, "m2", 0.0));
  EXPECT_NE(k, CacheKey(p, "m", 0.1));
  PromptBundle q = p;
  q.user += " ";
  EXPECT_NE(k, CacheKey(q, "m", 0.0));
}

TEST(ParseTest, AngleToJammerFeature) {
  const std::string reply = R"js({"features": [{"name": "angle_to_jammer",
      "expr": "atan2(sub(aav_y, jam_y), sub(aav_x, jam_x))"}],
      "intrinsic": {"expr": "c_sec_prev", "weight": 0.1}})js";
  std::vector<std::string> diag;
  const AugmentationSpec spec = ParseAugmentation(reply, BaseSchema(), &diag);
  ASSERT_EQ(spec.features.size(), 1u);
  EXPECT_EQ(spec.features[0].name, "angle_to_jammer");
  EXPECT_EQ(dsl::Print(spec.features[0].expr),
            "atan2(sub(aav_y, jam_y), sub(aav_x, jam_x))");
  EXPECT_DOUBLE_EQ(spec.intrinsic.weight, 0.1);
  EXPECT_TRUE(diag.empty());
}

TEST(ParseTest, WeightIsClampedWithDiagnostic) {
  for (double w : {3.5, -7.0}) {
    const std::string reply =
        R"js({"features": [], "intrinsic": {"expr": "c_sec_prev", "weight": )js" +
        std::to_string(w) + "}}";
    std::vector<std::string> diag;
    const AugmentationSpec spec = ParseAugmentation(reply, BaseSchema(), &diag);
    EXPECT_DOUBLE_EQ(spec.intrinsic.weight, w > 0 ? 1.0 : -1.0);
    ASSERT_EQ(diag.size(), 1u);
    EXPECT_NE(diag[0].find("clamp"), std::string::npos) << diag[0];
  }
}

TEST(ParseTest, NoJsonIsAnError) {
  EXPECT_THROW(ParseAugmentation("hello", BaseSchema()), AugmentationError);
  EXPECT_THROW(ParseAugmentation("{not json", BaseSchema()),
               AugmentationError);
}

TEST(ParseTest, ToleratesCodeFencesAndProse) {
  const std::string reply =
      "Sure! Here you go:\n```json\n{\"features\": [{\"name\": \"f\", "
      "\"expr\": \"mul(dist_eve, 2)\"}], \"intrinsic\": {\"expr\": "
      "\"neg(dist_bs)\", \"weight\": 0.5}}\n```\nThe brace } in prose is "
      "ignored.";
  const AugmentationSpec spec = ParseAugmentation(reply, BaseSchema());
  ASSERT_EQ(spec.features.size(), 1u);
  EXPECT_EQ(spec.intrinsic.text, "neg(dist_bs)");
}

TEST(ParseTest, ExtractHandlesBracesInsideStrings) {
  const auto j = ExtractFirstJsonObject(R"js(x {"a": "}{", "b": {"c": 1}} y)js");
  ASSERT_TRUE(j.has_value());
  EXPECT_EQ((*j)["a"], "}{");
  EXPECT_EQ((*j)["b"]["c"], 1);
  EXPECT_FALSE(ExtractFirstJsonObject("no braces").has_value());
}

TEST(ParseTest, BadFeaturesAreDroppedWithDiagnostics) {
  const std::string reply = R"js({"features": [
      {"name": "ok", "expr": "dist_eve"},
      {"name": "ok", "expr": "dist_bs"},
      {"name": "aav_x", "expr": "dist_bs"},
      {"name": "9bad", "expr": "dist_bs"},
      {"name": "unknown_var", "expr": "mul(speed, 2)"},
      {"name": "refers_to_feature", "expr": "ok"},
      {"name": "type_error", "expr": "norm(dist_bs)"},
      {"expr": "dist_bs"}],
      "intrinsic": {"expr": "c_sec_prev", "weight": 0.2}})js";
  std::vector<std::string> diag;
  const AugmentationSpec spec = ParseAugmentation(reply, BaseSchema(), &diag);
  ASSERT_EQ(spec.features.size(), 1u);
  EXPECT_EQ(spec.features[0].name, "ok");
  EXPECT_EQ(diag.size(), 7u);
}

TEST(ParseTest, AtMostEightFeaturesKept) {
  nlohmann::json j;
  for (int i = 0; i < 11; ++i) {
    j["features"].push_back(
        {{"name", "f" + std::to_string(i)}, {"expr", "dist_eve"}});
  }
  j["intrinsic"] = {{"expr", "0"}, {"weight", 0.0}};
  std::vector<std::string> diag;
  const AugmentationSpec spec =
      ParseAugmentation(j.dump(), BaseSchema(), &diag);
  EXPECT_EQ(spec.features.size(), static_cast<size_t>(kMaxAugmentedFeatures));
  EXPECT_EQ(spec.features.back().name, "f7");
  EXPECT_EQ(diag.size(), 3u);
}

TEST(ParseTest, InvalidIntrinsicOrEmptyResultIsAnError) {
  EXPECT_THROW(ParseAugmentation(R"js({"features": [], "intrinsic": {"expr":
      "log(", "weight": 0.1}})js",
                                 BaseSchema()),
               AugmentationError);
  EXPECT_THROW(ParseAugmentation(R"js({"features": []})js", BaseSchema()),
               AugmentationError);
  // Every proposed feature dropped and nothing left to apply.
  EXPECT_THROW(ParseAugmentation(R"js({"features": [{"name": "a", "expr":
      "bogus"}], "intrinsic": {"expr": "0", "weight": 0}})js",
                                 BaseSchema()),
               AugmentationError);
}

TEST(ParseTest, NullAugmentationIsAccepted) {
  const AugmentationSpec spec = ParseAugmentation(
      R"js({"features": [], "intrinsic": {"expr": "0", "weight": 0}})js",
      BaseSchema());
  EXPECT_TRUE(spec.features.empty());
  EXPECT_EQ(spec.intrinsic.weight, 0.0);
}

TEST(ParseTest, JsonRoundTrip) {
  const std::string fixture =
      Slurp(fs::path(LAWNSEC_SOURCE_DIR) / "data/fixtures/mock_augmentation.txt");
  const AugmentationSpec spec = ParseAugmentation(fixture, BaseSchema());
  EXPECT_GE(spec.features.size(), 2u);
  const std::string dumped = AugmentationToJson(spec).dump();
  const AugmentationSpec back = ParseAugmentation(dumped, BaseSchema());
  EXPECT_EQ(AugmentationToJson(back).dump(), dumped);
}

TEST(CacheTest, RoundTripIsByteIdentical) {
  const ReplyCache cache(FreshDir("cache").string());
  const std::string text = std::string("line\r\n\0binary\xff tail", 20);
  EXPECT_FALSE(cache.Get("k").has_value());
  cache.Put("k", text);
  ASSERT_TRUE(cache.Get("k").has_value());
  EXPECT_EQ(*cache.Get("k"), text);
  cache.Put("k", "second");
  EXPECT_EQ(*cache.Get("k"), "second");
}

TEST(ProviderTest, MockModeReturnsFixture) {
  const fs::path dir = FreshDir("mock");
  std::ofstream(dir / "f.txt") << "fixture body";
  ProviderConfig p;
  p.fixture_path = (dir / "f.txt").string();
  ProviderStats stats;
  EXPECT_EQ(RequestAugmentation({"s", "u"}, p, &stats), "fixture body");
  EXPECT_EQ(stats.network_attempts, 0);
  p.fixture_path = (dir / "missing.txt").string();
  EXPECT_THROW(RequestAugmentation({"s", "u"}, p), ProviderError);
}

TEST(ProviderConfigTest, CredentialNeverReadFromConfig) {
  nlohmann::json j = ProviderConfigToJson(ProviderConfig{});
  EXPECT_FALSE(j.contains("api_key"));
  j["api_key"] = "sk-should-not-be-here";
  EXPECT_THROW(ProviderConfigFromJson(j), ConfigError);
}

// Chat-completions stand-in on a loopback port.
class FakeProvider {
 public:
  explicit FakeProvider(int fail_first) : fail_first_(fail_first) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      const int n = ++calls_;
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      if (n <= fail_first_) {
        res.status = 500;
        return;
      }
      nlohmann::json reply = {
          {"choices",
           {{{"message", {{"role", "assistant"}, {"content", "reply #" +
                                                                 std::to_string(n)}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeProvider() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }
  int calls() const { return calls_; }
  const std::string& last_body() const { return last_body_; }
  const std::string& last_auth() const { return last_auth_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int fail_first_;
  std::atomic<int> calls_{0};
  std::string last_body_, last_auth_;
};

ProviderConfig RemoteConfig(const FakeProvider& fake, const std::string& tag) {
  ProviderConfig p;
  p.mode = ProviderMode::kRemote;
  p.endpoint = fake.endpoint();
  p.backoff_seconds = 0.01;
  p.timeout_seconds = 5;
  p.api_key_env = "LAWNSEC_TEST_KEY";
  p.cache_dir = FreshDir(tag).string();
  return p;
}

TEST(ProviderTest, RemoteCallThenCacheHit) {
  FakeProvider fake(0);
  setenv("LAWNSEC_TEST_KEY", "test-key", 1);
  const ProviderConfig p = RemoteConfig(fake, "remote_cache");
  const PromptBundle prompt{"sys", "user text"};
  ProviderStats first;
  EXPECT_EQ(RequestAugmentation(prompt, p, &first), "reply #1");
  EXPECT_FALSE(first.cache_hit);
  EXPECT_EQ(first.network_attempts, 1);
  EXPECT_EQ(fake.last_auth(), "Bearer test-key");
  const auto body = nlohmann::json::parse(fake.last_body());
  EXPECT_EQ(body["model"], p.model);
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "user text");

  ProviderStats second;
  EXPECT_EQ(RequestAugmentation(prompt, p, &second), "reply #1");
  EXPECT_TRUE(second.cache_hit);
  EXPECT_EQ(second.network_attempts, 0);
  EXPECT_EQ(fake.calls(), 1);
}

TEST(ProviderTest, ServerErrorsExhaustRetries) {
  FakeProvider fake(100);
  setenv("LAWNSEC_TEST_KEY", "test-key", 1);
  const ProviderConfig p = RemoteConfig(fake, "remote_500");
  try {
    RequestAugmentation({"s", "u"}, p);
    FAIL() << "expected ProviderError";
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.attempts(), 3);
    EXPECT_NE(std::string(e.what()).find("3 attempts"), std::string::npos)
        << e.what();
  }
  EXPECT_EQ(fake.calls(), 3);
  EXPECT_FALSE(ReplyCache(p.cache_dir).Get(CacheKey({"s", "u"}, p.model, 0.0)));
}

TEST(ProviderTest, TransientErrorRecovers) {
  FakeProvider fake(2);
  setenv("LAWNSEC_TEST_KEY", "test-key", 1);
  ProviderStats stats;
  EXPECT_EQ(RequestAugmentation({"s", "u"}, RemoteConfig(fake, "remote_2"),
                                &stats),
            "reply #3");
  EXPECT_EQ(stats.network_attempts, 3);
}

TEST(ProviderTest, MissingCredentialFailsBeforeNetwork) {
  FakeProvider fake(0);
  ProviderConfig p = RemoteConfig(fake, "remote_nokey");
  p.api_key_env = "LAWNSEC_TEST_KEY_UNSET";
  unsetenv("LAWNSEC_TEST_KEY_UNSET");
  EXPECT_THROW(RequestAugmentation({"s", "u"}, p), ProviderError);
  EXPECT_EQ(fake.calls(), 0);
}

}  // namespace
}  // namespace lawnsec
