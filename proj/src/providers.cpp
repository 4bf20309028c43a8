// Copyright 2026 The erkit Authors. All Rights Reserved.
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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "erkit/errors.hpp"
#include "erkit/harness.hpp"

namespace erkit {

namespace {

using nlohmann::json;

// OpenAI-style chat-completions client. The endpoint is the scheme://host
// base; the request goes to /v1/chat/completions unless the endpoint already
// carries a path.
class HttpProvider : public Provider {
 public:
  HttpProvider(ProviderSpec spec, std::string api_key)
      : spec_(std::move(spec)), api_key_(std::move(api_key)) {
    std::size_t scheme_end = spec_.endpoint.find("://");
    std::size_t path_start = scheme_end == std::string::npos
                                 ? spec_.endpoint.find('/')
                                 : spec_.endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      base_ = spec_.endpoint;
      path_ = "/v1/chat/completions";
    } else {
      base_ = spec_.endpoint.substr(0, path_start);
      path_ = spec_.endpoint.substr(path_start);
      if (path_ == "/") path_ = "/v1/chat/completions";
    }
  }

  const std::string& id() const override { return spec_.id; }

  std::string send(const std::vector<Message>& messages) override {
    json body;
    body["model"] = spec_.model;
    json list = json::array();
    for (const Message& message : messages) {
      list.push_back({{"role", std::string(to_string(message.role))},
                      {"content", message.content}});
    }
    body["messages"] = std::move(list);
    if (spec_.temperature >= 0) body["temperature"] = spec_.temperature;

    httplib::Client client(base_);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

    std::string last_error;
    const int attempts = 1 + std::max(0, spec_.max_retries);
    for (int attempt = 1; attempt <= attempts; ++attempt) {
      auto response = client.Post(path_, headers, body.dump(), "application/json");
      if (!response) {
        last_error = "transport error: " + httplib::to_string(response.error());
        continue;
      }
      if (response->status >= 500) {
        last_error = "server error " + std::to_string(response->status);
        continue;
      }
      if (response->status != 200) {
        throw Error(ErrorCode::ProviderError,
                    "provider '" + spec_.id + "' returned HTTP " +
                        std::to_string(response->status) + " after " +
                        std::to_string(attempt) + " attempt(s): " + response->body);
      }
      json doc = json::parse(response->body, nullptr, /*allow_exceptions=*/false);
      if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty() ||
          !doc["choices"][0].contains("message")) {
        throw Error(ErrorCode::ProviderError,
                    "provider '" + spec_.id + "' returned an unrecognized response body");
      }
      return doc["choices"][0]["message"].value("content", std::string{});
    }
    throw Error(ErrorCode::ProviderError,
                "provider '" + spec_.id + "' failed after " + std::to_string(attempts) +
                    " attempt(s): " + last_error);
  }

 private:
  ProviderSpec spec_;
  std::string api_key_;
  std::string base_;
  std::string path_;
};

}  // namespace

std::unique_ptr<Provider> make_provider(const ProviderSpec& spec) {
  if (spec.kind == "replay") {
    return std::make_unique<ReplayProvider>(spec.id, spec.replay_dir);
  }
  if (spec.endpoint.empty() || spec.model.empty()) {
    throw Error(ErrorCode::ConfigError,
                "http provider '" + spec.id + "' needs 'endpoint' and 'model'");
  }
  if (spec.credential_env.empty()) {
    throw Error(ErrorCode::ConfigError,
                "http provider '" + spec.id + "' needs 'credential_env'");
  }
  const char* key = std::getenv(spec.credential_env.c_str());
  if (!key || !*key) {
    throw Error(ErrorCode::ProviderError,
                "credential environment variable '" + spec.credential_env +
                    "' for provider '" + spec.id + "' is not set");
  }
  return std::make_unique<HttpProvider>(spec, key);
}

}  // namespace erkit
