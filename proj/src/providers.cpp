/*
 * Copyright 2026 The SceneForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sceneforge/providers.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "sceneforge/errors.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("provider endpoint is not a URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

/// POSTs `body` with retries. Returns the parsed JSON body of a 2xx reply.
nlohmann::json post_with_retries(const ProviderConfig& config, const nlohmann::json& body) {
    const auto [origin, path] = split_url(config.endpoint);
    httplib::Headers headers;
    if (const char* key = std::getenv(config.api_key_env.c_str()); key != nullptr && *key != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    const auto payload = body.dump();
    const int attempts = config.max_retries + 1;
    const auto timeout = std::chrono::duration<double>(config.timeout_s);
    std::string last_error;
    int last_status = 0;

    for (int attempt = 1; attempt <= attempts; ++attempt) {
        if (attempt > 1) {
            const double wait = config.backoff_base_s * static_cast<double>(1 << (attempt - 2));
            std::this_thread::sleep_for(std::chrono::duration<double>(wait));
        }
        httplib::Client client(origin);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
        client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_status = 0;
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_status = res->status;
            last_error = res->body;
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw HttpError(res->status,
                            "provider returned HTTP " + std::to_string(res->status) + ": " + res->body,
                            attempt);
        }
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponseError(std::string("provider reply is not JSON: ") + e.what(), attempt);
        }
    }
    if (last_status != 0) {
        throw HttpError(last_status,
                        "provider returned HTTP " + std::to_string(last_status) + " after " +
                            std::to_string(attempts) + " attempts: " + last_error,
                        attempts);
    }
    throw TimeoutError("provider unreachable after " + std::to_string(attempts) +
                           " attempts (" + last_error + ")",
                       attempts);
}

std::vector<EmbeddingVector> vectors_from_response(const nlohmann::json& response,
                                                   std::size_t expected, int attempts) {
    try {
        const auto& data = response.at("data");
        // Recorded transcripts hold already-normalized vectors; reusing them
        // verbatim keeps replayed runs bit-identical to the recording.
        const bool stored_unit = response.value("normalized", false);
        if (!data.is_array() || data.size() != expected) {
            throw MalformedResponseError("embeddings reply has " + std::to_string(data.size()) +
                                             " vectors, expected " + std::to_string(expected),
                                         attempts);
        }
        std::vector<EmbeddingVector> out(expected);
        std::vector<bool> seen(expected, false);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto& item = data[i];
            const std::size_t index = item.contains("index") ? item.at("index").get<std::size_t>() : i;
            if (index >= expected || seen[index]) {
                throw MalformedResponseError("embeddings reply has a bad index", attempts);
            }
            seen[index] = true;
            if (stored_unit) {
                out[index] = EmbeddingVector::from_stored(item.at("embedding").get<std::vector<float>>());
            } else {
                const auto raw = item.at("embedding").get<std::vector<double>>();
                out[index] = EmbeddingVector::normalized(std::span<const double>(raw));
            }
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponseError(std::string("malformed embeddings reply: ") + e.what(), attempts);
    } catch (const DegenerateTextError& e) {
        throw MalformedResponseError(std::string("embeddings reply: ") + e.what(), attempts);
    } catch (const FormatError& e) {
        throw MalformedResponseError(std::string("embeddings reply: ") + e.what(), attempts);
    }
}

std::string content_from_response(const nlohmann::json& response, int attempts) {
    try {
        return response.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponseError(std::string("malformed chat reply: ") + e.what(), attempts);
    }
}

}  // namespace

void ProviderConfig::validate() const {
    if (kind != "mock" && kind != "http" && kind != "replay") {
        throw ConfigError("provider kind must be mock, http or replay, got '" + kind + "'");
    }
    if (!(timeout_s > 0.0)) throw ConfigError("provider timeout_s must be positive");
    if (max_retries < 0) throw ConfigError("provider max_retries must be >= 0");
    if (backoff_base_s < 0.0) throw ConfigError("provider backoff_base_s must be >= 0");
    if (kind == "http" && endpoint.empty()) throw ConfigError("http provider needs an endpoint");
}

ProviderConfig ProviderConfig::from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
    ProviderConfig c;
    try {
        c.kind = j.value("kind", c.kind);
        c.endpoint = j.value("endpoint", c.endpoint);
        c.model = j.value("model", c.model);
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        c.timeout_s = j.value("timeout_s", c.timeout_s);
        c.max_retries = j.value("max_retries", c.max_retries);
        c.backoff_base_s = j.value("backoff_base_s", c.backoff_base_s);
        c.dimension = j.value("dimension", c.dimension);
        if (j.contains("fixtures")) {
            std::filesystem::path f = j.at("fixtures").get<std::string>();
            c.fixtures = f.is_absolute() ? f : base_dir / f;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("provider config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json chat_request(const std::string& model, const std::vector<ChatMessage>& messages) {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.text}});
    return {{"model", model}, {"messages", msgs}};
}

nlohmann::json embeddings_request(const std::string& model, std::span<const std::string> texts) {
    return {{"model", model}, {"input", std::vector<std::string>(texts.begin(), texts.end())}};
}

std::string request_key(const nlohmann::json& request) {
    return text::hex64(text::fnv1a64(request.dump()));
}

std::shared_ptr<Transcript> Transcript::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open transcript " + file.string());
    auto t = std::make_shared<Transcript>();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            auto record = nlohmann::json::parse(line);
            t->responses_[record.at("key").get<std::string>()] = record.at("response");
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return t;
}

std::shared_ptr<Transcript> Transcript::open_for_append(const std::filesystem::path& file) {
    auto t = std::make_shared<Transcript>();
    if (std::filesystem::exists(file)) {
        t = load(file);
    } else if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    t->file_ = file;
    return t;
}

std::optional<nlohmann::json> Transcript::find(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = responses_.find(key);
    if (it == responses_.end()) return std::nullopt;
    return std::optional<nlohmann::json>(it->second);
}

void Transcript::append(const std::string& key, const std::string& kind,
                        const nlohmann::json& request, const nlohmann::json& response) {
    std::lock_guard lock(mutex_);
    responses_[key] = response;
    if (file_.empty()) return;
    std::ofstream out(file_, std::ios::app);
    if (!out) throw ConfigError("cannot append to transcript " + file_.string());
    out << nlohmann::json{{"key", key}, {"kind", kind}, {"request", request}, {"response", response}}.dump()
        << '\n';
}

std::size_t Transcript::size() const {
    std::lock_guard lock(mutex_);
    return responses_.size();
}

HttpChatProvider::HttpChatProvider(ProviderConfig config) : config_(std::move(config)) {
    config_.validate();
}

std::string HttpChatProvider::chat(const std::vector<ChatMessage>& messages) {
    const auto response = post_with_retries(config_, chat_request(config_.model, messages));
    return content_from_response(response, 1);
}

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderConfig config) : config_(std::move(config)) {
    config_.validate();
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed_remote(std::span<const std::string> texts) {
    const auto response = post_with_retries(config_, embeddings_request(config_.model, texts));
    return vectors_from_response(response, texts.size(), 1);
}

ReplayChatProvider::ReplayChatProvider(std::string model, std::shared_ptr<const Transcript> transcript)
    : model_(std::move(model)), transcript_(std::move(transcript)) {}

std::string ReplayChatProvider::chat(const std::vector<ChatMessage>& messages) {
    const auto key = request_key(chat_request(model_, messages));
    auto response = transcript_->find(key);
    if (!response) throw MalformedResponseError("no recorded chat response for request " + key, 1);
    if (!response->is_string()) throw MalformedResponseError("recorded chat response is not text", 1);
    return response->get<std::string>();
}

ReplayEmbeddingProvider::ReplayEmbeddingProvider(std::string model,
                                                 std::shared_ptr<const Transcript> transcript)
    : model_(std::move(model)), transcript_(std::move(transcript)) {}

std::vector<EmbeddingVector> ReplayEmbeddingProvider::embed_remote(std::span<const std::string> texts) {
    const auto key = request_key(embeddings_request(model_, texts));
    auto response = transcript_->find(key);
    if (!response) throw MalformedResponseError("no recorded embeddings for request " + key, 1);
    return vectors_from_response(*response, texts.size(), 1);
}

RecordingChatProvider::RecordingChatProvider(std::unique_ptr<ChatProvider> inner,
                                             std::shared_ptr<Transcript> sink)
    : inner_(std::move(inner)), sink_(std::move(sink)) {}

std::string RecordingChatProvider::chat(const std::vector<ChatMessage>& messages) {
    auto reply = inner_->chat(messages);
    const auto request = chat_request(inner_->model(), messages);
    sink_->append(request_key(request), "chat", request, reply);
    return reply;
}

RecordingEmbeddingProvider::RecordingEmbeddingProvider(std::unique_ptr<EmbeddingProvider> inner,
                                                       std::shared_ptr<Transcript> sink)
    : inner_(std::move(inner)), sink_(std::move(sink)) {}

std::vector<EmbeddingVector> RecordingEmbeddingProvider::embed_remote(
    std::span<const std::string> texts) {
    auto vectors = inner_->embed_remote(texts);
    nlohmann::json data = nlohmann::json::array();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto v = vectors[i].values();
        data.push_back({{"index", i}, {"embedding", std::vector<float>(v.begin(), v.end())}});
    }
    const auto request = embeddings_request(inner_->model(), texts);
    sink_->append(request_key(request), "embeddings", request, {{"data", data}, {"normalized", true}});
    return vectors;
}

RemoteEmbedder::RemoteEmbedder(std::shared_ptr<EmbeddingProvider> provider, std::size_t dimension)
    : provider_(std::move(provider)), dimension_(dimension) {}

std::vector<EmbeddingVector> RemoteEmbedder::embed(std::span<const std::string> texts) {
    auto out = provider_->embed_remote(texts);
    for (const auto& v : out) {
        if (v.dimension() != dimension_) {
            throw DimensionMismatchError("remote embedder returned dimension " +
                                         std::to_string(v.dimension()) + ", configured " +
                                         std::to_string(dimension_));
        }
    }
    return out;
}

std::unique_ptr<ChatProvider> make_chat_provider(const ProviderConfig& config,
                                                 const ProviderSession& session) {
    config.validate();
    if (session.replay_dir) {
        auto t = Transcript::load(*session.replay_dir / "chat.jsonl");
        return std::make_unique<ReplayChatProvider>(config.model, std::move(t));
    }
    std::unique_ptr<ChatProvider> provider;
    if (config.kind == "http") {
        provider = std::make_unique<HttpChatProvider>(config);
    } else {
        if (config.fixtures.empty()) throw ConfigError("chat provider needs a fixtures file");
        auto t = Transcript::load(config.fixtures);
        provider = std::make_unique<ReplayChatProvider>(config.model, std::move(t));
    }
    if (session.record_dir) {
        return std::make_unique<RecordingChatProvider>(
            std::move(provider), Transcript::open_for_append(*session.record_dir / "chat.jsonl"));
    }
    return provider;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const ProviderConfig& config,
                                                           const ProviderSession& session) {
    config.validate();
    if (session.replay_dir) {
        auto t = Transcript::load(*session.replay_dir / "embeddings.jsonl");
        return std::make_unique<ReplayEmbeddingProvider>(config.model, std::move(t));
    }
    std::unique_ptr<EmbeddingProvider> provider;
    if (config.kind == "http") {
        provider = std::make_unique<HttpEmbeddingProvider>(config);
    } else {
        if (config.fixtures.empty()) throw ConfigError("embedding provider needs a fixtures file");
        auto t = Transcript::load(config.fixtures);
        provider = std::make_unique<ReplayEmbeddingProvider>(config.model, std::move(t));
    }
    if (session.record_dir) {
        return std::make_unique<RecordingEmbeddingProvider>(
            std::move(provider), Transcript::open_for_append(*session.record_dir / "embeddings.jsonl"));
    }
    return provider;
}

}  // namespace sceneforge
