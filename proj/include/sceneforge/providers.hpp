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

#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/embed_index.hpp"

namespace sceneforge {

struct ChatMessage {
    std::string role;
    std::string text;
};

/// Connection settings for one hosted service. Endpoints speak the common
/// JSON-over-HTTP chat-completions / embeddings convention.
struct ProviderConfig {
    /// "mock", "http", or "replay".
    std::string kind = "mock";
    std::string endpoint;
    std::string model;
    std::string api_key_env = "SCENEFORGE_API_KEY";
    double timeout_s = 30.0;
    int max_retries = 2;
    /// First retry waits this long; each further retry doubles it.
    double backoff_base_s = 0.5;
    /// Mock fixtures (JSON-lines transcript) for kind == "mock".
    std::filesystem::path fixtures;
    /// Remote embedding dimension; needed before the first request.
    std::size_t dimension = 1536;

    void validate() const;
    static ProviderConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string chat(const std::vector<ChatMessage>& messages) = 0;
    virtual std::string model() const = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    /// One unit vector per input, order preserved.
    virtual std::vector<EmbeddingVector> embed_remote(std::span<const std::string> texts) = 0;
    virtual std::string model() const = 0;
};

nlohmann::json chat_request(const std::string& model, const std::vector<ChatMessage>& messages);
nlohmann::json embeddings_request(const std::string& model, std::span<const std::string> texts);

/// Hash of the canonical request JSON; the transcript lookup key.
std::string request_key(const nlohmann::json& request);

/// Append-only JSON-lines file of {key, kind, request, response} records.
/// Lookups are served from memory; appends are serialized.
class Transcript {
public:
    Transcript() = default;
    static std::shared_ptr<Transcript> load(const std::filesystem::path& file);
    /// Loads `file` when it exists and appends new records to it.
    static std::shared_ptr<Transcript> open_for_append(const std::filesystem::path& file);

    std::optional<nlohmann::json> find(const std::string& key) const;
    void append(const std::string& key, const std::string& kind, const nlohmann::json& request,
                const nlohmann::json& response);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::filesystem::path file_;
    std::unordered_map<std::string, nlohmann::json> responses_;
};

/// Chat-completions client. Connection failures and timeouts are retried
/// max_retries times with exponential backoff, as are 429 and 5xx
/// responses; after the last attempt the error carries the attempt count.
class HttpChatProvider final : public ChatProvider {
public:
    explicit HttpChatProvider(ProviderConfig config);
    std::string chat(const std::vector<ChatMessage>& messages) override;
    std::string model() const override { return config_.model; }

private:
    ProviderConfig config_;
};

class HttpEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(ProviderConfig config);
    std::vector<EmbeddingVector> embed_remote(std::span<const std::string> texts) override;
    std::string model() const override { return config_.model; }

private:
    ProviderConfig config_;
};

/// Serves canned responses from a transcript keyed by request hash. Used
/// both for bundled mock fixtures and for `--replay` sessions.
class ReplayChatProvider final : public ChatProvider {
public:
    ReplayChatProvider(std::string model, std::shared_ptr<const Transcript> transcript);
    std::string chat(const std::vector<ChatMessage>& messages) override;
    std::string model() const override { return model_; }

private:
    std::string model_;
    std::shared_ptr<const Transcript> transcript_;
};

class ReplayEmbeddingProvider final : public EmbeddingProvider {
public:
    ReplayEmbeddingProvider(std::string model, std::shared_ptr<const Transcript> transcript);
    std::vector<EmbeddingVector> embed_remote(std::span<const std::string> texts) override;
    std::string model() const override { return model_; }

private:
    std::string model_;
    std::shared_ptr<const Transcript> transcript_;
};

/// Forwards to an inner provider and appends every exchange to a transcript.
class RecordingChatProvider final : public ChatProvider {
public:
    RecordingChatProvider(std::unique_ptr<ChatProvider> inner, std::shared_ptr<Transcript> sink);
    std::string chat(const std::vector<ChatMessage>& messages) override;
    std::string model() const override { return inner_->model(); }

private:
    std::unique_ptr<ChatProvider> inner_;
    std::shared_ptr<Transcript> sink_;
};

class RecordingEmbeddingProvider final : public EmbeddingProvider {
public:
    RecordingEmbeddingProvider(std::unique_ptr<EmbeddingProvider> inner,
                               std::shared_ptr<Transcript> sink);
    std::vector<EmbeddingVector> embed_remote(std::span<const std::string> texts) override;
    std::string model() const override { return inner_->model(); }

private:
    std::unique_ptr<EmbeddingProvider> inner_;
    std::shared_ptr<Transcript> sink_;
};

/// Adapts an EmbeddingProvider to the Embedder interface used by indexes.
class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(std::shared_ptr<EmbeddingProvider> provider, std::size_t dimension);
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
    std::size_t dimension() const override { return dimension_; }
    std::string name() const override { return "remote-" + provider_->model(); }

private:
    std::shared_ptr<EmbeddingProvider> provider_;
    std::size_t dimension_;
};

/// Session-level options from the CLI.
struct ProviderSession {
    std::optional<std::filesystem::path> record_dir;
    std::optional<std::filesystem::path> replay_dir;
};

/// Builds the chat provider described by `config`, wrapped for record or
/// replay when the session asks for it. Replay wins over the config kind.
std::unique_ptr<ChatProvider> make_chat_provider(const ProviderConfig& config,
                                                 const ProviderSession& session = {});
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const ProviderConfig& config,
                                                           const ProviderSession& session = {});

}  // namespace sceneforge
