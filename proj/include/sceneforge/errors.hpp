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

#include <stdexcept>
#include <string>

namespace sceneforge {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI for JSON error output.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SCENEFORGE_DEFINE_ERROR(Name, Base)                                   \
    class Name : public Base {                                                \
    public:                                                                   \
        explicit Name(const std::string& message) : Base(#Name, message) {}   \
                                                                              \
    protected:                                                                \
        Name(std::string kind, const std::string& message)                    \
            : Base(std::move(kind), message) {}                               \
    };

// Configuration and input files.
SCENEFORGE_DEFINE_ERROR(ConfigError, Error)
SCENEFORGE_DEFINE_ERROR(FormatError, Error)
SCENEFORGE_DEFINE_ERROR(BenchmarkFormatError, FormatError)

// Taxonomy.
SCENEFORGE_DEFINE_ERROR(UnknownTaxonError, Error)
SCENEFORGE_DEFINE_ERROR(MalformedPathError, Error)

// Frontend.
SCENEFORGE_DEFINE_ERROR(EmptyPromptError, Error)
SCENEFORGE_DEFINE_ERROR(UnknownTermError, Error)

// Embeddings and index.
SCENEFORGE_DEFINE_ERROR(DegenerateTextError, Error)
SCENEFORGE_DEFINE_ERROR(DimensionMismatchError, Error)
SCENEFORGE_DEFINE_ERROR(EmptyIndexError, Error)
SCENEFORGE_DEFINE_ERROR(IndexMissingError, Error)

// Retrieval and knowledge.
SCENEFORGE_DEFINE_ERROR(NoMatchError, Error)
SCENEFORGE_DEFINE_ERROR(EmptyKnowledgeBaseError, Error)

// Planning and emission.
SCENEFORGE_DEFINE_ERROR(InvalidDimensionError, Error)
SCENEFORGE_DEFINE_ERROR(InvalidPlanError, Error)

#undef SCENEFORGE_DEFINE_ERROR

/// Errors from chat/embedding services. `attempts` is how many requests
/// were issued before giving up.
class ProviderError : public Error {
public:
    ProviderError(const std::string& message, int attempts)
        : ProviderError("ProviderError", message, attempts) {}

    int attempts() const noexcept { return attempts_; }

protected:
    ProviderError(std::string kind, const std::string& message, int attempts)
        : Error(std::move(kind), message), attempts_(attempts) {}

private:
    int attempts_;
};

class TimeoutError : public ProviderError {
public:
    TimeoutError(const std::string& message, int attempts)
        : ProviderError("TimeoutError", message, attempts) {}
};

class HttpError : public ProviderError {
public:
    HttpError(int status, const std::string& message, int attempts)
        : ProviderError("HttpError", message, attempts), status_(status) {}

    int status() const noexcept { return status_; }

private:
    int status_;
};

class MalformedResponseError : public ProviderError {
public:
    MalformedResponseError(const std::string& message, int attempts)
        : ProviderError("MalformedResponseError", message, attempts) {}
};

}  // namespace sceneforge
