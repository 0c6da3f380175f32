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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sceneforge {

/// Unit-normalized float vector. Construction always normalizes, so every
/// instance satisfies |v| = 1 within float rounding.
class EmbeddingVector {
public:
    EmbeddingVector() = default;

    /// Throws DegenerateTextError for an all-zero input and FormatError for
    /// non-finite entries.
    static EmbeddingVector normalized(std::span<const double> raw);
    static EmbeddingVector normalized(std::span<const float> raw);

    /// Wraps stored values verbatim (used by the index loader). Checks
    /// finiteness and the unit norm within 1e-5.
    static EmbeddingVector from_stored(std::vector<float> values);

    std::span<const float> values() const noexcept { return values_; }
    std::size_t dimension() const noexcept { return values_.size(); }

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    explicit EmbeddingVector(std::vector<float> values) : values_(std::move(values)) {}
    std::vector<float> values_;
};

/// Dot product accumulated in double; equals cosine for unit vectors.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// Anything that turns strings into unit vectors of a fixed dimension.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
    virtual std::size_t dimension() const = 0;
    /// Stable identifier folded into index fingerprints.
    virtual std::string name() const = 0;

    EmbeddingVector embed_one(const std::string& text);
};

inline constexpr std::size_t kLocalEmbeddingDim = 256;
inline constexpr std::uint64_t kLocalEmbeddingSeed = 0x5ce4e0f0a11ceULL;

/// Signed feature hashing of character trigrams. The text is lowercased
/// and padded with one space on each side; each trigram is hashed with
/// FNV-1a (offset basis xor kLocalEmbeddingSeed), bucket = h mod D and the
/// sign comes from bit 32 of h.
EmbeddingVector embed_local(std::string_view text, std::size_t dimension = kLocalEmbeddingDim);

class LocalEmbedder final : public Embedder {
public:
    explicit LocalEmbedder(std::size_t dimension = kLocalEmbeddingDim) : dimension_(dimension) {}
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
    std::size_t dimension() const override { return dimension_; }
    std::string name() const override;

private:
    std::size_t dimension_;
};

struct IndexRecord {
    std::string id;
    EmbeddingVector vector;

    friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

struct SearchHit {
    std::string id;
    double score = 0.0;
    std::size_t position = 0;  ///< insertion position in the index
};

/// Immutable exact cosine index. Search is an exhaustive scan.
///
/// Persisted form (little-endian): magic "VIDX1", u32 dimension, u32
/// count, then per record u32 id byte length, UTF-8 id bytes and
/// dimension x f32.
class VectorIndex {
public:
    VectorIndex() = default;

    /// Throws ConfigError on duplicate ids and DimensionMismatchError when a
    /// record's dimension differs from `dimension`.
    static VectorIndex build(std::vector<IndexRecord> records, std::size_t dimension);
    static VectorIndex build(std::vector<std::string> ids, std::span<const std::string> texts,
                             Embedder& embedder);

    /// Top-k by descending score, ties by ascending insertion position.
    std::vector<SearchHit> search(const EmbeddingVector& query, std::size_t k) const;

    std::string save() const;
    static VectorIndex load(std::string_view bytes);
    void save_file(const std::filesystem::path& file) const;
    static VectorIndex load_file(const std::filesystem::path& file);

    const std::vector<IndexRecord>& records() const noexcept { return records_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    friend bool operator==(const VectorIndex&, const VectorIndex&) = default;

private:
    std::vector<IndexRecord> records_;
    std::size_t dimension_ = 0;
};

}  // namespace sceneforge
