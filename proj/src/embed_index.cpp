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

#include "sceneforge/embed_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "sceneforge/errors.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

constexpr std::string_view kMagic = "VIDX1";

template <typename T>
EmbeddingVector normalize_impl(std::span<const T> raw,
                               EmbeddingVector (*make)(std::vector<float>)) {
    double sum = 0.0;
    for (T v : raw) {
        if (!std::isfinite(static_cast<double>(v))) {
            throw FormatError("embedding contains a non-finite value");
        }
        sum += static_cast<double>(v) * static_cast<double>(v);
    }
    if (sum == 0.0) throw DegenerateTextError("cannot normalize an all-zero embedding");
    const double norm = std::sqrt(sum);
    std::vector<float> values(raw.size());
    std::transform(raw.begin(), raw.end(), values.begin(),
                   [norm](T v) { return static_cast<float>(static_cast<double>(v) / norm); });
    return make(std::move(values));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    std::string_view take(std::size_t n) {
        need(n);
        auto out = bytes_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw FormatError("vector index: truncated data");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

EmbeddingVector EmbeddingVector::normalized(std::span<const double> raw) {
    return normalize_impl<double>(raw, [](std::vector<float> v) { return EmbeddingVector(std::move(v)); });
}

EmbeddingVector EmbeddingVector::normalized(std::span<const float> raw) {
    return normalize_impl<float>(raw, [](std::vector<float> v) { return EmbeddingVector(std::move(v)); });
}

EmbeddingVector EmbeddingVector::from_stored(std::vector<float> values) {
    double sum = 0.0;
    for (float v : values) {
        if (!std::isfinite(v)) throw FormatError("embedding contains a non-finite value");
        sum += static_cast<double>(v) * v;
    }
    if (!values.empty() && std::abs(std::sqrt(sum) - 1.0) > 1e-5) {
        throw FormatError("stored embedding is not unit-normalized");
    }
    return EmbeddingVector(std::move(values));
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw DimensionMismatchError("cosine of vectors with dimensions " +
                                     std::to_string(a.dimension()) + " and " +
                                     std::to_string(b.dimension()));
    }
    double dot = 0.0;
    const auto x = a.values();
    const auto y = b.values();
    for (std::size_t i = 0; i < x.size(); ++i) dot += static_cast<double>(x[i]) * y[i];
    return dot;
}

EmbeddingVector Embedder::embed_one(const std::string& text) {
    auto out = embed(std::span<const std::string>(&text, 1));
    return std::move(out.front());
}

EmbeddingVector embed_local(std::string_view input, std::size_t dimension) {
    if (dimension == 0) throw ConfigError("embedding dimension must be positive");
    const std::string padded = " " + text::to_lower(input) + " ";
    std::vector<double> raw(dimension, 0.0);
    const std::uint64_t basis = 0xcbf29ce484222325ULL ^ kLocalEmbeddingSeed;
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        const std::uint64_t h = text::fnv1a64(std::string_view(padded).substr(i, 3), basis);
        const double sign = ((h >> 32) & 1U) != 0 ? -1.0 : 1.0;
        raw[h % dimension] += sign;
    }
    try {
        return EmbeddingVector::normalized(std::span<const double>(raw));
    } catch (const DegenerateTextError&) {
        throw DegenerateTextError("text has no embeddable content: '" + std::string(input) + "'");
    }
}

std::vector<EmbeddingVector> LocalEmbedder::embed(std::span<const std::string> texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_local(t, dimension_));
    return out;
}

std::string LocalEmbedder::name() const {
    return "local-trigram-" + std::to_string(dimension_) + "-" + text::hex64(kLocalEmbeddingSeed);
}

VectorIndex VectorIndex::build(std::vector<IndexRecord> records, std::size_t dimension) {
    std::set<std::string_view> ids;
    for (const auto& r : records) {
        if (!ids.insert(r.id).second) throw ConfigError("vector index: duplicate id '" + r.id + "'");
        if (r.vector.dimension() != dimension) {
            throw DimensionMismatchError("vector index: record '" + r.id + "' has dimension " +
                                         std::to_string(r.vector.dimension()) + ", expected " +
                                         std::to_string(dimension));
        }
    }
    VectorIndex index;
    index.records_ = std::move(records);
    index.dimension_ = dimension;
    return index;
}

VectorIndex VectorIndex::build(std::vector<std::string> ids, std::span<const std::string> texts,
                               Embedder& embedder) {
    if (ids.size() != texts.size()) throw ConfigError("vector index: ids/texts length mismatch");
    auto vectors = embedder.embed(texts);
    if (vectors.size() != ids.size()) throw ConfigError("vector index: embedder returned wrong count");
    std::vector<IndexRecord> records;
    records.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        records.push_back({std::move(ids[i]), std::move(vectors[i])});
    }
    return build(std::move(records), embedder.dimension());
}

std::vector<SearchHit> VectorIndex::search(const EmbeddingVector& query, std::size_t k) const {
    if (k == 0) throw ConfigError("search: k must be at least 1");
    if (records_.empty()) throw EmptyIndexError("search on an empty index");
    if (query.dimension() != dimension_) {
        throw DimensionMismatchError("search: query dimension " + std::to_string(query.dimension()) +
                                     " != index dimension " + std::to_string(dimension_));
    }
    std::vector<SearchHit> hits(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        hits[i] = {records_[i].id, cosine(query, records_[i].vector), i};
    }
    const auto n = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(),
                      [](const SearchHit& a, const SearchHit& b) {
                          if (a.score != b.score) return a.score > b.score;
                          return a.position < b.position;
                      });
    hits.resize(n);
    return hits;
}

std::string VectorIndex::save() const {
    std::string out(kMagic);
    put_u32(out, static_cast<std::uint32_t>(dimension_));
    put_u32(out, static_cast<std::uint32_t>(records_.size()));
    for (const auto& r : records_) {
        put_u32(out, static_cast<std::uint32_t>(r.id.size()));
        out += r.id;
        for (float v : r.vector.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    return out;
}

VectorIndex VectorIndex::load(std::string_view bytes) {
    Reader reader(bytes);
    if (reader.take(std::min(bytes.size(), kMagic.size())) != kMagic) {
        throw FormatError("vector index: bad magic");
    }
    const std::size_t dimension = reader.u32();
    const std::size_t count = reader.u32();
    std::vector<IndexRecord> records;
    for (std::size_t i = 0; i < count; ++i) {
        const auto id_len = reader.u32();
        std::string id(reader.take(id_len));
        std::vector<float> values(dimension);
        for (auto& v : values) v = std::bit_cast<float>(reader.u32());
        records.push_back({std::move(id), EmbeddingVector::from_stored(std::move(values))});
    }
    if (!reader.done()) throw FormatError("vector index: trailing bytes after last record");
    try {
        return build(std::move(records), dimension);
    } catch (const DimensionMismatchError& e) {
        throw FormatError(std::string("vector index: ") + e.what());
    } catch (const ConfigError& e) {
        throw FormatError(std::string("vector index: ") + e.what());
    }
}

void VectorIndex::save_file(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write index file " + file.string());
    const auto bytes = save();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

VectorIndex VectorIndex::load_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IndexMissingError("index file not found: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load(buf.str());
}

}  // namespace sceneforge
