// Copyright 2026 The QSANN Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qsann {

using TokenId = std::uint32_t;

/// Id 0 is reserved for out-of-vocabulary tokens.
inline constexpr TokenId kOovId = 0;
inline constexpr std::string_view kOovToken = "<oov>";

struct RawSample {
    std::string text;
    int label = 0;

    friend bool operator==(const RawSample &, const RawSample &) = default;
};

/// One sample per line: `text<TAB>label` with label 0 or 1. Blank lines are
/// skipped. Throws ParseError naming the offending line, or when no sample
/// is found.
[[nodiscard]] std::vector<RawSample> parse_tsv(std::istream &in);
[[nodiscard]] std::vector<RawSample> load_tsv(const std::filesystem::path &path);

/// Lowercases, splits on whitespace, strips leading and trailing
/// punctuation from each piece and drops pieces that end up empty.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
  public:
    Vocabulary();

    /// Rebuilds a vocabulary from its id -> token list; entry 0 must be the
    /// OOV marker and tokens must be unique.
    static Vocabulary from_tokens(std::vector<std::string> tokens);

    TokenId add(std::string_view token);
    /// kOovId for unknown tokens.
    [[nodiscard]] TokenId id(std::string_view token) const;
    [[nodiscard]] const std::string &token(TokenId id) const;
    [[nodiscard]] bool contains(std::string_view token) const;
    [[nodiscard]] std::size_t size() const noexcept { return tokens_.size(); }
    [[nodiscard]] std::span<const std::string> tokens() const noexcept { return tokens_; }

    [[nodiscard]] std::vector<TokenId> encode(std::span<const std::string> words) const;
    [[nodiscard]] std::vector<std::string> decode(std::span<const TokenId> ids) const;

    /// 64-bit FNV-1a over the id-ordered token list, as 16 hex digits.
    [[nodiscard]] std::string hash() const;

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> ids_;
};

/// vocab_size x d row-major table.
class EmbeddingTable {
  public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t rows, std::size_t dim);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::span<const double> row(TokenId id) const;
    [[nodiscard]] std::span<double> row(TokenId id);
    [[nodiscard]] std::span<double> data() noexcept { return values_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return values_; }

  private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

struct LabeledSequence {
    std::vector<TokenId> tokens;
    /// Tokenizer output, kept for attention labels.
    std::vector<std::string> words;
    int label = 0;
    std::string text;

    /// Throws EmptySequenceError for no tokens and ConfigError for labels
    /// other than 0 and 1.
    static LabeledSequence make(std::vector<TokenId> tokens, std::vector<std::string> words,
                                int label, std::string text = {});
};

struct Dataset {
    std::vector<LabeledSequence> train;
    std::vector<LabeledSequence> dev;
    std::vector<LabeledSequence> test;
    Vocabulary vocabulary;
    std::uint64_t seed = 0;
    std::vector<double> ratios;
    /// Samples whose text produced no tokens.
    std::size_t dropped_empty = 0;
};

/// `ratios` is {train, test} or {train, dev, test}, all positive, summing to
/// one. Samples are shuffled with `seed`; the vocabulary comes from the
/// training split only.
[[nodiscard]] Dataset build_splits(std::span<const RawSample> samples,
                                   std::span<const double> ratios, std::uint64_t seed);

/// Encodes raw samples with an existing vocabulary (unknown words map to
/// OOV). Samples without tokens are skipped.
[[nodiscard]] std::vector<LabeledSequence> encode_samples(std::span<const RawSample> samples,
                                                          const Vocabulary &vocabulary);

/// Two-class corpus with disjoint class vocabularies of eight words each and
/// sentences of three or four distinct words, balanced by label.
[[nodiscard]] std::vector<RawSample> make_separable_corpus(std::size_t count,
                                                           std::uint64_t seed);

} // namespace qsann
