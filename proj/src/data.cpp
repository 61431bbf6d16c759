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
#include "qsann/data.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>

#include "qsann/errors.hpp"

namespace qsann {
namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

template <class T> void shuffle_in_place(std::vector<T> &items, std::mt19937_64 &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(items[i - 1], items[pick(rng)]);
    }
}

} // namespace

std::vector<RawSample> parse_tsv(std::istream &in) {
    std::vector<RawSample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            throw ParseError("missing tab before the label", line_no);
        }
        const auto label = trim(std::string_view(line).substr(tab + 1));
        if (label != "0" && label != "1") {
            throw ParseError("label must be 0 or 1, got \"" + std::string(label) + "\"",
                             line_no);
        }
        out.push_back({line.substr(0, tab), label == "1" ? 1 : 0});
    }
    if (out.empty()) {
        throw ParseError("dataset contains no samples");
    }
    return out;
}

std::vector<RawSample> load_tsv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open dataset " + path.string());
    }
    try {
        return parse_tsv(in);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) != 0) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j])) == 0) {
            ++j;
        }
        std::string_view piece = text.substr(i, j - i);
        while (!piece.empty() && std::ispunct(static_cast<unsigned char>(piece.front())) != 0) {
            piece.remove_prefix(1);
        }
        while (!piece.empty() && std::ispunct(static_cast<unsigned char>(piece.back())) != 0) {
            piece.remove_suffix(1);
        }
        if (!piece.empty()) {
            std::string token(piece);
            for (auto &c : token) {
                c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
            tokens.push_back(std::move(token));
        }
        i = j;
    }
    return tokens;
}

// ---------------------------------------------------------------------------

Vocabulary::Vocabulary() {
    tokens_.emplace_back(kOovToken);
    ids_.emplace(std::string(kOovToken), kOovId);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
    if (tokens.empty() || tokens.front() != kOovToken) {
        throw ParseError("vocabulary must start with the OOV marker");
    }
    Vocabulary v;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (v.contains(tokens[i])) {
            throw ParseError("duplicate vocabulary token \"" + tokens[i] + "\"");
        }
        v.add(tokens[i]);
    }
    return v;
}

TokenId Vocabulary::add(std::string_view token) {
    if (auto it = ids_.find(std::string(token)); it != ids_.end()) {
        return it->second;
    }
    const auto id = static_cast<TokenId>(tokens_.size());
    tokens_.emplace_back(token);
    ids_.emplace(std::string(token), id);
    return id;
}

TokenId Vocabulary::id(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kOovId : it->second;
}

const std::string &Vocabulary::token(TokenId id) const {
    if (id >= tokens_.size()) {
        throw IndexError("token id " + std::to_string(id) + " outside vocabulary of size " +
                         std::to_string(tokens_.size()));
    }
    return tokens_[id];
}

bool Vocabulary::contains(std::string_view token) const {
    return ids_.contains(std::string(token));
}

std::vector<TokenId> Vocabulary::encode(std::span<const std::string> words) const {
    std::vector<TokenId> ids;
    ids.reserve(words.size());
    for (const auto &w : words) {
        ids.push_back(id(w));
    }
    return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const TokenId> ids) const {
    std::vector<std::string> words;
    words.reserve(ids.size());
    for (TokenId id : ids) {
        words.push_back(token(id));
    }
    return words;
}

std::string Vocabulary::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ULL;
    };
    for (const auto &t : tokens_) {
        for (char c : t) {
            mix(static_cast<unsigned char>(c));
        }
        mix('\n');
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------

EmbeddingTable::EmbeddingTable(std::size_t rows, std::size_t dim)
    : rows_(rows), dim_(dim), values_(rows * dim, 0.0) {
    if (rows == 0 || dim == 0) {
        throw ConfigError("embedding table needs at least one row and one column");
    }
}

std::span<const double> EmbeddingTable::row(TokenId id) const {
    if (id >= rows_) {
        throw IndexError("token id " + std::to_string(id) + " has no embedding row");
    }
    return std::span<const double>(values_).subspan(id * dim_, dim_);
}

std::span<double> EmbeddingTable::row(TokenId id) {
    if (id >= rows_) {
        throw IndexError("token id " + std::to_string(id) + " has no embedding row");
    }
    return std::span<double>(values_).subspan(id * dim_, dim_);
}

LabeledSequence LabeledSequence::make(std::vector<TokenId> tokens,
                                      std::vector<std::string> words, int label,
                                      std::string text) {
    if (tokens.empty()) {
        throw EmptySequenceError("sequence has no tokens");
    }
    if (label != 0 && label != 1) {
        throw ConfigError("label must be 0 or 1");
    }
    return {std::move(tokens), std::move(words), label, std::move(text)};
}

// ---------------------------------------------------------------------------

Dataset build_splits(std::span<const RawSample> samples, std::span<const double> ratios,
                     std::uint64_t seed) {
    if (ratios.size() != 2 && ratios.size() != 3) {
        throw ConfigError("split ratios must be {train, test} or {train, dev, test}");
    }
    if (std::ranges::any_of(ratios, [](double r) { return !(r > 0.0); })) {
        throw ConfigError("split ratios must be positive");
    }
    if (std::abs(std::accumulate(ratios.begin(), ratios.end(), 0.0) - 1.0) > 1e-9) {
        throw ConfigError("split ratios must sum to 1");
    }

    Dataset ds;
    ds.seed = seed;
    ds.ratios.assign(ratios.begin(), ratios.end());

    std::vector<std::pair<const RawSample *, std::vector<std::string>>> usable;
    for (const auto &s : samples) {
        auto words = tokenize(s.text);
        if (words.empty()) {
            ++ds.dropped_empty;
            continue;
        }
        usable.emplace_back(&s, std::move(words));
    }
    const std::size_t n = usable.size();
    std::vector<std::size_t> sizes(ratios.size());
    std::size_t rest = 0;
    for (std::size_t k = 1; k < ratios.size(); ++k) {
        sizes[k] = static_cast<std::size_t>(std::llround(ratios[k] * static_cast<double>(n)));
        rest += sizes[k];
    }
    if (rest >= n) {
        throw ConfigError("not enough samples for the requested splits");
    }
    sizes[0] = n - rest;
    if (std::ranges::any_of(sizes, [](std::size_t s) { return s == 0; })) {
        throw ConfigError("a requested split would be empty with " + std::to_string(n) +
                          " samples");
    }

    std::mt19937_64 rng(seed);
    shuffle_in_place(usable, rng);

    for (std::size_t i = 0; i < sizes[0]; ++i) {
        for (const auto &w : usable[i].second) {
            ds.vocabulary.add(w);
        }
    }
    std::size_t offset = 0;
    const auto take = [&](std::vector<LabeledSequence> &dst, std::size_t count) {
        for (std::size_t i = offset; i < offset + count; ++i) {
            auto &[raw, words] = usable[i];
            auto ids = ds.vocabulary.encode(words);
            dst.push_back(
                LabeledSequence::make(std::move(ids), std::move(words), raw->label, raw->text));
        }
        offset += count;
    };
    take(ds.train, sizes[0]);
    if (ratios.size() == 3) {
        take(ds.dev, sizes[1]);
    }
    take(ds.test, sizes.back());
    return ds;
}

std::vector<LabeledSequence> encode_samples(std::span<const RawSample> samples,
                                            const Vocabulary &vocabulary) {
    std::vector<LabeledSequence> out;
    for (const auto &s : samples) {
        auto words = tokenize(s.text);
        if (words.empty()) {
            continue;
        }
        auto ids = vocabulary.encode(words);
        out.push_back(LabeledSequence::make(std::move(ids), std::move(words), s.label, s.text));
    }
    return out;
}

std::vector<RawSample> make_separable_corpus(std::size_t count, std::uint64_t seed) {
    static constexpr std::array<std::array<std::string_view, 8>, 2> kWords = {{
        {"chef", "cooks", "tasty", "meal", "sauce", "bakes", "dinner", "kitchen"},
        {"programmer", "runs", "useful", "application", "software", "debugs", "code",
         "compiler"},
    }};
    std::mt19937_64 rng(seed);
    std::vector<RawSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int label = static_cast<int>(i % 2);
        std::vector<std::string_view> pool(kWords[static_cast<std::size_t>(label)].begin(),
                                           kWords[static_cast<std::size_t>(label)].end());
        shuffle_in_place(pool, rng);
        const std::size_t length = std::uniform_int_distribution<int>(3, 4)(rng);
        std::string text;
        for (std::size_t k = 0; k < length; ++k) {
            text += k == 0 ? "" : " ";
            text += pool[k];
        }
        text += '.';
        out.push_back({std::move(text), label});
    }
    return out;
}

} // namespace qsann
